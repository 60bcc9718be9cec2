#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// xoshiro256** generator seeded through splitmix64.
///
/// Every derived distribution (uniform reals, bounded integers, normals) is
/// implemented here rather than through <random> distributions, whose output
/// differs between standard library implementations. Single owner; parallel
/// users take independently seeded streams via split().
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("uniform range requires lo < hi");
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [0, n) by rejection, free of modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw DomainError("below(0) has an empty range");
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % n;
  }

  /// Standard normal via the Box-Muller transform.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Exponential with the given rate (events per unit).
  double exponential(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
    return -std::log1p(-uniform()) / rate;
  }

  /// Fresh generator whose seed is drawn from this stream.
  SeededRng split() noexcept { return SeededRng(next_u64()); }

  /// Fisher-Yates shuffle.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Tensor of i.i.d. uniform draws in [lo, hi), filled in row-major order.
template <typename Scalar = double>
Tensor<Scalar> rng_uniform(SeededRng& rng, Shape shape, Scalar lo, Scalar hi) {
  if (!(lo < hi)) throw DomainError("rng_uniform requires lo < hi");
  Tensor<Scalar> out(std::move(shape));
  for (auto& x : out.values()) x = lo + (hi - lo) * static_cast<Scalar>(rng.uniform());
  return out;
}

}  // namespace wspl
