#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "wattspell/core/ops.hpp"
#include "wattspell/core/rng.hpp"
#include "wattspell/core/tensor.hpp"

using namespace wspl;
using TD = Tensor<double>;

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  SeededRng rng(3);
  const TD x = rng_uniform<double>(rng, {3, 4}, -2.0, 2.0);
  EXPECT_EQ(matmul(TD::identity(3), x), x);
}

TEST(Matmul, ZeroTimesAnythingIsZero) {
  SeededRng rng(4);
  const TD x = rng_uniform<double>(rng, {3, 2}, -2.0, 2.0);
  const TD z = matmul(TD::zeros({2, 3}), x);
  EXPECT_EQ(z.shape(), (Shape{2, 2}));
  EXPECT_TRUE((z.vec().array() == 0.0).all());
}

TEST(Matmul, HandExpandedProduct) {
  const TD c = matmul(TD::matrix({{1, 2}, {3, 4}}), TD::matrix({{5}, {6}}));
  ASSERT_EQ(c.shape(), (Shape{2, 1}));
  EXPECT_EQ(c(0, 0), 17.0);
  EXPECT_EQ(c(1, 0), 39.0);
}

TEST(Matmul, InnerMismatchNamesBothShapes) {
  try {
    matmul(TD::zeros({2, 3}), TD::zeros({2, 2}));
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2x3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2x2]"), std::string::npos) << msg;
  }
}

TEST(Matmul, AssociativeOnRandomChains) {
  SeededRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.below(6), k = 1 + rng.below(6), l = 1 + rng.below(6), n = 1 + rng.below(6);
    const TD a = rng_uniform<double>(rng, {m, k}, -1.0, 1.0);
    const TD b = rng_uniform<double>(rng, {k, l}, -1.0, 1.0);
    const TD c = rng_uniform<double>(rng, {l, n}, -1.0, 1.0);
    const TD left = matmul(matmul(a, b), c), right = matmul(a, matmul(b, c));
    const double scale = std::max(1.0, right.vec().cwiseAbs().maxCoeff());
    EXPECT_LE((left.vec() - right.vec()).cwiseAbs().maxCoeff() / scale, 1e-9);
  }
}

TEST(Elementwise, ZeroCases) {
  EXPECT_EQ(activate(Activation::Tanh, 0.0), 0.0);
  EXPECT_EQ(activate(Activation::Sigmoid, 0.0), 0.5);
  EXPECT_EQ(activate(Activation::Relu, 0.0), 0.0);
}

TEST(Elementwise, TanhIsOdd) {
  SeededRng rng(5);
  const TD x = rng_uniform<double>(rng, {20}, -5.0, 5.0);
  TD neg = x;
  neg.vec() *= -1.0;
  const TD a = elementwise(x, Activation::Tanh), b = elementwise(neg, Activation::Tanh);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(a[i], -b[i]);
}

TEST(Elementwise, SigmoidOfLogThree) { EXPECT_NEAR(sigmoid(std::log(3.0)), 0.75, 1e-15); }

TEST(Elementwise, SigmoidStableAtExtremes) {
  EXPECT_EQ(sigmoid(-1000.0), 0.0);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
}

TEST(Elementwise, RejectsNonFinite) {
  EXPECT_THROW(elementwise(TD::vector({1.0, NAN}), Activation::Relu), DomainError);
  EXPECT_THROW(elementwise(TD::vector({INFINITY}), Activation::Tanh), DomainError);
}

TEST(Softmax, EqualEntriesGiveUniform) {
  for (double c : {-7.0, 0.0, 3.5, 1e6}) {
    const TD s = softmax(TD::vector({c, c, c}));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s[i], 1.0 / 3.0, 1e-15);
  }
}

TEST(Softmax, LengthOneIsOne) { EXPECT_EQ(softmax(TD::vector({std::exp(1.0)}))[0], 1.0); }

TEST(Softmax, PeakedExample) {
  const TD s = softmax(TD::vector({10, 0, 0}));
  // 1 / (1 + 2 e^-10) and e^-10 / (1 + 2 e^-10)
  const double tail = std::exp(-10.0) / (1.0 + 2.0 * std::exp(-10.0));
  EXPECT_NEAR(s[0], 0.999909, 1e-6);
  EXPECT_NEAR(s[1], 0.0000454, 1e-6);
  EXPECT_NEAR(s[2], 0.0000454, 1e-6);
  EXPECT_NEAR(s[1], tail, 1e-15);
}

TEST(Softmax, Errors) {
  EXPECT_THROW(softmax(TD()), DomainError);
  EXPECT_THROW(softmax(TD::vector({1.0, NAN})), DomainError);
}

TEST(Softmax, SumsToOneAndShiftInvariant) {
  SeededRng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(trial < 190 ? 50 : 10000);
    const TD e = rng_uniform<double>(rng, {n}, -30.0, 30.0);
    const TD s = softmax(e);
    EXPECT_NEAR(s.vec().sum(), 1.0, 1e-12);
    TD shifted = e;
    shifted.vec().array() += rng.uniform(-100.0, 100.0);
    const TD s2 = softmax(shifted);
    EXPECT_LE((s.vec() - s2.vec()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Rng, SameSeedReproducesDifferentDraws) {
  SeededRng a(42), b(42);
  const TD a1 = rng_uniform<double>(a, {4}, 0.0, 1.0), a2 = rng_uniform<double>(a, {4}, 0.0, 1.0);
  const TD b1 = rng_uniform<double>(b, {4}, 0.0, 1.0), b2 = rng_uniform<double>(b, {4}, 0.0, 1.0);
  EXPECT_FALSE(a1 == a2);
  EXPECT_EQ(a1, b1);
  EXPECT_EQ(a2, b2);
}

TEST(Rng, DegenerateRangeRejected) {
  SeededRng rng(1);
  EXPECT_THROW(rng_uniform<double>(rng, {2}, 1.0, 1.0 - 0.0), DomainError);
  EXPECT_THROW(rng_uniform<double>(rng, {2}, 2.0, 1.0), DomainError);
}

TEST(Rng, UniformMeanNearHalf) {
  SeededRng rng(42);
  const TD x = rng_uniform<double>(rng, {100000}, 0.0, 1.0);
  const double mean = x.vec().mean();
  EXPECT_GE(mean, 0.495);
  EXPECT_LE(mean, 0.505);
  EXPECT_GE(x.vec().minCoeff(), 0.0);
  EXPECT_LT(x.vec().maxCoeff(), 1.0);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  SeededRng rng(8);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.below(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, ShuffleIsPermutation) {
  SeededRng rng(9);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(v.begin(), v.end());
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

TEST(Rng, SplitStreamsDiffer) {
  SeededRng master(5);
  SeededRng a = master.split(), b = master.split();
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Tensor, ShapeRules) {
  EXPECT_THROW(TD({2, 0}), ShapeError);
  EXPECT_THROW(TD(Shape{}), ShapeError);
  EXPECT_THROW(TD({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  TD t({2, 3, 4});
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.matrix().rows(), 2);
  EXPECT_EQ(t.matrix().cols(), 12);
  EXPECT_THROW(t.reshaped({5, 5}), ShapeError);
}

TEST(Tensor, RowMajorLayout) {
  const TD m = TD::matrix({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m[1], 2.0);
  EXPECT_EQ(m[3], 4.0);
  EXPECT_EQ(m.matrix()(1, 2), 6.0);
  const TD rows = slice_rows(m, 1, 2);
  EXPECT_EQ(rows.shape(), (Shape{1, 3}));
  EXPECT_EQ(rows[0], 4.0);
}

TEST(Purity, IdenticalInputsGiveBitwiseEqualOutputs) {
  SeededRng r1(77), r2(77);
  const TD a = rng_uniform<double>(r1, {5, 5}, -1.0, 1.0), b = rng_uniform<double>(r2, {5, 5}, -1.0, 1.0);
  EXPECT_EQ(matmul(a, a), matmul(b, b));
  EXPECT_EQ(elementwise(a, Activation::Sigmoid), elementwise(b, Activation::Sigmoid));
  EXPECT_EQ(softmax(a.reshaped({25})), softmax(b.reshaped({25})));
}
