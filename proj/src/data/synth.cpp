#include "wattspell/data/synth.hpp"

#include <cmath>

#include "wattspell/core/error.hpp"
#include "wattspell/core/rng.hpp"

namespace wspl {

namespace {

/// Sets amplitude on every sample whose offset lies in [from, to).
void mark(std::vector<double>& values, double from, double to, double dt, double amplitude) {
  const auto n = static_cast<std::int64_t>(values.size());
  auto k = static_cast<std::int64_t>(std::ceil(from / dt));
  for (; k < n && static_cast<double>(k) * dt < to; ++k) {
    if (k >= 0) values[static_cast<std::size_t>(k)] = amplitude;
  }
}

std::vector<double> render(const ApplianceSignature& sig, std::size_t n, double dt, SeededRng& rng) {
  std::vector<double> v(n, 0.0);
  const double horizon = static_cast<double>(n) * dt;
  switch (sig.kind) {
    case SignatureKind::Cyclic: {
      const double phase = rng.uniform() * sig.period_s;
      const double on = sig.duty * sig.period_s;
      for (std::size_t k = 0; k < n; ++k) {
        const double local = std::fmod(static_cast<double>(k) * dt + phase, sig.period_s);
        v[k] = local < on ? sig.amplitude : 0.0;
      }
      break;
    }
    case SignatureKind::Spike: {
      for (double t = rng.exponential(sig.arrival_rate); t < horizon;
           t += sig.duration_s + rng.exponential(sig.arrival_rate)) {
        mark(v, t, t + sig.duration_s, dt, sig.amplitude);
      }
      break;
    }
    case SignatureKind::Plateau: {
      double t = rng.exponential(sig.arrival_rate);
      while (t < horizon) {
        const double length = sig.duration_s * rng.uniform(0.5, 1.5);
        mark(v, t, t + length, dt, sig.amplitude);
        t += length + rng.exponential(sig.arrival_rate);
      }
      break;
    }
  }
  return v;
}

SignatureKind kind_from_string(const std::string& s) {
  if (s == "cyclic") return SignatureKind::Cyclic;
  if (s == "spike") return SignatureKind::Spike;
  if (s == "plateau") return SignatureKind::Plateau;
  throw DomainError("unknown signature type '" + s + "' (expected cyclic, spike or plateau)");
}

const char* kind_name(SignatureKind k) {
  switch (k) {
    case SignatureKind::Cyclic:
      return "cyclic";
    case SignatureKind::Spike:
      return "spike";
    case SignatureKind::Plateau:
      return "plateau";
  }
  return "cyclic";
}

}  // namespace

void SynthSpec::validate() const {
  if (duration_s <= 0) throw DomainError("synthetic scene duration must be positive");
  if (sample_period_s <= 0) throw DomainError("synthetic sample period must be positive");
  if (duration_s < sample_period_s) throw DomainError("synthetic scene shorter than one sample");
  if (!(noise_std >= 0.0)) throw DomainError("noise standard deviation must be non-negative");
  if (appliances.empty()) throw DomainError("synthetic scene needs at least one appliance");
  for (const auto& a : appliances) {
    if (a.name.empty()) throw DomainError("appliance name must not be empty");
    if (!(a.amplitude > 0.0)) throw DomainError("appliance " + a.name + ": amplitude must be positive");
    switch (a.kind) {
      case SignatureKind::Cyclic:
        if (!(a.period_s > 0.0)) throw DomainError("appliance " + a.name + ": period must be positive");
        if (!(a.duty >= 0.0 && a.duty <= 1.0)) throw DomainError("appliance " + a.name + ": duty must lie in [0, 1]");
        break;
      case SignatureKind::Spike:
      case SignatureKind::Plateau:
        if (!(a.duration_s > 0.0)) throw DomainError("appliance " + a.name + ": duration must be positive");
        if (!(a.arrival_rate > 0.0)) throw DomainError("appliance " + a.name + ": arrival rate must be positive");
        break;
    }
  }
}

SynthScene synth_generate(const SynthSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.duration_s / spec.sample_period_s);
  const auto dt = static_cast<double>(spec.sample_period_s);
  SeededRng master(spec.seed);

  SynthScene scene;
  std::vector<std::int64_t> timestamps(n);
  for (std::size_t k = 0; k < n; ++k) timestamps[k] = spec.start_time + static_cast<std::int64_t>(k) * spec.sample_period_s;

  int id = 1;
  for (const auto& sig : spec.appliances) {
    SeededRng rng = master.split();
    scene.appliances.push_back({timestamps, render(sig, n, dt, rng)});
    scene.meta.push_back({++id, sig.name});
  }

  SeededRng noise = master.split();
  scene.aggregate.timestamps = timestamps;
  scene.aggregate.values.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double total = 0.0;
    for (const auto& a : scene.appliances) total += a.values[k];
    if (spec.noise_std > 0.0) total += spec.noise_std * noise.normal();
    scene.aggregate.values[k] = total;
  }
  return scene;
}

SynthSpec reference_household(std::int64_t samples, double noise_std, std::uint64_t seed) {
  SynthSpec spec;
  spec.sample_period_s = 10;
  spec.duration_s = samples * spec.sample_period_s;
  spec.noise_std = noise_std;
  spec.seed = seed;

  ApplianceSignature fridge;
  fridge.name = "refrigerator";
  fridge.kind = SignatureKind::Cyclic;
  fridge.amplitude = 150.0;
  fridge.period_s = 2400.0;
  fridge.duty = 0.45;

  ApplianceSignature microwave;
  microwave.name = "microwave";
  microwave.kind = SignatureKind::Spike;
  microwave.amplitude = 1200.0;
  microwave.duration_s = 240.0;
  microwave.arrival_rate = 1.0 / 5400.0;

  ApplianceSignature heater;
  heater.name = "electric_heat";
  heater.kind = SignatureKind::Plateau;
  heater.amplitude = 1500.0;
  heater.duration_s = 5400.0;
  heater.arrival_rate = 1.0 / 14400.0;

  spec.appliances = {fridge, microwave, heater};
  return spec;
}

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("synthetic spec must be a JSON object");
  SynthSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "noise_std") spec.noise_std = value.get<double>();
    else if (key == "duration_s") spec.duration_s = value.get<std::int64_t>();
    else if (key == "sample_period_s") spec.sample_period_s = value.get<std::int64_t>();
    else if (key == "start_time") spec.start_time = value.get<std::int64_t>();
    else if (key == "seed") spec.seed = value.get<std::uint64_t>();
    else if (key == "appliances") {
      for (const auto& a : value) {
        ApplianceSignature sig;
        for (const auto& [k, v] : a.items()) {
          if (k == "name") sig.name = v.get<std::string>();
          else if (k == "type") sig.kind = kind_from_string(v.get<std::string>());
          else if (k == "amplitude") sig.amplitude = v.get<double>();
          else if (k == "period_s") sig.period_s = v.get<double>();
          else if (k == "duty") sig.duty = v.get<double>();
          else if (k == "duration_s") sig.duration_s = v.get<double>();
          else if (k == "arrival_rate") sig.arrival_rate = v.get<double>();
          else throw DomainError("unknown appliance key '" + k + "'");
        }
        spec.appliances.push_back(std::move(sig));
      }
    } else {
      throw DomainError("unknown synthetic spec key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const SynthSpec& spec) {
  nlohmann::json apps = nlohmann::json::array();
  for (const auto& a : spec.appliances) {
    apps.push_back({{"name", a.name},
                    {"type", kind_name(a.kind)},
                    {"amplitude", a.amplitude},
                    {"period_s", a.period_s},
                    {"duty", a.duty},
                    {"duration_s", a.duration_s},
                    {"arrival_rate", a.arrival_rate}});
  }
  return {{"noise_std", spec.noise_std},
          {"duration_s", spec.duration_s},
          {"sample_period_s", spec.sample_period_s},
          {"start_time", spec.start_time},
          {"seed", spec.seed},
          {"appliances", apps}};
}

}  // namespace wspl
