#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wattspell/data/timeseries.hpp"

namespace wspl {

enum class SignatureKind { Cyclic, Spike, Plateau };

/// Parameters of one synthetic appliance.
///
///   Cyclic:  square wave of `period_s` with on-fraction `duty`, random phase.
///   Spike:   rectangular pulses of `duration_s`, Poisson arrivals at
///            `arrival_rate` per second.
///   Plateau: on-blocks of random length in [0.5, 1.5] x `duration_s`
///            separated by exponential off-gaps of mean 1 / `arrival_rate`.
struct ApplianceSignature {
  std::string name;
  SignatureKind kind = SignatureKind::Cyclic;
  double amplitude = 100.0;  // watts
  double period_s = 600.0;
  double duty = 0.5;
  double duration_s = 60.0;
  double arrival_rate = 1.0 / 3600.0;
};

struct SynthSpec {
  std::vector<ApplianceSignature> appliances;
  double noise_std = 0.0;  // watts
  std::int64_t duration_s = 86400;
  std::int64_t sample_period_s = 10;
  std::int64_t start_time = 1303132800;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthScene {
  TimeSeries aggregate;
  std::vector<TimeSeries> appliances;
  std::vector<ChannelMeta> meta;
};

/// aggregate[t] = sum of appliances[t] (summed in appliance order) plus
/// N(0, noise_std^2) noise.
SynthScene synth_generate(const SynthSpec& spec);

/// The three-appliance household used for end-to-end checks: a 150 W
/// cyclic fridge, a 1200 W spiky microwave and a 1500 W heater plateau.
SynthSpec reference_household(std::int64_t samples = 50000, double noise_std = 5.0, std::uint64_t seed = 7);

SynthSpec synth_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthSpec& spec);

}  // namespace wspl
