#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wattspell/core/rng.hpp"
#include "wattspell/data/pipeline.hpp"
#include "wattspell/data/redd.hpp"
#include "wattspell/data/scene_csv.hpp"
#include "wattspell/data/synth.hpp"
#include "wattspell/data/windows.hpp"

using namespace wspl;

namespace {

TimeSeries series(std::vector<std::int64_t> t, std::vector<double> v) { return {std::move(t), std::move(v)}; }

TimeSeries ramp(std::size_t n, std::int64_t period = 1) {
  TimeSeries ts;
  for (std::size_t i = 0; i < n; ++i) {
    ts.timestamps.push_back(static_cast<std::int64_t>(i) * period);
    ts.values.push_back(static_cast<double>(i + 1));
  }
  return ts;
}

TimeSeries unit_ramp(std::size_t n) {
  TimeSeries ts = ramp(n);
  for (double& v : ts.values) v /= 1000.0;
  return ts;
}

}  // namespace

TEST(ParseChannel, ReadsPairs) {
  std::istringstream in("1303132929 222.20\n1303132930 223.75\n");
  const ChannelParse p = parse_channel(in);
  EXPECT_EQ(p.series, series({1303132929, 1303132930}, {222.20, 223.75}));
}

TEST(ParseChannel, ToleratesBlankLinesAndCarriageReturns) {
  std::istringstream in("\n10 1.5\r\n\n11 2\n");
  EXPECT_EQ(parse_channel(in).series, series({10, 11}, {1.5, 2.0}));
}

TEST(ParseChannel, MalformedLineReportsLineNumber) {
  std::istringstream in("abc 1.0\n");
  try {
    parse_channel(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::istringstream third("1 2\n2 3\n3\n");
  try {
    parse_channel(third);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseChannel, CleansNegativesDuplicatesAndOrder) {
  std::istringstream in("5 1\n3 -2\n5 7\n4 1\n");
  const ChannelParse p = parse_channel(in);
  EXPECT_EQ(p.series, series({3, 4, 5}, {0.0, 1.0, 7.0}));
  EXPECT_EQ(p.clamped_negative, 1u);
  EXPECT_EQ(p.duplicates, 1u);
  EXPECT_GE(p.reordered, 1u);
  EXPECT_TRUE(p.series.valid());
}

TEST(ParseLabels, ReadsIdsAndNames) {
  std::istringstream in("1 mains\n2 mains\n3 refrigerator\n");
  const auto labels = parse_labels(in);
  ASSERT_EQ(labels.size(), 3u);
  EXPECT_EQ(labels[2], (ChannelMeta{3, "refrigerator"}));
}

TEST(Resample, ForwardFillsOntoGrid) {
  const ResampleResult r = resample_uniform(series({0, 2, 3}, {100, 200, 300}), 1);
  EXPECT_EQ(r.series, series({0, 1, 2, 3}, {100, 100, 200, 300}));
  EXPECT_EQ(r.gap_filled, 0u);
}

TEST(Resample, HoldsAcrossShortGap) {
  const ResampleResult r = resample_uniform(series({0, 3}, {100, 200}), 1);
  EXPECT_EQ(r.series.values, (std::vector<double>{100, 100, 100, 200}));
}

TEST(Resample, LongOutageIsZeroed) {
  const ResampleResult r = resample_uniform(series({0, 400}, {50, 60}), 100);
  EXPECT_EQ(r.series.values, (std::vector<double>{50, 50, 0, 0, 60}));
  EXPECT_EQ(r.gap_filled, 2u);
}

TEST(Resample, RejectsBadPeriod) { EXPECT_THROW(resample_uniform(ramp(3), 0), DomainError); }

TEST(Align, IntersectsSpans) {
  const auto out = align({series({0, 1, 2, 3}, {1, 2, 3, 4}), series({1, 2, 3, 4}, {5, 6, 7, 8})}, 1);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], series({1, 2, 3}, {2, 3, 4}));
  EXPECT_EQ(out[1], series({1, 2, 3}, {5, 6, 7}));
}

TEST(Downsample, BlockMean) {
  const TimeSeries d = downsample(ramp(10), 10);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.values[0], 5.5);
  EXPECT_EQ(d.timestamps[0], 0);
  EXPECT_EQ(downsample(ramp(10), 10, DownsampleMethod::Decimate).values[0], 1.0);
}

TEST(Downsample, DropsRemainder) { EXPECT_EQ(downsample(ramp(25), 10).size(), 2u); }

TEST(Downsample, FactorOneIsIdentity) { EXPECT_EQ(downsample(ramp(7), 1), ramp(7)); }

TEST(Downsample, CountInvariant) {
  for (std::size_t n = 1; n < 60; ++n) {
    for (std::size_t f = 1; f < 12; ++f) EXPECT_EQ(downsample(ramp(n, 3), f).size(), n / f);
  }
}

TEST(Normalize, Examples) {
  const NormStats s{0.0, 200.0};
  const TimeSeries n = normalize(series({0, 1, 2}, {0, 100, 200}), s);
  EXPECT_EQ(n.values, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(normalize_value(300.0, s), 1.0);
  EXPECT_EQ(normalize_value(-5.0, s), 0.0);
  EXPECT_EQ(normalize(series({0, 1}, {7, 7}), compute_stats(series({0, 1}, {7, 7}))).values,
            (std::vector<double>{0.0, 0.0}));
}

TEST(Normalize, StaysInUnitIntervalAndInverts) {
  SeededRng rng(3);
  TimeSeries ts;
  for (int i = 0; i < 500; ++i) {
    ts.timestamps.push_back(i);
    ts.values.push_back(rng.uniform(-50.0, 3000.0));
  }
  const NormStats s = compute_stats(ts);
  const TimeSeries n = normalize(ts, s);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_GE(n.values[i], 0.0);
    EXPECT_LE(n.values[i], 1.0);
    EXPECT_NEAR(denormalize_value(n.values[i], s), ts.values[i], 1e-12 * (s.max - s.min));
  }
}

TEST(Split, Examples) {
  const SplitRanges a = split_train_test(100, 0.8);
  EXPECT_EQ(a.train, (IndexRange{0, 80}));
  EXPECT_EQ(a.test, (IndexRange{80, 100}));
  const SplitRanges b = split_train_test(7, 0.5);
  EXPECT_EQ(b.train.size(), 3u);
  EXPECT_EQ(b.test.size(), 4u);
  EXPECT_THROW(split_train_test(10, 0.8, 64), DomainError);
  EXPECT_THROW(split_train_test(10, 1.0), DomainError);
}

TEST(Split, DisjointAndExhaustive) {
  SeededRng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(1000);
    const double ratio = rng.uniform(0.05, 0.95);
    SplitRanges s;
    try {
      s = split_train_test(n, ratio);
    } catch (const DomainError&) {
      continue;
    }
    EXPECT_EQ(s.train.begin, 0u);
    EXPECT_EQ(s.train.end, s.test.begin);
    EXPECT_EQ(s.test.end, n);
    EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n))));
  }
}

TEST(Windows, CountsAndMidpoint) {
  const TimeSeries agg = unit_ramp(64);
  const WindowBatch one = make_windows(agg, {agg}, 64);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.targets(0, 0), agg.values[32]);
  EXPECT_EQ(one.timestamps[0], 32);
  EXPECT_EQ(make_windows(unit_ramp(66), {unit_ramp(66)}, 64).size(), 3u);
  EXPECT_EQ(make_windows(unit_ramp(68), {unit_ramp(68)}, 64, 2).size(), 3u);
  EXPECT_THROW(make_windows(unit_ramp(63), {unit_ramp(63)}, 64), DomainError);
  EXPECT_THROW(make_windows(ramp(64), {ramp(64)}, 64), DomainError);
}

TEST(Windows, InputsCopySamplesAndStayNormalized) {
  SeededRng rng(5);
  TimeSeries raw;
  for (int i = 0; i < 300; ++i) {
    raw.timestamps.push_back(i * 10);
    raw.values.push_back(rng.uniform(0.0, 2000.0));
  }
  const TimeSeries n = normalize(raw, compute_stats(raw));
  const WindowBatch w = make_windows(n, {n, n}, 64, 3);
  EXPECT_EQ(w.size(), (300 - 64) / 3 + 1);
  EXPECT_EQ(w.n_appliances(), 2u);
  for (std::size_t k = 0; k < w.size(); ++k) {
    for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(w.inputs(k, j, 0), n.values[k * 3 + j]);
    EXPECT_EQ(w.targets(k, 1), n.values[k * 3 + 32]);
  }
  EXPECT_GE(w.inputs.vec().minCoeff(), 0.0);
  EXPECT_LE(w.inputs.vec().maxCoeff(), 1.0);
}

TEST(Synth, NoiselessAggregateIsSum) {
  const SynthScene s = synth_generate(reference_household(5000, 0.0, 3));
  for (std::size_t t = 0; t < s.aggregate.size(); ++t) {
    double sum = 0.0;
    for (const auto& a : s.appliances) sum += a.values[t];
    EXPECT_EQ(s.aggregate.values[t], sum);
  }
}

TEST(Synth, CyclicMeanMatchesDuty) {
  SynthSpec spec;
  spec.appliances = {{"fridge", SignatureKind::Cyclic, 150.0, 600.0, 0.5}};
  spec.sample_period_s = 10;
  spec.duration_s = 86400;
  const SynthScene s = synth_generate(spec);
  double mean = 0.0;
  for (double v : s.appliances[0].values) mean += v;
  mean /= static_cast<double>(s.appliances[0].size());
  EXPECT_NEAR(mean, 75.0, 2.0);
}

TEST(Synth, SameSeedSameScene) {
  const SynthSpec spec = reference_household(3000, 5.0, 11);
  const SynthScene a = synth_generate(spec), b = synth_generate(spec);
  EXPECT_EQ(a.aggregate, b.aggregate);
  EXPECT_EQ(a.appliances, b.appliances);
  SynthSpec other = spec;
  other.seed = 12;
  EXPECT_FALSE(synth_generate(other).aggregate == a.aggregate);
}

TEST(Synth, SpecJsonRoundTrip) {
  const SynthSpec spec = reference_household(1000, 2.0, 9);
  const SynthSpec back = synth_spec_from_json(to_json(spec));
  EXPECT_EQ(synth_generate(back).aggregate, synth_generate(spec).aggregate);
}

TEST(SceneCsv, RoundTrip) {
  const SynthScene s = synth_generate(reference_household(200, 5.0, 2));
  Scene scene{s.aggregate, {"fridge", "microwave", "heater"}, s.appliances};
  std::stringstream buf;
  write_scene_csv(buf, scene);
  const Scene back = read_scene_csv(buf);
  EXPECT_EQ(back.names, scene.names);
  EXPECT_EQ(back.aggregate.timestamps, scene.aggregate.timestamps);
  for (std::size_t t = 0; t < scene.aggregate.size(); ++t) {
    EXPECT_NEAR(back.aggregate.values[t], scene.aggregate.values[t], 5e-7);
    EXPECT_NEAR(back.appliances[2].values[t], scene.appliances[2].values[t], 5e-7);
  }
}

TEST(SceneCsv, AggregateOnlyAndErrors) {
  std::istringstream ok("timestamp,aggregate\n0,1.5\n10,2.5\n");
  const Scene s = read_scene_csv(ok);
  EXPECT_TRUE(s.names.empty());
  EXPECT_EQ(s.aggregate.values, (std::vector<double>{1.5, 2.5}));
  std::istringstream bad("timestamp,aggregate,fridge\n0,1.5\n");
  try {
    read_scene_csv(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Labels, StandardSix) { EXPECT_EQ(standard_appliance_labels().size(), 6u); }
