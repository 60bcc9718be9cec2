#include <gtest/gtest.h>

#include <cmath>

#include "wattspell/core/rng.hpp"
#include "wattspell/layers/attention.hpp"
#include "wattspell/layers/bilstm.hpp"
#include "wattspell/layers/conv1d.hpp"
#include "wattspell/layers/dense.hpp"
#include "wattspell/layers/dropout.hpp"
#include "wattspell/layers/layout.hpp"
#include "wattspell/layers/maxpool1d.hpp"
#include "wattspell/verify/gradcheck.hpp"

using namespace wspl;
using TD = Tensor<double>;

namespace {

TD uniform(SeededRng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  return rng_uniform<double>(rng, std::move(shape), lo, hi);
}

LstmParams<double> random_lstm(SeededRng& rng, std::size_t D, std::size_t H) {
  return {uniform(rng, {4 * H, D}), uniform(rng, {4 * H, H}), uniform(rng, {4 * H})};
}

}  // namespace

// ---- conv1d ----

TEST(Conv1d, UnitKernelIsReluOfShiftedInput) {
  const ConvParams<double> p{TD({1, 1, 1}, 1.0), TD::vector({0.5})};
  const TD y = conv1d_forward(TD::matrix({{-2, -0.25, 0, 3}}), p);
  ASSERT_EQ(y.shape(), (Shape{1, 4}));
  EXPECT_EQ(y[0], 0.0);
  EXPECT_EQ(y[1], 0.25);
  EXPECT_EQ(y[2], 0.5);
  EXPECT_EQ(y[3], 3.5);
}

TEST(Conv1d, PairSumExample) {
  const ConvParams<double> p{TD({1, 1, 2}, 1.0), TD::vector({0.0})};
  const TD y = conv1d_forward(TD::matrix({{1, 2, 3, 4}}), p);
  EXPECT_EQ(y, TD::matrix({{3, 5, 7}}));
}

TEST(Conv1d, ZeroKernelsGiveZeros) {
  SeededRng rng(1);
  const TD y = conv1d_forward(uniform(rng, {2, 9}), ConvParams<double>::zeros(3, 2, 4), 2);
  EXPECT_EQ(y, TD::zeros({3, 3}));
}

TEST(Conv1d, OutputLengthAndErrors) {
  EXPECT_EQ(conv_output_length(64, 5, 1), 60u);
  EXPECT_EQ(conv_output_length(10, 3, 2), 4u);
  EXPECT_THROW(conv_output_length(4, 5, 1), ShapeError);
  EXPECT_THROW(conv_output_length(8, 3, 0), DomainError);
  EXPECT_THROW(conv1d_forward(TD({2, 8}), ConvParams<double>::zeros(1, 3, 2)), ShapeError);
}

TEST(Conv1d, MatchesTripleLoopOracle) {
  SeededRng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t C = 1 + rng.below(3), F = 1 + rng.below(3), L = 1 + rng.below(4);
    const std::size_t T = L + rng.below(17 - L), stride = 1 + rng.below(3);
    const TD x = uniform(rng, {C, T});
    const ConvParams<double> p{uniform(rng, {F, C, L}), uniform(rng, {F})};
    const TD y = conv1d_forward(x, p, stride);
    const std::size_t Tout = (T - L) / stride + 1;
    ASSERT_EQ(y.shape(), (Shape{F, Tout}));
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t t = 0; t < Tout; ++t) {
        double acc = p.bias[f];
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t n = 0; n < L; ++n) acc += x(c, t * stride + n) * p.kernels[(f * C + c) * L + n];
        EXPECT_EQ(y(f, t), acc > 0.0 ? acc : 0.0);
      }
    }
  }
}

TEST(Conv1d, BatchedEqualsPerSample) {
  SeededRng rng(3);
  const TD xb = uniform(rng, {3, 2, 10});
  const ConvParams<double> p{uniform(rng, {4, 2, 3}), uniform(rng, {4})};
  const TD yb = conv1d_forward(xb, p);
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_EQ(conv1d_forward(slice_rows(xb, b, b + 1).reshaped({2, 10}), p), slice_rows(yb, b, b + 1).reshaped({4, 8}));
  }
}

// ---- maxpool1d ----

TEST(MaxPool1d, ConstantChannel) {
  EXPECT_EQ(maxpool1d_forward(TD::matrix({{2.5, 2.5, 2.5, 2.5}}), 2), TD::matrix({{2.5, 2.5}}));
}

TEST(MaxPool1d, Examples) {
  EXPECT_EQ(maxpool1d_forward(TD::matrix({{1, 3, 2, 5}}), 2), TD::matrix({{3, 5}}));
  EXPECT_EQ(maxpool1d_forward(TD::matrix({{7, 1, 1}}), 2), TD::matrix({{7}}));
}

TEST(MaxPool1d, Errors) {
  EXPECT_THROW(maxpool1d_forward(TD::matrix({{1, 2}}), 0), DomainError);
  EXPECT_THROW(maxpool1d_forward(TD::matrix({{1, 2}}), 3), ShapeError);
}

TEST(MaxPool1d, GradientRoutesToFirstMaximum) {
  MaxPoolCache cache;
  maxpool1d_forward(TD::matrix({{4, 4, 1, 2}}), 2, &cache);
  const TD g = maxpool1d_backward(TD::matrix({{10, 20}}), cache);
  EXPECT_EQ(g, TD::matrix({{10, 0, 0, 20}}));
}

// ---- lstm ----

TEST(Lstm, ZeroParamsZeroStateStaysZero) {
  SeededRng rng(4);
  const auto p = LstmParams<double>::zeros(3, 2);
  const LstmState<double> s = lstm_cell_step(uniform(rng, {3}), {TD({2}), TD({2})}, p);
  EXPECT_EQ(s.h, TD::zeros({2}));
  EXPECT_EQ(s.c, TD::zeros({2}));
}

TEST(Lstm, ZeroParamsUnitCell) {
  const auto p = LstmParams<double>::zeros(1, 1);
  const LstmState<double> s = lstm_cell_step(TD::vector({0.7}), {TD({1}), TD({1}, 1.0)}, p);
  EXPECT_DOUBLE_EQ(s.c[0], 0.5);
  EXPECT_DOUBLE_EQ(s.h[0], 0.5 * std::tanh(0.5));
  EXPECT_NEAR(s.h[0], 0.23106, 1e-5);
}

TEST(Lstm, HiddenLengthIsH) {
  SeededRng rng(5);
  const auto p = random_lstm(rng, 5, 3);
  const LstmState<double> s = lstm_cell_step(uniform(rng, {5}), {TD({3}), TD({3})}, p);
  EXPECT_EQ(s.h.shape(), (Shape{3}));
  EXPECT_EQ(s.c.shape(), (Shape{3}));
  EXPECT_THROW(lstm_cell_step(uniform(rng, {4}), {TD({3}), TD({3})}, p), ShapeError);
}

TEST(Lstm, HiddenBoundedByOne) {
  SeededRng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    LstmParams<double> p = random_lstm(rng, 3, 4);
    p.w_input.vec() *= 20.0;
    const LstmState<double> s = lstm_cell_step(uniform(rng, {3}, -5, 5), {uniform(rng, {4}), uniform(rng, {4}, -50, 50)}, p);
    // tanh rounds to exactly 1 in double once saturated.
    EXPECT_LE(s.h.vec().cwiseAbs().maxCoeff(), 1.0);
    const LstmState<double> mild = lstm_cell_step(uniform(rng, {3}), {uniform(rng, {4}), uniform(rng, {4})}, random_lstm(rng, 3, 4));
    EXPECT_LT(mild.h.vec().cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Lstm, SequenceStepsMatchCellSteps) {
  SeededRng rng(7);
  const auto p = random_lstm(rng, 2, 3);
  const TD x = uniform(rng, {5, 1, 2});
  const TD h = lstm_sequence_forward(x, p, false);
  LstmState<double> s{TD({3}), TD({3})};
  for (std::size_t t = 0; t < 5; ++t) {
    s = lstm_cell_step(slice_rows(x, t, t + 1).reshaped({2}), s, p);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(h(t, 0, k), s.h[k], 1e-14);
  }
}

// ---- bilstm ----

TEST(BiLstm, ZeroParamsGiveZeros) {
  SeededRng rng(8);
  const TD y = bilstm_forward(uniform(rng, {6, 3}), BiLstmParams<double>::zeros(3, 4));
  EXPECT_EQ(y, TD::zeros({6, 8}));
}

TEST(BiLstm, SingleStepHalvesAreCellSteps) {
  SeededRng rng(9);
  const BiLstmParams<double> p{random_lstm(rng, 3, 2), random_lstm(rng, 3, 2)};
  const TD x = uniform(rng, {1, 3});
  const TD y = bilstm_forward(x, p);
  const LstmState<double> zero{TD({2}), TD({2})};
  const TD hf = lstm_cell_step(x.reshaped({3}), zero, p.fwd).h;
  const TD hb = lstm_cell_step(x.reshaped({3}), zero, p.bwd).h;
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(y(0, k), hf[k], 1e-15);
    EXPECT_NEAR(y(0, 2 + k), hb[k], 1e-15);
  }
}

TEST(BiLstm, PalindromeSymmetry) {
  SeededRng rng(10);
  const auto l = random_lstm(rng, 2, 3);
  const BiLstmParams<double> p{l, l};
  const std::size_t T = 7;
  TD x({T, 2});
  for (std::size_t t = 0; t <= T / 2; ++t) {
    for (std::size_t d = 0; d < 2; ++d) {
      const double v = rng.uniform(-1.0, 1.0);
      x(t, d) = v;
      x(T - 1 - t, d) = v;
    }
  }
  const TD y = bilstm_forward(x, p);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(y(t, 3 + k), y(T - 1 - t, k));
}

TEST(BiLstm, EveryOutputDependsOnEveryInput) {
  SeededRng rng(11);
  const BiLstmParams<double> p{random_lstm(rng, 2, 3), random_lstm(rng, 2, 3)};
  const TD x = uniform(rng, {3, 2});
  const TD base = bilstm_forward(x, p);
  for (std::size_t tp = 0; tp < 3; ++tp) {
    TD xp = x;
    xp(tp, 0) += 1e-3;
    const TD y = bilstm_forward(xp, p);
    for (std::size_t t = 0; t < 3; ++t) {
      double diff = 0.0;
      for (std::size_t k = 0; k < 6; ++k) diff = std::max(diff, std::abs(y(t, k) - base(t, k)));
      EXPECT_GT(diff, 0.0) << "row " << t << " ignores input " << tp;
    }
  }
}

TEST(BiLstm, EmptySequenceRejected) { EXPECT_THROW(bilstm_forward(TD(), BiLstmParams<double>::zeros(2, 2)), DomainError); }

// ---- attention ----

TEST(Attention, ZeroScoreVectorGivesUniformMean) {
  SeededRng rng(12);
  AttentionParams<double> p{uniform(rng, {5, 4}), uniform(rng, {5}), TD({5})};
  const TD h = uniform(rng, {6, 4});
  const AttentionOutput<double> out = attention_forward(h, p);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_NEAR(out.alpha[t], 1.0 / 6.0, 1e-15);
  for (std::size_t k = 0; k < 4; ++k) {
    double mean = 0.0;
    for (std::size_t t = 0; t < 6; ++t) mean += h(t, k) / 6.0;
    EXPECT_NEAR(out.context[k], mean, 1e-14);
  }
}

TEST(Attention, SingleStepReturnsThatStep) {
  SeededRng rng(13);
  const AttentionParams<double> p{uniform(rng, {3, 4}), uniform(rng, {3}), uniform(rng, {3})};
  const TD h = uniform(rng, {1, 4});
  const AttentionOutput<double> out = attention_forward(h, p);
  EXPECT_EQ(out.alpha[0], 1.0);
  EXPECT_EQ(out.context, h.reshaped({4}));
}

TEST(Attention, PeakedEnergies) {
  // One hidden unit, W = [1, 0], b = 0: energies v * tanh(h_t0). Picking
  // v = 10 / tanh(a) with rows (a, y0), (0, y1), (0, y1) gives e = [10, 0, 0].
  const double a = 2.0;
  const AttentionParams<double> p{TD::matrix({{1, 0}}), TD::vector({0}), TD::vector({10.0 / std::tanh(a)})};
  const TD h = TD::matrix({{a, 0.3}, {0, -0.4}, {0, -0.4}});
  const AttentionOutput<double> out = attention_forward(h, p);
  EXPECT_NEAR(out.alpha[0], 0.999909, 1e-6);
  EXPECT_NEAR(out.alpha[1], 4.54e-5, 1e-7);
  EXPECT_NEAR(out.alpha[2], 4.54e-5, 1e-7);
  EXPECT_NEAR(out.context[0], a, 2e-4);
  EXPECT_NEAR(out.context[1], 0.3, 2e-4);
}

TEST(Attention, AlphaSumsToOneAndContextWithinColumnRange) {
  SeededRng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t T = 1 + rng.below(12), I = 2 + rng.below(6), A = 1 + rng.below(6);
    const AttentionParams<double> p{uniform(rng, {A, I}, -3, 3), uniform(rng, {A}), uniform(rng, {A}, -5, 5)};
    const TD h = uniform(rng, {T, I}, -2, 2);
    const AttentionOutput<double> out = attention_forward(h, p);
    EXPECT_NEAR(out.alpha.vec().sum(), 1.0, 1e-12);
    for (std::size_t k = 0; k < I; ++k) {
      double lo = h(0, k), hi = h(0, k);
      for (std::size_t t = 1; t < T; ++t) {
        lo = std::min(lo, h(t, k));
        hi = std::max(hi, h(t, k));
      }
      EXPECT_GE(out.context[k], lo - 1e-12);
      EXPECT_LE(out.context[k], hi + 1e-12);
    }
  }
}

TEST(Attention, EmptyInputRejected) {
  EXPECT_THROW(attention_forward(TD(), AttentionParams<double>::zeros(2, 2)), DomainError);
}

// ---- dense ----

TEST(Dense, IdentityAndZeroWeights) {
  SeededRng rng(15);
  const TD c = uniform(rng, {3});
  EXPECT_EQ(dense_forward(c, DenseParams<double>{TD::identity(3), TD({3})}), c);
  const TD b = uniform(rng, {2});
  EXPECT_EQ(dense_forward(c, DenseParams<double>{TD({2, 3}), b}), b);
}

TEST(Dense, HandExample) {
  const DenseParams<double> p{TD::matrix({{1, 1}, {1, -1}}), TD::vector({0, 1})};
  EXPECT_EQ(dense_forward(TD::vector({2, 3}), p), TD::vector({5, 0}));
}

// ---- dropout ----

TEST(Dropout, InferenceIsBitwiseIdentity) {
  SeededRng rng(16);
  const TD x = uniform(rng, {4, 5});
  EXPECT_EQ(dropout_forward(x, DropoutSpec{0.25, false}, rng), x);
}

TEST(Dropout, ZeroRateIsIdentity) {
  SeededRng rng(17);
  const TD x = uniform(rng, {4, 5});
  EXPECT_EQ(dropout_forward(x, DropoutSpec{0.0, true}, rng), x);
}

TEST(Dropout, InvertedScalingKeepsMean) {
  SeededRng rng(18);
  const TD y = dropout_forward(TD({100000}, 1.0), DropoutSpec{0.5, true}, rng);
  const double mean = y.vec().mean();
  EXPECT_GE(mean, 0.98);
  EXPECT_LE(mean, 1.02);
  for (double v : y.values()) EXPECT_TRUE(v == 0.0 || v == 2.0);
}

TEST(Dropout, RateOutOfRangeRejected) {
  SeededRng rng(19);
  EXPECT_THROW(dropout_forward(TD({2}), DropoutSpec{1.0, true}, rng), DomainError);
  EXPECT_THROW(dropout_forward(TD({2}), DropoutSpec{-0.1, true}, rng), DomainError);
}

// ---- layout ----

TEST(Layout, TimeMajorRoundTrip) {
  SeededRng rng(20);
  const TD x = uniform(rng, {2, 3, 4});
  const TD t = to_time_major(x);
  EXPECT_EQ(t.shape(), (Shape{4, 2, 3}));
  EXPECT_EQ(t(3, 1, 2), x(1, 2, 3));
  EXPECT_EQ(to_channel_major(t), x);
}

// ---- finite differences ----

TEST(GradCheck, RelativeErrorDefinition) {
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(1.0, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(relative_error(1e-9, 0.0), 0.1);
}

TEST(GradCheck, EveryLayerWithinTolerance) {
  const std::vector<GradCheckEntry> entries = gradient_check_layers({});
  ASSERT_EQ(entries.size(), 9u);
  for (const auto& e : entries) {
    EXPECT_GT(e.checked, 0u) << e.op;
    EXPECT_LE(e.max_rel_error, 1e-4) << e.op;
  }
}
