#include <gtest/gtest.h>

#include <cmath>

#include "network.hpp"
#include "random.hpp"
#include "support.hpp"

using namespace fabp;
using fabp::test::vec;

namespace {

long double logsig(long double x) { return 1.0L / (1.0L + std::exp(-x)); }

WeightSet single_linear(double w, double b) {
  WeightSet ws = zero_weight_set(Topology::uniform({1, 1}, Transfer::Linear));
  ws.layers[0].weights(0, 0) = w;
  ws.layers[0].bias(0) = b;
  return ws;
}

bool close(double a, double n) {
  return std::abs(a - n) <= std::max(1e-6, 1e-4 * std::max(std::abs(a), std::abs(n)));
}

} // namespace

TEST(Init, EntriesInHalfOpenRange) {
  Rng rng(3);
  const Topology t = Topology::uniform({13, 6, 3}, Transfer::LogSigmoid);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd v = flatten(init_weight_set(t, 0.5, rng));
    EXPECT_GE(v.minCoeff(), -0.25);
    EXPECT_LT(v.maxCoeff(), 0.25);
  }
}

TEST(Init, SameSeedSameWeights) {
  const Topology t = Topology::uniform({4, 3, 3}, Transfer::LogSigmoid);
  Rng a(11), b(11);
  EXPECT_EQ(init_weight_set(t, 0.5, a), init_weight_set(t, 0.5, b));
}

TEST(Init, MonteCarloMeanNearZero) {
  const Topology t = Topology::uniform({4, 3, 3}, Transfer::LogSigmoid);
  Rng rng(7);
  double sum = 0.0;
  std::size_t n = 0;
  while (n < 10000) {
    const Eigen::VectorXd v = flatten(init_weight_set(t, 0.5, rng));
    for (Eigen::Index i = 0; i < v.size() && n < 10000; ++i, ++n)
      sum += v(i);
  }
  EXPECT_NEAR(sum / 10000.0, 0.0, 0.01);
}

TEST(Init, RejectsScaleOutsideUnitInterval) {
  const Topology t = Topology::uniform({2, 1}, Transfer::Linear);
  Rng rng(1);
  EXPECT_THROW(init_weight_set(t, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(init_weight_set(t, 1.0, rng), std::invalid_argument);
}

TEST(Flatten, RoundTrip) {
  const Topology t = Topology::uniform({4, 3, 3}, Transfer::LogSigmoid);
  Rng rng(5);
  const WeightSet ws = init_weight_set(t, 0.5, rng);
  EXPECT_EQ(flatten(ws).size(), 27);
  EXPECT_EQ(unflatten(flatten(ws), t), ws);
}

TEST(Forward, ZeroWeightsGiveHalf) {
  const WeightSet ws = zero_weight_set(Topology::uniform({4, 3, 3}, Transfer::LogSigmoid));
  const ForwardTrace tr = forward(ws, vec({0.3, -1, 2, 7}));
  for (std::size_t l = 1; l < tr.activations.size(); ++l)
    for (Eigen::Index i = 0; i < tr.activations[l].size(); ++i)
      EXPECT_DOUBLE_EQ(tr.activations[l](i), 0.5);
}

TEST(Forward, LinearIdentity) {
  WeightSet ws = zero_weight_set(Topology::uniform({3, 3}, Transfer::Linear));
  ws.layers[0].weights.setIdentity();
  const Eigen::VectorXd x = vec({0.1, -2.5, 4});
  EXPECT_EQ(forward(ws, x).output(), x);
}

TEST(Forward, TwoTwoOneHandEvaluated) {
  WeightSet ws = zero_weight_set(Topology::uniform({2, 2, 1}, Transfer::LogSigmoid));
  ws.layers[0].weights << 0.1, 0.2, 0.3, -0.4;
  ws.layers[0].bias << 0.05, -0.05;
  ws.layers[1].weights << 0.5, -0.6;
  ws.layers[1].bias << 0.1;

  const long double h1 = logsig(0.1L * 1 + 0.2L * 0 + 0.05L);
  const long double h2 = logsig(0.3L * 1 - 0.4L * 0 - 0.05L);
  const long double out = logsig(0.5L * h1 - 0.6L * h2 + 0.1L);
  EXPECT_NEAR(forward(ws, vec({1, 0})).output()(0), static_cast<double>(out), 1e-15);
}

TEST(Forward, RejectsWrongInputSize) {
  const WeightSet ws = zero_weight_set(Topology::uniform({2, 1}, Transfer::Linear));
  EXPECT_THROW(forward(ws, vec({1, 2, 3})), std::invalid_argument);
}

TEST(Sse, PerfectNetworkIsZero) {
  const WeightSet ws = zero_weight_set(Topology::uniform({2, 2}, Transfer::LogSigmoid));
  LabeledSet s{{vec({1, 2})}, {vec({0.5, 0.5})}};
  EXPECT_EQ(sum_squared_error(ws, s), 0.0);
}

TEST(Sse, ErrorVectorOneMinusOne) {
  WeightSet ws = zero_weight_set(Topology::uniform({1, 2}, Transfer::Linear));
  ws.layers[0].bias << 0, 1;
  LabeledSet s{{vec({0})}, {vec({1, 0})}};
  EXPECT_DOUBLE_EQ(sum_squared_error(ws, s), 2.0);
}

TEST(Sse, EmptySetThrows) {
  const WeightSet ws = zero_weight_set(Topology::uniform({1, 1}, Transfer::Linear));
  EXPECT_THROW(sum_squared_error(ws, LabeledSet{}), std::invalid_argument);
}

TEST(Sse, MatchesScalarLoopOracle) {
  const LabeledSet rows = test::first_rows(test::normalized("iris"), 10);
  Rng rng(21);
  const WeightSet ws =
      init_weight_set(Topology::uniform({4, 3, 3}, Transfer::LogSigmoid), 0.5, rng);
  const auto &W1 = ws.layers[0].weights, &W2 = ws.layers[1].weights;
  const auto &b1 = ws.layers[0].bias, &b2 = ws.layers[1].bias;

  long double total = 0;
  for (std::size_t q = 0; q < rows.size(); ++q) {
    long double hidden[3];
    for (int i = 0; i < 3; ++i) {
      long double n = b1(i);
      for (int k = 0; k < 4; ++k)
        n += W1(i, k) * static_cast<long double>(rows.inputs[q](k));
      hidden[i] = logsig(n);
    }
    for (int i = 0; i < 3; ++i) {
      long double n = b2(i);
      for (int k = 0; k < 3; ++k)
        n += W2(i, k) * hidden[k];
      const long double e = rows.targets[q](i) - logsig(n);
      total += e * e;
    }
  }
  EXPECT_NEAR(sum_squared_error(ws, rows), static_cast<double>(total), 1e-12);
}

TEST(Sensitivity, ZeroErrorGivesZero) {
  Rng rng(2);
  const WeightSet ws =
      init_weight_set(Topology::uniform({4, 3, 3}, Transfer::LogSigmoid), 0.5, rng);
  const Eigen::VectorXd x = vec({0.2, 0.4, 0.6, 0.8});
  const ForwardTrace tr = forward(ws, x);
  for (const auto &s : backward_sensitivities(ws, tr, tr.output()))
    EXPECT_EQ(s.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Sensitivity, LinearOutputSeed) {
  const WeightSet ws = zero_weight_set(Topology::uniform({1, 2}, Transfer::Linear));
  const ForwardTrace tr = forward(ws, vec({0}));
  const auto s = backward_sensitivities(ws, tr, vec({1, 0}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0](0), -2.0);
  EXPECT_DOUBLE_EQ(s[0](1), 0.0);
}

TEST(Gradient, AnalyticMatchesNumericOnIrisPatterns) {
  const LabeledSet iris = test::normalized("iris");
  const Topology t = Topology::uniform({4, 3, 3}, Transfer::LogSigmoid);
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const WeightSet ws = init_weight_set(t, 0.9, rng);
    const std::size_t q = rng.index(iris.size());
    LabeledSet one{{iris.inputs[q]}, {iris.targets[q]}};
    const Eigen::VectorXd a = flatten(analytic_gradient(ws, one));
    const Eigen::VectorXd n = numeric_gradient(ws, one, 1e-5);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      EXPECT_TRUE(close(a(i), n(i))) << "param " << i << ": " << a(i) << " vs " << n(i);
  }
}

TEST(Gradient, BatchOfFiveIrisRows) {
  const LabeledSet rows = test::first_rows(test::normalized("iris"), 5);
  Rng rng(17);
  const WeightSet ws =
      init_weight_set(Topology::uniform({4, 3, 3}, Transfer::LogSigmoid), 0.5, rng);
  const Eigen::VectorXd a = flatten(analytic_gradient(ws, rows));
  const Eigen::VectorXd n = numeric_gradient(ws, rows, 1e-5);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    EXPECT_TRUE(close(a(i), n(i))) << i;
}

TEST(Gradient, FlatPointIsZero) {
  const WeightSet ws = zero_weight_set(Topology::uniform({2, 3, 2}, Transfer::LogSigmoid));
  LabeledSet s{{vec({0.3, 0.9})}, {vec({0.5, 0.5})}};
  EXPECT_LT(numeric_gradient(ws, s, 1e-5).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(flatten(analytic_gradient(ws, s)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Gradient, DisconnectedBiasIsZero) {
  // hidden unit 1 feeds nothing downstream
  WeightSet ws = zero_weight_set(Topology::uniform({1, 2, 1}, Transfer::Linear));
  ws.layers[0].weights << 1, 1;
  ws.layers[1].weights << 1, 0;
  LabeledSet s{{vec({0.7})}, {vec({1})}};
  const Eigen::VectorXd n = numeric_gradient(ws, s, 1e-5);
  const Eigen::VectorXd a = flatten(analytic_gradient(ws, s));
  // flatten order: W1 (2), b1 (2), W2 (2), b2 (1)
  EXPECT_NEAR(n(3), 0.0, 1e-12);
  EXPECT_EQ(a(3), 0.0);
}

TEST(Gradient, StepSizeBounds) {
  const WeightSet ws = zero_weight_set(Topology::uniform({1, 1}, Transfer::Linear));
  LabeledSet s{{vec({1})}, {vec({1})}};
  EXPECT_THROW(numeric_gradient(ws, s, 0.0), std::invalid_argument);
  EXPECT_THROW(numeric_gradient(ws, s, 1e-2), std::invalid_argument);
}

TEST(Sdbp, ZeroErrorLeavesWeights) {
  const WeightSet ws = zero_weight_set(Topology::uniform({2, 2}, Transfer::LogSigmoid));
  LabeledSet s{{vec({1, 2})}, {vec({0.5, 0.5})}};
  EXPECT_EQ(sdbp_step(ws, s, 0.1), ws);
}

TEST(Sdbp, ZeroRateIsAnError) {
  const WeightSet ws = single_linear(1, 0);
  LabeledSet s{{vec({1})}, {vec({0})}};
  EXPECT_THROW(sdbp_step(ws, s, 0.0), std::invalid_argument);
}

TEST(Sdbp, SingleNeuronClosedForm) {
  // p = 1, t = 0: dE/dw = -2 (t - p) x = 2, dE/db = 2
  LabeledSet s{{vec({1})}, {vec({0})}};
  const WeightSet next = sdbp_step(single_linear(1, 0), s, 0.1);
  EXPECT_NEAR(next.layers[0].weights(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(next.layers[0].bias(0), -0.2, 1e-15);
}

TEST(Classify, Argmax) {
  EXPECT_EQ(argmax(vec({0.9, 0.1, 0.1})), 0u);
  EXPECT_EQ(argmax(vec({0.5, 0.5})), 0u);
  EXPECT_EQ(argmax(vec({0.1, 0.2, 0.7})), 2u);
}

TEST(Classify, FitThreeIrisRows) {
  const Dataset d = min_max_normalize(test::builtin("iris"));
  const LabeledSet all = to_labeled_set(d);
  LabeledSet three;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < all.size(); ++q)
      if (d.labels[q] == c) {
        three.inputs.push_back(all.inputs[q]);
        three.targets.push_back(all.targets[q]);
        break;
      }
  Rng rng(4);
  WeightSet ws = init_weight_set(Topology::uniform({4, 3, 3}, Transfer::LogSigmoid), 0.5, rng);
  for (int i = 0; i < 20000 && sum_squared_error(ws, three) >= 0.1; ++i)
    ws = sdbp_step(ws, three, 0.5);
  ASSERT_LT(sum_squared_error(ws, three), 0.1);
  for (std::size_t c = 0; c < 3; ++c)
    EXPECT_EQ(classify(ws, three.inputs[c]), c);
}

TEST(Rate, Percentages) {
  // linear 1-2 net with bias deciding the class for every input
  WeightSet ws = zero_weight_set(Topology::uniform({1, 2}, Transfer::Linear));
  ws.layers[0].bias << 1, 0;
  LabeledSet s{{vec({0}), vec({0}), vec({0})},
               {vec({1, 0}), vec({1, 0}), vec({0, 1})}};
  EXPECT_NEAR(correct_classification_rate(ws, s), 66.67, 0.01);
  EXPECT_EQ(correct_count(ws, s), 2u);
  s.targets[2] = vec({1, 0});
  EXPECT_DOUBLE_EQ(correct_classification_rate(ws, s), 100.0);
  ws.layers[0].bias << 0, 1;
  EXPECT_DOUBLE_EQ(correct_classification_rate(ws, s), 0.0);
}

TEST(Transfer, ParseAndDerivatives) {
  EXPECT_EQ(parse_transfer("logsig"), Transfer::LogSigmoid);
  EXPECT_EQ(parse_transfer("tansig"), Transfer::TanSigmoid);
  EXPECT_EQ(parse_transfer("linear"), Transfer::Linear);
  EXPECT_THROW(parse_transfer("relu"), std::invalid_argument);
  for (Transfer f : {Transfer::LogSigmoid, Transfer::TanSigmoid, Transfer::Linear})
    for (double x : {-2.0, -0.3, 0.0, 1.1}) {
      const double num = (evaluate(f, x + 1e-6) - evaluate(f, x - 1e-6)) / 2e-6;
      EXPECT_NEAR(derivative(f, x), num, 1e-8);
    }
}
