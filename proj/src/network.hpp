#pragma once

// Feed-forward network: topology, weights, forward propagation, squared
// error, back-propagated sensitivities and the batch steepest-descent step.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "random.hpp"

namespace fabp {

enum class Transfer { LogSigmoid, TanSigmoid, Linear };

double evaluate(Transfer f, double x);
double derivative(Transfer f, double x);

Transfer parse_transfer(std::string_view name);
std::string_view transfer_name(Transfer f);

struct Topology {
  /// First entry is the input dimension, last is the output dimension.
  std::vector<std::size_t> layer_sizes;
  /// One transfer function per non-input layer.
  std::vector<Transfer> transfers;

  /// Same transfer function on every non-input layer.
  static Topology uniform(std::vector<std::size_t> sizes,
                          Transfer f = Transfer::LogSigmoid);

  /// Throws std::invalid_argument on fewer than two layers, an empty layer, or
  /// a transfer list of the wrong length.
  void validate() const;

  std::size_t layer_count() const { return layer_sizes.size() - 1; }
  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;

  bool operator==(const Topology &) const = default;
};

struct Layer {
  Eigen::MatrixXd weights; ///< rows = this layer, cols = previous layer
  Eigen::VectorXd bias;
};

struct WeightSet {
  Topology topology;
  std::vector<Layer> layers; ///< layers[n - 1] holds W^n, B^n

  /// Throws std::invalid_argument when a matrix or vector disagrees with the
  /// topology.
  void check_shape() const;
  bool all_finite() const;
};

bool operator==(const WeightSet &a, const WeightSet &b);

/// Zero-initialised weights of the right shape.
WeightSet zero_weight_set(const Topology &topology);

/// Every weight and bias entry is scale * (u - 1/2), u ~ U[0, 1).
/// Throws std::invalid_argument unless 0 < scale < 1.
WeightSet init_weight_set(const Topology &topology, double scale, Rng &rng);

/// Layer-major flattening: W^1 row-major, then B^1, then W^2, ...
Eigen::VectorXd flatten(const WeightSet &ws);
WeightSet unflatten(std::span<const double> values, const Topology &topology);
WeightSet unflatten(const Eigen::VectorXd &values, const Topology &topology);

struct ForwardTrace {
  std::vector<Eigen::VectorXd> net;         ///< net[n - 1] = N^n
  std::vector<Eigen::VectorXd> activations; ///< activations[0] = input

  const Eigen::VectorXd &output() const { return activations.back(); }
};

struct LabeledSet {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> targets; ///< one-hot

  std::size_t size() const { return inputs.size(); }
  bool empty() const { return inputs.empty(); }

  /// Equal lengths and one-hot targets; throws std::invalid_argument.
  void validate() const;
};

ForwardTrace forward(const WeightSet &ws, const Eigen::VectorXd &input);

/// Sum over patterns of (t - p)^T (t - p). Throws on an empty set.
double sum_squared_error(const WeightSet &ws, const LabeledSet &data);

/// Per-layer sensitivities, sensitivities[n - 1] = s^n. The output layer is
/// seeded with -2 f'(N) * (t - p); earlier layers follow
/// s^n = f'(N^n) * (W^{n+1})^T s^{n+1}.
std::vector<Eigen::VectorXd>
backward_sensitivities(const WeightSet &ws, const ForwardTrace &trace,
                       const Eigen::VectorXd &target);

/// Gradient of the batch SSE with respect to every parameter, accumulated
/// from s^n (p^{n-1})^T and s^n. Laid out like WeightSet.
WeightSet analytic_gradient(const WeightSet &ws, const LabeledSet &data);

/// One batch steepest-descent update with learning rate `rate` > 0.
WeightSet sdbp_step(const WeightSet &ws, const LabeledSet &data, double rate);

/// Central-difference gradient of the batch SSE, in flatten() order.
/// Requires 0 < h <= 1e-3.
Eigen::VectorXd numeric_gradient(const WeightSet &ws, const LabeledSet &data,
                                 double h);

/// Index of the largest output; ties go to the lowest index.
std::size_t argmax(const Eigen::VectorXd &v);
std::size_t classify(const WeightSet &ws, const Eigen::VectorXd &input);

/// Percentage of patterns whose predicted class equals argmax(target).
double correct_classification_rate(const WeightSet &ws,
                                   const LabeledSet &data);

/// Number of correctly classified patterns.
std::size_t correct_count(const WeightSet &ws, const LabeledSet &data);

} // namespace fabp
