#include "network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fabp {

double evaluate(Transfer f, double x) {
  switch (f) {
  case Transfer::LogSigmoid:
    return 1.0 / (1.0 + std::exp(-x));
  case Transfer::TanSigmoid:
    return std::tanh(x);
  case Transfer::Linear:
    return x;
  }
  throw std::invalid_argument("unknown transfer function");
}

double derivative(Transfer f, double x) {
  switch (f) {
  case Transfer::LogSigmoid: {
    const double y = evaluate(f, x);
    return y * (1.0 - y);
  }
  case Transfer::TanSigmoid: {
    const double y = std::tanh(x);
    return 1.0 - y * y;
  }
  case Transfer::Linear:
    return 1.0;
  }
  throw std::invalid_argument("unknown transfer function");
}

Transfer parse_transfer(std::string_view name) {
  if (name == "logsig" || name == "log-sigmoid")
    return Transfer::LogSigmoid;
  if (name == "tansig" || name == "tan-sigmoid")
    return Transfer::TanSigmoid;
  if (name == "linear" || name == "purelin")
    return Transfer::Linear;
  throw std::invalid_argument("unknown transfer function '" +
                              std::string(name) + "'");
}

std::string_view transfer_name(Transfer f) {
  switch (f) {
  case Transfer::LogSigmoid:
    return "logsig";
  case Transfer::TanSigmoid:
    return "tansig";
  case Transfer::Linear:
    return "linear";
  }
  return "?";
}

Topology Topology::uniform(std::vector<std::size_t> sizes, Transfer f) {
  Topology t;
  const std::size_t layers = sizes.size() > 1 ? sizes.size() - 1 : 0;
  t.layer_sizes = std::move(sizes);
  t.transfers.assign(layers, f);
  return t;
}

void Topology::validate() const {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("topology needs at least two layers");
  for (std::size_t s : layer_sizes)
    if (s == 0)
      throw std::invalid_argument("topology layers must be non-empty");
  if (transfers.size() != layer_sizes.size() - 1)
    throw std::invalid_argument(
        "topology needs one transfer function per non-input layer");
}

std::size_t Topology::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < layer_sizes.size(); ++i)
    n += layer_sizes[i] * (layer_sizes[i - 1] + 1);
  return n;
}

void WeightSet::check_shape() const {
  topology.validate();
  if (layers.size() != topology.layer_count())
    throw std::invalid_argument("weight set layer count mismatch");
  for (std::size_t n = 0; n < layers.size(); ++n) {
    const auto rows = static_cast<Eigen::Index>(topology.layer_sizes[n + 1]);
    const auto cols = static_cast<Eigen::Index>(topology.layer_sizes[n]);
    if (layers[n].weights.rows() != rows || layers[n].weights.cols() != cols ||
        layers[n].bias.size() != rows)
      throw std::invalid_argument("weight set shape mismatch at layer " +
                                  std::to_string(n + 1));
  }
}

bool WeightSet::all_finite() const {
  for (const auto &l : layers)
    if (!l.weights.allFinite() || !l.bias.allFinite())
      return false;
  return true;
}

bool operator==(const WeightSet &a, const WeightSet &b) {
  if (!(a.topology == b.topology) || a.layers.size() != b.layers.size())
    return false;
  for (std::size_t n = 0; n < a.layers.size(); ++n) {
    const auto &x = a.layers[n];
    const auto &y = b.layers[n];
    if (x.weights.rows() != y.weights.rows() ||
        x.weights.cols() != y.weights.cols() || x.bias.size() != y.bias.size())
      return false;
    if (x.weights != y.weights || x.bias != y.bias)
      return false;
  }
  return true;
}

WeightSet zero_weight_set(const Topology &topology) {
  topology.validate();
  WeightSet ws{topology, {}};
  for (std::size_t n = 1; n < topology.layer_sizes.size(); ++n) {
    const auto rows = static_cast<Eigen::Index>(topology.layer_sizes[n]);
    const auto cols = static_cast<Eigen::Index>(topology.layer_sizes[n - 1]);
    ws.layers.push_back(
        {Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd::Zero(rows)});
  }
  return ws;
}

WeightSet init_weight_set(const Topology &topology, double scale, Rng &rng) {
  if (!(scale > 0.0 && scale < 1.0))
    throw std::invalid_argument("init scale must lie in (0, 1)");
  WeightSet ws = zero_weight_set(topology);
  // Draw in flatten() order so a seed maps to the same gene vector.
  for (auto &layer : ws.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        layer.weights(r, c) = scale * (rng.uniform() - 0.5);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = scale * (rng.uniform() - 0.5);
  }
  return ws;
}

Eigen::VectorXd flatten(const WeightSet &ws) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(ws.topology.parameter_count()));
  Eigen::Index k = 0;
  for (const auto &layer : ws.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        out(k++) = layer.weights(r, c);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      out(k++) = layer.bias(r);
  }
  return out;
}

WeightSet unflatten(std::span<const double> values, const Topology &topology) {
  WeightSet ws = zero_weight_set(topology);
  if (values.size() != topology.parameter_count())
    throw std::invalid_argument(
        "parameter count mismatch: expected " +
        std::to_string(topology.parameter_count()) + ", got " +
        std::to_string(values.size()));
  std::size_t k = 0;
  for (auto &layer : ws.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        layer.weights(r, c) = values[k++];
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = values[k++];
  }
  return ws;
}

WeightSet unflatten(const Eigen::VectorXd &values, const Topology &topology) {
  return unflatten(std::span<const double>(values.data(),
                                           static_cast<std::size_t>(values.size())),
                   topology);
}

void LabeledSet::validate() const {
  if (inputs.size() != targets.size())
    throw std::invalid_argument("inputs and targets differ in length");
  for (const auto &t : targets) {
    std::size_t ones = 0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      if (t(i) == 1.0)
        ++ones;
      else if (t(i) != 0.0)
        throw std::invalid_argument("target is not one-hot");
    }
    if (ones != 1)
      throw std::invalid_argument("target is not one-hot");
  }
}

ForwardTrace forward(const WeightSet &ws, const Eigen::VectorXd &input) {
  if (input.size() != static_cast<Eigen::Index>(ws.topology.input_size()))
    throw std::invalid_argument("input dimension mismatch");
  ForwardTrace trace;
  trace.net.reserve(ws.layers.size());
  trace.activations.reserve(ws.layers.size() + 1);
  trace.activations.push_back(input);
  for (std::size_t n = 0; n < ws.layers.size(); ++n) {
    const auto &layer = ws.layers[n];
    Eigen::VectorXd net = layer.weights * trace.activations.back() + layer.bias;
    const Transfer f = ws.topology.transfers[n];
    Eigen::VectorXd out = net.unaryExpr([f](double x) { return evaluate(f, x); });
    trace.net.push_back(std::move(net));
    trace.activations.push_back(std::move(out));
  }
  return trace;
}

double sum_squared_error(const WeightSet &ws, const LabeledSet &data) {
  if (data.empty())
    throw std::invalid_argument("sum_squared_error: empty data set");
  double total = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const Eigen::VectorXd e = data.targets[j] - forward(ws, data.inputs[j]).output();
    total += e.squaredNorm();
  }
  return total;
}

std::vector<Eigen::VectorXd>
backward_sensitivities(const WeightSet &ws, const ForwardTrace &trace,
                       const Eigen::VectorXd &target) {
  const std::size_t layers = ws.layers.size();
  if (trace.net.size() != layers || trace.activations.size() != layers + 1)
    throw std::invalid_argument("trace does not match weight set");
  if (target.size() != static_cast<Eigen::Index>(ws.topology.output_size()))
    throw std::invalid_argument("target dimension mismatch");

  std::vector<Eigen::VectorXd> s(layers);
  auto fprime = [&](std::size_t n) {
    const Transfer f = ws.topology.transfers[n];
    return trace.net[n].unaryExpr([f](double x) { return derivative(f, x); });
  };

  const std::size_t last = layers - 1;
  s[last] = -2.0 * fprime(last).cwiseProduct(target - trace.output());
  for (std::size_t n = last; n-- > 0;)
    s[n] = fprime(n).cwiseProduct(ws.layers[n + 1].weights.transpose() * s[n + 1]);
  return s;
}

WeightSet analytic_gradient(const WeightSet &ws, const LabeledSet &data) {
  WeightSet grad = zero_weight_set(ws.topology);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const ForwardTrace trace = forward(ws, data.inputs[j]);
    const auto s = backward_sensitivities(ws, trace, data.targets[j]);
    for (std::size_t n = 0; n < s.size(); ++n) {
      grad.layers[n].weights.noalias() += s[n] * trace.activations[n].transpose();
      grad.layers[n].bias += s[n];
    }
  }
  return grad;
}

WeightSet sdbp_step(const WeightSet &ws, const LabeledSet &data, double rate) {
  if (!(rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");
  const WeightSet grad = analytic_gradient(ws, data);
  WeightSet out = ws;
  for (std::size_t n = 0; n < out.layers.size(); ++n) {
    out.layers[n].weights -= rate * grad.layers[n].weights;
    out.layers[n].bias -= rate * grad.layers[n].bias;
  }
  return out;
}

Eigen::VectorXd numeric_gradient(const WeightSet &ws, const LabeledSet &data,
                                 double h) {
  if (!(h > 0.0 && h <= 1e-3))
    throw std::invalid_argument("finite-difference step must lie in (0, 1e-3]");
  ws.check_shape();
  Eigen::VectorXd theta = flatten(ws);
  Eigen::VectorXd grad(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double saved = theta(i);
    theta(i) = saved + h;
    const double up = sum_squared_error(unflatten(theta, ws.topology), data);
    theta(i) = saved - h;
    const double down = sum_squared_error(unflatten(theta, ws.topology), data);
    theta(i) = saved;
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

std::size_t argmax(const Eigen::VectorXd &v) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(static_cast<Eigen::Index>(best)))
      best = static_cast<std::size_t>(i);
  return best;
}

std::size_t classify(const WeightSet &ws, const Eigen::VectorXd &input) {
  return argmax(forward(ws, input).output());
}

std::size_t correct_count(const WeightSet &ws, const LabeledSet &data) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j < data.size(); ++j)
    if (classify(ws, data.inputs[j]) == argmax(data.targets[j]))
      ++hits;
  return hits;
}

double correct_classification_rate(const WeightSet &ws,
                                   const LabeledSet &data) {
  if (data.empty())
    throw std::invalid_argument("correct_classification_rate: empty data set");
  return 100.0 * static_cast<double>(correct_count(ws, data)) /
         static_cast<double>(data.size());
}

} // namespace fabp
