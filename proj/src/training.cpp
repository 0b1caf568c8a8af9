#include "training.hpp"

#include <stdexcept>

namespace fabp {

void SdbpConfig::validate() const {
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("sdbp config: learning rate must be positive");
  if (max_iterations == 0)
    throw std::invalid_argument("sdbp config: max iterations must be positive");
  if (!(init_scale > 0.0 && init_scale < 1.0))
    throw std::invalid_argument("sdbp config: init scale must lie in (0, 1)");
  if (!(cc_threshold >= 0.0 && cc_threshold <= 100.0))
    throw std::invalid_argument("sdbp config: cc threshold must lie in [0, 100]");
}

TrainResult train_sdbp(const LabeledSet &data, const Topology &topology,
                       const SdbpConfig &cfg, Rng &rng) {
  cfg.validate();
  data.validate();
  WeightSet ws = init_weight_set(topology, cfg.init_scale, rng);
  TrainResult result{ws, sum_squared_error(ws, data), {}};
  double best_rate = correct_classification_rate(ws, data);

  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    ws = sdbp_step(ws, data, cfg.learning_rate);
    if (!ws.all_finite())
      throw std::runtime_error("steepest descent diverged; lower the learning rate");
    const double sse = sum_squared_error(ws, data);
    if (sse < result.best_error) {
      result.best = ws;
      result.best_error = sse;
      best_rate = correct_classification_rate(ws, data);
    }
    result.records.push_back({it, sse, result.best_error, best_rate, std::nullopt});
    if (best_rate > cfg.cc_threshold)
      break;
  }
  return result;
}

} // namespace fabp
