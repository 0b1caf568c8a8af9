#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "network.hpp"
#include "random.hpp"

namespace fabp {

/// Metrics of one training iteration (or GA generation).
struct TrainingRecord {
  std::size_t iteration = 0; ///< 1-based
  double avg_sse = 0.0;      ///< mean SSE over the population
  double best_sse = 0.0;     ///< best-ever SSE
  double correct_rate = 0.0; ///< percentage, of the best-ever weights
  std::optional<double> eta; ///< absorption coefficient, firefly runs only
};

struct TrainResult {
  WeightSet best;
  double best_error = 0.0;
  std::vector<TrainingRecord> records;
};

struct SdbpConfig {
  double learning_rate = 0.01;
  std::size_t max_iterations = 100;
  double init_scale = 0.5;
  double cc_threshold = 100.0;

  void validate() const;
};

/// Plain batch steepest descent from a random start.
TrainResult train_sdbp(const LabeledSet &data, const Topology &topology,
                       const SdbpConfig &cfg, Rng &rng);

} // namespace fabp
