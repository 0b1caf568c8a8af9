#pragma once

// Firefly-algorithm back-propagation trainer (FABPNN).
//
// Each firefly is a candidate WeightSet whose brightness is its sum of squared
// error on the training set: low error means high attractiveness. Every outer
// iteration the brightest firefly is fixed and every dimmer one is moved
// towards it, its weights adjusted, and its error recomputed before the next
// firefly is considered. The absorption coefficient grows after each
// iteration to contract the search.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "network.hpp"
#include "random.hpp"
#include "training.hpp"

namespace fabp {

enum class MovementSpace {
  /// Fireflies are their scalar SSE values; the moved value is subtracted from
  /// every weight and bias of the firefly.
  ErrorScalar,
  /// Fireflies are points in flattened weight space; the moved point replaces
  /// the weights.
  WeightVector,
};

MovementSpace parse_movement_space(std::string_view name);
std::string_view movement_space_name(MovementSpace m);

struct FireflyConfig {
  std::size_t population_size = 20;
  double light0 = 1.0;      ///< L0, attractiveness at zero distance
  double eta0 = 1.0;        ///< initial light absorption coefficient
  double eta_growth = 0.05; ///< eta <- eta * (1 + eta_growth) per iteration
  double alpha = 0.2;       ///< randomisation constant
  double alpha_decay = 0.97;
  double init_scale = 0.5;
  std::size_t max_iterations = 100;
  double cc_threshold = 97.0; ///< stop once the correct rate exceeds this
  double sse_threshold = 0.45; ///< or once the average SSE falls to this
  MovementSpace movement_space = MovementSpace::WeightVector;
  /// Steepest-descent steps applied to each visited firefly before its error
  /// is recomputed. Zero leaves the pure firefly search.
  std::size_t bp_steps = 20;
  double learning_rate = 0.02;

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

struct Firefly {
  WeightSet weights;
  double error = 0.0;        ///< SSE of weights on the training set
  double correct_rate = 0.0; ///< classification rate of weights
  bool fresh = false;        ///< error/correct_rate match weights
};

struct Population {
  std::vector<Firefly> fireflies;

  std::size_t size() const { return fireflies.size(); }
  /// Stable sort by error, brightest first.
  void rank();
  std::vector<double> errors() const;
};

/// Parameters in force for one iteration.
struct Attraction {
  double light0 = 1.0;
  double eta = 1.0;
  double alpha = 0.0;
  std::size_t bp_steps = 0;
  double learning_rate = 0.01;
};

/// Sum of squared SSE values over the performance-index list.
double performance_index(std::span<const double> errors);

double firefly_distance(const Firefly &fi, const Firefly &fj,
                        MovementSpace space);

/// L0 * exp(-eta * d^2).
double light_intensity(double light0, double eta, double distance);

/// f_i + L0 exp(-eta d^2) (f_j - f_i) + alpha (u - 1/2).
double move_firefly(double fi, double fj, double distance,
                    const Attraction &step, Rng &rng);

/// Componentwise version with an independent u per component.
Eigen::VectorXd move_firefly(const Eigen::VectorXd &fi,
                             const Eigen::VectorXd &fj, double distance,
                             const Attraction &step, Rng &rng);

/// Subtract `delta` from every weight and bias. Marks the firefly stale.
Firefly apply_movement(Firefly firefly, double delta);

/// Replace the flattened weights with `moved`. Marks the firefly stale.
Firefly apply_movement(Firefly firefly, const Eigen::VectorXd &moved);

/// eta * (1 + growth).
double update_absorption(double eta, double growth);

/// Recompute error and correct rate of a firefly against `data`.
void refresh(Firefly &firefly, const LabeledSet &data);

/// One outer iteration. Requires fresh errors; leaves the population ranked.
/// The returned record describes the brightest firefly after the iteration;
/// its eta field holds step.eta.
TrainingRecord train_iteration(Population &pop, const LabeledSet &data,
                               MovementSpace space, const Attraction &step,
                               Rng &rng);

struct FireflyResult : TrainResult {
  double initial_performance_index = 0.0;
};

/// Random initial population of cfg.population_size fireflies, errors fresh.
Population initial_population(const LabeledSet &data, const Topology &topology,
                              const FireflyConfig &cfg, Rng &rng);

FireflyResult train_firefly(const LabeledSet &data, const Topology &topology,
                            const FireflyConfig &cfg, Rng &rng);

} // namespace fabp
