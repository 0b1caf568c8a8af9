#include "firefly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fabp {

MovementSpace parse_movement_space(std::string_view name) {
  if (name == "error-scalar" || name == "scalar")
    return MovementSpace::ErrorScalar;
  if (name == "weight-vector" || name == "vector")
    return MovementSpace::WeightVector;
  throw std::invalid_argument("unknown movement space '" + std::string(name) +
                              "'");
}

std::string_view movement_space_name(MovementSpace m) {
  return m == MovementSpace::ErrorScalar ? "error-scalar" : "weight-vector";
}

void FireflyConfig::validate() const {
  auto fail = [](const char *what) {
    throw std::invalid_argument(std::string("firefly config: ") + what);
  };
  if (population_size == 0)
    fail("population size must be positive");
  if (!(light0 > 0.0) || !std::isfinite(light0))
    fail("L0 must be positive");
  if (!(eta0 >= 0.0) || !std::isfinite(eta0))
    fail("eta0 must be >= 0");
  if (!(eta_growth >= 0.0) || !std::isfinite(eta_growth))
    fail("eta growth must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    fail("alpha must be >= 0");
  if (!(alpha_decay > 0.0 && alpha_decay <= 1.0))
    fail("alpha decay must lie in (0, 1]");
  if (!(init_scale > 0.0 && init_scale < 1.0))
    fail("init scale must lie in (0, 1)");
  if (max_iterations == 0)
    fail("max iterations must be positive");
  if (!(cc_threshold >= 0.0 && cc_threshold <= 100.0))
    fail("cc threshold must lie in [0, 100]");
  if (!(sse_threshold >= 0.0))
    fail("sse threshold must be >= 0");
  if (!(learning_rate > 0.0))
    fail("learning rate must be positive");
}

void Population::rank() {
  std::stable_sort(fireflies.begin(), fireflies.end(),
                   [](const Firefly &a, const Firefly &b) {
                     return a.error < b.error;
                   });
}

std::vector<double> Population::errors() const {
  std::vector<double> out;
  out.reserve(fireflies.size());
  for (const auto &f : fireflies)
    out.push_back(f.error);
  return out;
}

double performance_index(std::span<const double> errors) {
  if (errors.empty())
    throw std::invalid_argument("performance_index: empty error list");
  double total = 0.0;
  for (double v : errors) {
    if (v < 0.0)
      throw std::invalid_argument("performance_index: negative error");
    total += v * v;
  }
  return total;
}

double firefly_distance(const Firefly &fi, const Firefly &fj,
                        MovementSpace space) {
  if (!(fi.weights.topology == fj.weights.topology))
    throw std::invalid_argument("firefly_distance: topology mismatch");
  if (space == MovementSpace::ErrorScalar)
    return std::abs(fi.error - fj.error);
  return (flatten(fi.weights) - flatten(fj.weights)).norm();
}

double light_intensity(double light0, double eta, double distance) {
  if (!(light0 > 0.0) || !(eta >= 0.0) || !(distance >= 0.0))
    throw std::invalid_argument("light_intensity: need L0 > 0, eta >= 0, d >= 0");
  return light0 * std::exp(-eta * distance * distance);
}

double move_firefly(double fi, double fj, double distance,
                    const Attraction &step, Rng &rng) {
  const double beta = light_intensity(step.light0, step.eta, distance);
  return fi + beta * (fj - fi) + step.alpha * (rng.uniform() - 0.5);
}

Eigen::VectorXd move_firefly(const Eigen::VectorXd &fi,
                             const Eigen::VectorXd &fj, double distance,
                             const Attraction &step, Rng &rng) {
  if (fi.size() != fj.size())
    throw std::invalid_argument("move_firefly: dimension mismatch");
  const double beta = light_intensity(step.light0, step.eta, distance);
  Eigen::VectorXd out(fi.size());
  for (Eigen::Index i = 0; i < fi.size(); ++i)
    out(i) = fi(i) + beta * (fj(i) - fi(i)) + step.alpha * (rng.uniform() - 0.5);
  return out;
}

Firefly apply_movement(Firefly firefly, double delta) {
  for (auto &layer : firefly.weights.layers) {
    layer.weights.array() -= delta;
    layer.bias.array() -= delta;
  }
  firefly.fresh = false;
  return firefly;
}

Firefly apply_movement(Firefly firefly, const Eigen::VectorXd &moved) {
  firefly.weights = unflatten(moved, firefly.weights.topology);
  firefly.fresh = false;
  return firefly;
}

double update_absorption(double eta, double growth) {
  if (!(eta >= 0.0) || !(growth >= 0.0))
    throw std::invalid_argument("update_absorption: need eta >= 0, growth >= 0");
  return eta * (1.0 + growth);
}

void refresh(Firefly &firefly, const LabeledSet &data) {
  firefly.error = sum_squared_error(firefly.weights, data);
  firefly.correct_rate = correct_classification_rate(firefly.weights, data);
  firefly.fresh = true;
}

namespace {

void back_propagate(Firefly &f, const Attraction &step, const LabeledSet &data) {
  for (std::size_t s = 0; s < step.bp_steps; ++s) {
    WeightSet next = sdbp_step(f.weights, data, step.learning_rate);
    if (!next.all_finite())
      break;
    f.weights = std::move(next);
    f.fresh = false;
  }
}

TrainingRecord describe(const Population &pop) {
  TrainingRecord rec;
  double sum = 0.0;
  for (const auto &f : pop.fireflies)
    sum += f.error;
  rec.avg_sse = sum / static_cast<double>(pop.size());
  rec.best_sse = pop.fireflies.front().error;
  rec.correct_rate = pop.fireflies.front().correct_rate;
  return rec;
}

} // namespace

TrainingRecord train_iteration(Population &pop, const LabeledSet &data,
                               MovementSpace space, const Attraction &step,
                               Rng &rng) {
  if (pop.fireflies.empty())
    throw std::invalid_argument("train_iteration: empty population");
  for (const auto &f : pop.fireflies)
    if (!f.fresh)
      throw std::logic_error("train_iteration: stale firefly error on entry");

  // Brightest firefly; first one wins ties.
  std::size_t j = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop.fireflies[i].error < pop.fireflies[j].error)
      j = i;
  const Firefly brightest = pop.fireflies[j];
  const Eigen::VectorXd brightest_point =
      space == MovementSpace::WeightVector ? flatten(brightest.weights)
                                           : Eigen::VectorXd();

  for (std::size_t k = 0; k < pop.size(); ++k) {
    if (k == j)
      continue;
    Firefly &fi = pop.fireflies[k];
    if (!(brightest.error < fi.error)) {
      if (step.bp_steps > 0) {
        back_propagate(fi, step, data);
        refresh(fi, data);
      }
      continue;
    }
    const double d = firefly_distance(fi, brightest, space);
    if (space == MovementSpace::ErrorScalar) {
      const double moved = move_firefly(fi.error, brightest.error, d, step, rng);
      fi = apply_movement(std::move(fi), moved);
    } else {
      const Eigen::VectorXd moved =
          move_firefly(flatten(fi.weights), brightest_point, d, step, rng);
      fi = apply_movement(std::move(fi), moved);
    }
    back_propagate(fi, step, data);
    refresh(fi, data);
  }

  pop.rank();
  TrainingRecord rec = describe(pop);
  rec.eta = step.eta;
  return rec;
}

Population initial_population(const LabeledSet &data, const Topology &topology,
                              const FireflyConfig &cfg, Rng &rng) {
  Population pop;
  pop.fireflies.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    Firefly f{init_weight_set(topology, cfg.init_scale, rng)};
    refresh(f, data);
    pop.fireflies.push_back(std::move(f));
  }
  return pop;
}

FireflyResult train_firefly(const LabeledSet &data, const Topology &topology,
                            const FireflyConfig &cfg, Rng &rng) {
  cfg.validate();
  topology.validate();
  data.validate();
  if (data.empty())
    throw std::invalid_argument("train_firefly: empty data set");

  Population pop = initial_population(data, topology, cfg, rng);
  FireflyResult result;
  const std::vector<double> errors = pop.errors();
  result.initial_performance_index = performance_index(errors);

  pop.rank();
  Firefly elite = pop.fireflies.front();

  Attraction step{cfg.light0, cfg.eta0, cfg.alpha, cfg.bp_steps,
                  cfg.learning_rate};
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    TrainingRecord rec =
        train_iteration(pop, data, cfg.movement_space, step, rng);
    rec.iteration = it;

    const Firefly &best = pop.fireflies.front();
    if (best.error < elite.error)
      elite = best;
    rec.best_sse = elite.error;
    rec.correct_rate = elite.correct_rate;
    result.records.push_back(rec);

    if (rec.correct_rate > cfg.cc_threshold || rec.avg_sse <= cfg.sse_threshold)
      break;
    step.eta = update_absorption(step.eta, cfg.eta_growth);
    step.alpha *= cfg.alpha_decay;
  }

  result.best = std::move(elite.weights);
  result.best_error = elite.error;
  return result;
}

} // namespace fabp
