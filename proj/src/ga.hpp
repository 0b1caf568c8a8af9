#pragma once

// Genetic-algorithm back-propagation trainer (GABPNN): a real-coded GA over
// flattened network weights whose elites take a few steepest-descent steps
// each generation.

#include <cstddef>
#include <vector>

#include "network.hpp"
#include "random.hpp"
#include "training.hpp"

namespace fabp {

struct GaConfig {
  std::size_t population_size = 50;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  double mutation_sigma = 0.1;
  std::size_t tournament_size = 3;
  std::size_t elite_count = 2;
  std::size_t refine_steps = 1;
  double learning_rate = 0.02;
  std::size_t max_generations = 100;
  double init_scale = 0.5;
  double cc_threshold = 100.0; ///< stop once the correct rate exceeds this

  void validate() const;
};

struct Chromosome {
  Eigen::VectorXd genes;
  double fitness = 0.0; ///< 1 / (1 + SSE)
  double sse = 0.0;
};

Chromosome encode(const WeightSet &ws);
WeightSet decode(const Chromosome &c, const Topology &topology);

double fitness_from_sse(double sse);

/// Evaluates `c` on `data`, stores sse and fitness, returns the fitness.
double fitness(Chromosome &c, const LabeledSet &data, const Topology &topology);

/// Fittest of `k` members drawn uniformly with replacement; earliest wins ties.
const Chromosome &tournament_select(const std::vector<Chromosome> &pop,
                                    std::size_t k, Rng &rng);

/// child1 = u p1 + (1 - u) p2, child2 = (1 - u) p1 + u p2, u ~ U[0, 1).
std::pair<Chromosome, Chromosome>
arithmetic_crossover(const Chromosome &p1, const Chromosome &p2, Rng &rng);

/// Each gene independently gets N(0, sigma^2) noise with probability `rate`.
Chromosome gaussian_mutate(Chromosome c, double rate, double sigma, Rng &rng);

TrainResult train_ga(const LabeledSet &data, const Topology &topology,
                    const GaConfig &cfg, Rng &rng);

} // namespace fabp
