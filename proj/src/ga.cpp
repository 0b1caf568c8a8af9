#include "ga.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fabp {

void GaConfig::validate() const {
  auto fail = [](const char *what) {
    throw std::invalid_argument(std::string("ga config: ") + what);
  };
  if (population_size == 0)
    fail("population size must be positive");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
    fail("crossover rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    fail("mutation rate must lie in [0, 1]");
  if (!(mutation_sigma > 0.0))
    fail("mutation sigma must be positive");
  if (tournament_size < 2)
    fail("tournament size must be at least 2");
  if (elite_count > population_size)
    fail("elite count exceeds population size");
  if (!(learning_rate > 0.0))
    fail("learning rate must be positive");
  if (max_generations == 0)
    fail("max generations must be positive");
  if (!(init_scale > 0.0 && init_scale < 1.0))
    fail("init scale must lie in (0, 1)");
  if (!(cc_threshold >= 0.0 && cc_threshold <= 100.0))
    fail("cc threshold must lie in [0, 100]");
}

Chromosome encode(const WeightSet &ws) {
  ws.check_shape();
  return Chromosome{flatten(ws)};
}

WeightSet decode(const Chromosome &c, const Topology &topology) {
  return unflatten(c.genes, topology);
}

double fitness_from_sse(double sse) { return 1.0 / (1.0 + sse); }

double fitness(Chromosome &c, const LabeledSet &data, const Topology &topology) {
  c.sse = sum_squared_error(decode(c, topology), data);
  c.fitness = fitness_from_sse(c.sse);
  return c.fitness;
}

const Chromosome &tournament_select(const std::vector<Chromosome> &pop,
                                    std::size_t k, Rng &rng) {
  if (pop.empty())
    throw std::invalid_argument("tournament_select: empty population");
  if (k == 0)
    throw std::invalid_argument("tournament_select: empty tournament");
  std::size_t best = rng.index(pop.size());
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t cand = rng.index(pop.size());
    if (pop[cand].fitness > pop[best].fitness ||
        (pop[cand].fitness == pop[best].fitness && cand < best))
      best = cand;
  }
  return pop[best];
}

std::pair<Chromosome, Chromosome>
arithmetic_crossover(const Chromosome &p1, const Chromosome &p2, Rng &rng) {
  if (p1.genes.size() != p2.genes.size())
    throw std::invalid_argument("arithmetic_crossover: gene count mismatch");
  const double u = rng.uniform();
  Chromosome c1{u * p1.genes + (1.0 - u) * p2.genes};
  Chromosome c2{(1.0 - u) * p1.genes + u * p2.genes};
  return {std::move(c1), std::move(c2)};
}

Chromosome gaussian_mutate(Chromosome c, double rate, double sigma, Rng &rng) {
  if (!(rate >= 0.0 && rate <= 1.0) || !(sigma > 0.0))
    throw std::invalid_argument("gaussian_mutate: bad rate or sigma");
  if (rate == 0.0)
    return c;
  for (Eigen::Index i = 0; i < c.genes.size(); ++i)
    if (rng.uniform() < rate)
      c.genes(i) += sigma * rng.normal();
  return c;
}

TrainResult train_ga(const LabeledSet &data, const Topology &topology,
                     const GaConfig &cfg, Rng &rng) {
  cfg.validate();
  topology.validate();
  data.validate();
  if (data.empty())
    throw std::invalid_argument("train_ga: empty data set");

  std::vector<Chromosome> pop;
  pop.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    Chromosome c = encode(init_weight_set(topology, cfg.init_scale, rng));
    fitness(c, data, topology);
    pop.push_back(std::move(c));
  }

  auto fittest = [](const std::vector<Chromosome> &p) {
    std::size_t b = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].fitness > p[b].fitness)
        b = i;
    return b;
  };

  Chromosome elite = pop[fittest(pop)];
  double elite_rate = correct_classification_rate(decode(elite, topology), data);
  TrainResult result;

  for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness > pop[b].fitness;
    });

    std::vector<Chromosome> next;
    next.reserve(cfg.population_size);
    for (std::size_t e = 0; e < cfg.elite_count; ++e) {
      Chromosome c = pop[order[e]];
      if (cfg.refine_steps > 0) {
        WeightSet ws = decode(c, topology);
        for (std::size_t s = 0; s < cfg.refine_steps; ++s)
          ws = sdbp_step(ws, data, cfg.learning_rate);
        if (ws.all_finite()) {
          c = encode(ws);
          fitness(c, data, topology);
        }
      }
      next.push_back(std::move(c));
    }

    while (next.size() < cfg.population_size) {
      const Chromosome &p1 = tournament_select(pop, cfg.tournament_size, rng);
      const Chromosome &p2 = tournament_select(pop, cfg.tournament_size, rng);
      std::pair<Chromosome, Chromosome> kids{p1, p2};
      if (rng.uniform() < cfg.crossover_rate)
        kids = arithmetic_crossover(p1, p2, rng);
      for (Chromosome *kid : {&kids.first, &kids.second}) {
        if (next.size() == cfg.population_size)
          break;
        Chromosome c = gaussian_mutate(std::move(*kid), cfg.mutation_rate,
                                       cfg.mutation_sigma, rng);
        fitness(c, data, topology);
        next.push_back(std::move(c));
      }
    }
    pop = std::move(next);

    const Chromosome &best = pop[fittest(pop)];
    if (best.fitness > elite.fitness) {
      elite = best;
      elite_rate = correct_classification_rate(decode(elite, topology), data);
    }

    double sum = 0.0;
    for (const auto &c : pop)
      sum += c.sse;
    result.records.push_back({gen, sum / static_cast<double>(pop.size()),
                              elite.sse, elite_rate, std::nullopt});
    if (elite_rate > cfg.cc_threshold)
      break;
  }

  result.best = decode(elite, topology);
  result.best_error = elite.sse;
  return result;
}

} // namespace fabp
