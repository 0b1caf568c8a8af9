#include <gtest/gtest.h>

#include "ga.hpp"
#include "support.hpp"

using namespace fabp;
using fabp::test::vec;

namespace {
const Topology kIrisTopo = Topology::uniform({4, 3, 3}, Transfer::LogSigmoid);
}

TEST(Encode, RoundTripAndOrder) {
  Rng rng(1);
  const WeightSet ws = init_weight_set(kIrisTopo, 0.5, rng);
  EXPECT_EQ(decode(encode(ws), kIrisTopo), ws);
  EXPECT_EQ(encode(ws).genes, encode(ws).genes);
  EXPECT_EQ(encode(zero_weight_set(Topology::uniform({2, 1}, Transfer::Linear))).genes.size(), 3);
}

TEST(Fitness, Examples) {
  EXPECT_EQ(fitness_from_sse(0.0), 1.0);
  EXPECT_EQ(fitness_from_sse(1.0), 0.5);
  EXPECT_GT(fitness_from_sse(0.3), fitness_from_sse(0.7));
}

TEST(Fitness, SetsSse) {
  const LabeledSet data = test::first_rows(test::normalized("iris"), 10);
  Rng rng(2);
  const WeightSet ws = init_weight_set(kIrisTopo, 0.5, rng);
  Chromosome c = encode(ws);
  fitness(c, data, kIrisTopo);
  EXPECT_DOUBLE_EQ(c.sse, sum_squared_error(ws, data));
  EXPECT_DOUBLE_EQ(c.fitness, 1.0 / (1.0 + c.sse));
}

TEST(Operators, CrossoverOfIdenticalParents) {
  Rng rng(3);
  const Chromosome p{vec({0.1, -0.2, 0.3})};
  for (int i = 0; i < 10; ++i) {
    const auto [a, b] = arithmetic_crossover(p, p, rng);
    EXPECT_TRUE(a.genes.isApprox(p.genes, 1e-15));
    EXPECT_TRUE(b.genes.isApprox(p.genes, 1e-15));
  }
}

TEST(Operators, CrossoverIsConvex) {
  Rng rng(3);
  const Chromosome p1{vec({0, 1})}, p2{vec({1, 0})};
  const auto [a, b] = arithmetic_crossover(p1, p2, rng);
  EXPECT_NEAR(a.genes.sum(), 1.0, 1e-15);
  EXPECT_TRUE((a.genes + b.genes).isApprox(p1.genes + p2.genes));
}

TEST(Operators, ZeroMutationRateIsIdentity) {
  Rng rng(4);
  const Chromosome c{vec({1, 2, 3})};
  EXPECT_EQ(gaussian_mutate(c, 0.0, 0.1, rng).genes, c.genes);
  const Chromosome all = gaussian_mutate(c, 1.0, 0.1, rng);
  for (int i = 0; i < 3; ++i)
    EXPECT_NE(all.genes(i), c.genes(i));
}

TEST(Operators, ExhaustiveTournamentFindsBest) {
  std::vector<Chromosome> pop(6);
  for (std::size_t i = 0; i < pop.size(); ++i)
    pop[i].fitness = 0.1 * static_cast<double>(i % 4);
  pop[4].fitness = 0.9;
  Rng rng(5);
  // with k draws over n entries the best appears with probability
  // 1 - (5/6)^k; k = 200 makes a miss negligible
  EXPECT_EQ(&tournament_select(pop, 200, rng), &pop[4]);
}

TEST(TrainGa, OneGenerationOneRecord) {
  const LabeledSet iris = test::normalized("iris");
  GaConfig cfg;
  cfg.max_generations = 1;
  Rng rng(1);
  const TrainResult r = train_ga(iris, kIrisTopo, cfg, rng);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_FALSE(r.records[0].eta.has_value());
}

TEST(TrainGa, ClosedSystemIsStatic) {
  const LabeledSet data = test::first_rows(test::normalized("iris"), 30);
  GaConfig cfg;
  cfg.population_size = 6;
  cfg.elite_count = 6;
  cfg.refine_steps = 0;
  cfg.mutation_rate = 0.0;
  cfg.max_generations = 10;
  Rng rng(2);
  const TrainResult r = train_ga(data, kIrisTopo, cfg, rng);
  for (const auto &rec : r.records) {
    EXPECT_EQ(rec.best_sse, r.records.front().best_sse);
    EXPECT_EQ(rec.avg_sse, r.records.front().avg_sse);
  }
}

TEST(TrainGa, DeterministicAndElitist) {
  const LabeledSet iris = test::normalized("iris");
  GaConfig cfg;
  cfg.population_size = 20;
  cfg.max_generations = 20;
  Rng r1(9), r2(9);
  const TrainResult a = train_ga(iris, kIrisTopo, cfg, r1);
  const TrainResult b = train_ga(iris, kIrisTopo, cfg, r2);
  EXPECT_EQ(a.best, b.best);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    EXPECT_LE(a.records[i].best_sse, a.records[i - 1].best_sse);
    EXPECT_EQ(a.records[i].avg_sse, b.records[i].avg_sse);
  }
}

TEST(GaConfig, Validation) {
  GaConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.elite_count = cfg.population_size + 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.crossover_rate = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tournament_size = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
