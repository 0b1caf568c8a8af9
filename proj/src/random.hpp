#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fabp {

/// Seeded random source shared by every trainer. All stochastic decisions in
/// a run draw from one instance so that a (config, seed) pair fully determines
/// the run.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate.
  double normal();

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Seed for an independent child stream.
  std::uint64_t fork() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace fabp
