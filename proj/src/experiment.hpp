#pragma once

// Experiment harness: resolves a flat configuration into a run, executes the
// selected trainer, and renders metrics, summaries and comparison tables.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "firefly.hpp"
#include "ga.hpp"
#include "training.hpp"

namespace fabp {

enum class Algorithm { Fabpnn, Gabpnn, Sdbp };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

struct RunConfig {
  /// Name of a builtin data set, or empty when data_file is set.
  std::string dataset = "iris";
  std::string data_file;
  DatasetSchema schema;
  std::string data_dir;
  /// Full layer list; empty means input -> hidden -> classes.
  std::vector<std::size_t> topology;
  std::size_t hidden = 6;
  Transfer hidden_transfer = Transfer::LogSigmoid;
  Transfer output_transfer = Transfer::LogSigmoid;
  std::uint64_t seed = 1;
  double holdout = 0.0;
  std::string out_dir = "out";
  /// Exactly one block, matching the algorithm.
  std::variant<FireflyConfig, GaConfig, SdbpConfig> block;

  Algorithm algorithm() const;
  /// Display name of the data source.
  std::string dataset_label() const;
};

/// Resolve and validate a configuration map. Throws ConfigError.
RunConfig resolve_run_config(const ConfigMap &map);

struct RunSummary {
  Algorithm algorithm = Algorithm::Fabpnn;
  std::string dataset;
  std::uint64_t seed = 0;
  std::string topology;
  std::size_t iterations = 0;
  double correct_rate_final = 0.0;
  double correct_rate_max = 0.0;
  double correct_rate_min = 0.0;
  double final_avg_sse = 0.0;
  double final_best_sse = 0.0;
  std::optional<std::size_t> stability_iteration;
  std::optional<double> holdout_rate;
  double wall_time = 0.0; ///< seconds
};

struct RunResult {
  RunSummary summary;
  std::vector<TrainingRecord> records;
  WeightSet best;
  /// Normalisation applied to inputs before they reach the network.
  std::vector<std::pair<double, double>> normalization;
};

/// Load data, normalise, train. Throws ConfigError or DataError.
RunResult run_experiment(const RunConfig &cfg);

/// First 1-based index k with |rates[j] - rates.back()| <= 0.5 for all j >= k.
/// None for a single-element list.
std::optional<std::size_t> stability_iteration(std::span<const double> rates);

inline constexpr std::string_view kMetricsHeader =
    "iteration,avg_sse,best_sse,correct_rate,eta";

std::string metrics_csv(std::span<const TrainingRecord> records);
std::string summary_json(const RunSummary &s);
std::string summary_line(const RunSummary &s);

/// Writes metrics.csv and summary.json into `dir`, creating it if needed.
/// Each file is written to a temporary name and renamed into place.
void write_run(const RunResult &run, const std::string &dir);

/// Write `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::string &path, std::string_view content);

/// One comparison variant: "algo[:key=value,key=value]".
struct Variant {
  std::string label;
  ConfigMap overrides;
};

Variant parse_variant(std::string_view spec);

struct CompareRow {
  std::string label;
  Algorithm algorithm = Algorithm::Fabpnn;
  std::size_t runs = 0;
  double median_correct_rate = 0.0;
  double max_correct_rate = 0.0;
  double min_correct_rate = 0.0;
  double median_avg_sse = 0.0;
  double median_best_sse = 0.0;
  std::optional<double> median_stability_iteration;
  double median_iterations = 0.0;
};

struct CompareTable {
  std::string dataset;
  std::vector<std::uint64_t> seeds;
  std::vector<CompareRow> rows;
  std::vector<RunSummary> runs;
};

/// Run every (variant, seed) pair. When `out_dir` is non-empty each run is
/// written to out_dir/<label>/seed-<seed>/ and the table to
/// out_dir/comparison.{csv,txt}.
CompareTable run_comparison(const ConfigMap &base,
                            const std::vector<Variant> &variants,
                            std::span<const std::uint64_t> seeds,
                            const std::string &out_dir);

double median(std::vector<double> values);

std::string comparison_csv(const CompareTable &t);
std::string comparison_text(const CompareTable &t);

} // namespace fabp
