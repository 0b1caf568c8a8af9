#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace fabp {

namespace fs = std::filesystem;

namespace {

std::string format_number(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::size_t to_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

struct Blocks {
  FireflyConfig firefly;
  GaConfig ga;
  SdbpConfig sdbp;
};

using Setter = std::function<void(RunConfig &, Blocks &, const ConfigMap &,
                                  const std::string &)>;

Setter number(double FireflyConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.firefly.*field = *m.get_double(k);
  };
}
Setter number(double GaConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.ga.*field = *m.get_double(k);
  };
}
Setter number(double SdbpConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.sdbp.*field = *m.get_double(k);
  };
}
Setter count(std::size_t FireflyConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.firefly.*field = to_size(*m.get_uint(k));
  };
}
Setter count(std::size_t GaConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.ga.*field = to_size(*m.get_uint(k));
  };
}
Setter count(std::size_t SdbpConfig::*field) {
  return [field](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
    b.sdbp.*field = to_size(*m.get_uint(k));
  };
}

const std::unordered_map<std::string, Setter> &block_setters() {
  static const std::unordered_map<std::string, Setter> table = {
      {"firefly.pop", count(&FireflyConfig::population_size)},
      {"firefly.l0", number(&FireflyConfig::light0)},
      {"firefly.eta0", number(&FireflyConfig::eta0)},
      {"firefly.eta_growth", number(&FireflyConfig::eta_growth)},
      {"firefly.alpha", number(&FireflyConfig::alpha)},
      {"firefly.alpha_decay", number(&FireflyConfig::alpha_decay)},
      {"firefly.init_scale", number(&FireflyConfig::init_scale)},
      {"firefly.iters", count(&FireflyConfig::max_iterations)},
      {"firefly.cc_threshold", number(&FireflyConfig::cc_threshold)},
      {"firefly.sse_threshold", number(&FireflyConfig::sse_threshold)},
      {"firefly.bp_steps", count(&FireflyConfig::bp_steps)},
      {"firefly.learning_rate", number(&FireflyConfig::learning_rate)},
      {"firefly.movement_space",
       [](RunConfig &, Blocks &b, const ConfigMap &m, const std::string &k) {
         b.firefly.movement_space = parse_movement_space(*m.get(k));
       }},
      {"ga.pop", count(&GaConfig::population_size)},
      {"ga.crossover_rate", number(&GaConfig::crossover_rate)},
      {"ga.mutation_rate", number(&GaConfig::mutation_rate)},
      {"ga.mutation_sigma", number(&GaConfig::mutation_sigma)},
      {"ga.tournament", count(&GaConfig::tournament_size)},
      {"ga.elites", count(&GaConfig::elite_count)},
      {"ga.refine_steps", count(&GaConfig::refine_steps)},
      {"ga.learning_rate", number(&GaConfig::learning_rate)},
      {"ga.generations", count(&GaConfig::max_generations)},
      {"ga.init_scale", number(&GaConfig::init_scale)},
      {"ga.cc_threshold", number(&GaConfig::cc_threshold)},
      {"sdbp.learning_rate", number(&SdbpConfig::learning_rate)},
      {"sdbp.iters", count(&SdbpConfig::max_iterations)},
      {"sdbp.init_scale", number(&SdbpConfig::init_scale)},
      {"sdbp.cc_threshold", number(&SdbpConfig::cc_threshold)},
  };
  return table;
}

const std::vector<std::string> &run_keys() {
  static const std::vector<std::string> keys = {
      "algo",     "dataset", "data_file", "schema",         "data_dir",
      "topology", "hidden",  "transfer",  "transfer.hidden", "transfer.output",
      "seed",     "holdout", "out_dir",   "pop",            "iters",
      "movement_space"};
  return keys;
}

std::string sanitize(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "run" : out;
}

} // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "fabpnn")
    return Algorithm::Fabpnn;
  if (name == "gabpnn")
    return Algorithm::Gabpnn;
  if (name == "sdbp")
    return Algorithm::Sdbp;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected fabpnn, gabpnn or sdbp)");
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
  case Algorithm::Fabpnn:
    return "fabpnn";
  case Algorithm::Gabpnn:
    return "gabpnn";
  case Algorithm::Sdbp:
    return "sdbp";
  }
  return "?";
}

Algorithm RunConfig::algorithm() const {
  return static_cast<Algorithm>(block.index());
}

std::string RunConfig::dataset_label() const {
  if (!data_file.empty())
    return fs::path(data_file).stem().string();
  return dataset;
}

RunConfig resolve_run_config(const ConfigMap &map) {
  const auto &setters = block_setters();
  for (const auto &[key, value] : map.entries()) {
    if (setters.count(key) == 0 &&
        std::find(run_keys().begin(), run_keys().end(), key) == run_keys().end())
      throw ConfigError("unknown configuration key '" + key + "'");
  }

  RunConfig cfg;
  Blocks blocks;
  try {
    for (const auto &[key, value] : map.entries())
      if (auto it = setters.find(key); it != setters.end())
        it->second(cfg, blocks, map, key);

    const Algorithm algo = parse_algorithm(map.get("algo").value_or("fabpnn"));

    // Generic keys override block-specific ones.
    if (auto pop = map.get_uint("pop")) {
      blocks.firefly.population_size = to_size(*pop);
      blocks.ga.population_size = to_size(*pop);
    }
    if (auto iters = map.get_uint("iters")) {
      blocks.firefly.max_iterations = to_size(*iters);
      blocks.ga.max_generations = to_size(*iters);
      blocks.sdbp.max_iterations = to_size(*iters);
    }
    if (auto m = map.get("movement_space"))
      blocks.firefly.movement_space = parse_movement_space(*m);

    if (auto v = map.get("data_file"))
      cfg.data_file = *v;
    if (auto v = map.get("dataset"))
      cfg.dataset = *v;
    cfg.data_dir = map.get("data_dir").value_or(default_data_dir());
    if (auto v = map.get("schema")) {
      cfg.schema = DatasetSchema::parse(*v);
    } else if (cfg.data_file.empty() || map.contains("dataset")) {
      cfg.schema = DatasetSchema::builtin(cfg.dataset);
    }
    if (cfg.data_file.empty())
      builtin_file_name(cfg.dataset); // rejects unknown names

    if (auto v = map.get("topology"))
      cfg.topology = parse_size_list(*v);
    if (auto v = map.get_uint("hidden")) {
      if (*v == 0)
        throw ConfigError("hidden layer size must be positive");
      cfg.hidden = to_size(*v);
    }
    if (auto v = map.get("transfer"))
      cfg.hidden_transfer = cfg.output_transfer = parse_transfer(*v);
    if (auto v = map.get("transfer.hidden"))
      cfg.hidden_transfer = parse_transfer(*v);
    if (auto v = map.get("transfer.output"))
      cfg.output_transfer = parse_transfer(*v);
    if (auto v = map.get_uint("seed"))
      cfg.seed = *v;
    if (auto v = map.get_double("holdout")) {
      if (!(*v >= 0.0 && *v < 1.0))
        throw ConfigError("holdout must lie in [0, 1)");
      cfg.holdout = *v;
    }
    if (auto v = map.get("out_dir"))
      cfg.out_dir = *v;

    switch (algo) {
    case Algorithm::Fabpnn:
      blocks.firefly.validate();
      cfg.block = blocks.firefly;
      break;
    case Algorithm::Gabpnn:
      blocks.ga.validate();
      cfg.block = blocks.ga;
      break;
    case Algorithm::Sdbp:
      blocks.sdbp.validate();
      cfg.block = blocks.sdbp;
      break;
    }
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::optional<std::size_t> stability_iteration(std::span<const double> rates) {
  if (rates.size() < 2)
    return std::nullopt;
  const double last = rates.back();
  std::size_t k = rates.size();
  while (k > 1 && std::abs(rates[k - 2] - last) <= 0.5)
    --k;
  return k;
}

RunResult run_experiment(const RunConfig &cfg) {
  const auto start = std::chrono::steady_clock::now();

  const std::string path =
      cfg.data_file.empty()
          ? (fs::path(cfg.data_dir) / builtin_file_name(cfg.dataset)).string()
          : cfg.data_file;
  Dataset raw = load_csv(path, cfg.schema);

  Dataset train_raw = raw;
  Dataset hold_raw;
  if (cfg.holdout > 0.0)
    std::tie(train_raw, hold_raw) = split_holdout(raw, cfg.holdout, cfg.seed);
  // Class names must index identically in both halves.
  train_raw.class_names = raw.class_names;
  hold_raw.class_names = raw.class_names;

  const Dataset train = min_max_normalize(train_raw);
  const LabeledSet data = to_labeled_set(train);

  std::vector<std::size_t> sizes = cfg.topology;
  if (sizes.empty())
    sizes = {train.feature_count(), cfg.hidden, train.class_count()};
  if (sizes.front() != train.feature_count() || sizes.back() != train.class_count())
    throw ConfigError("topology must start with " +
                      std::to_string(train.feature_count()) + " inputs and end with " +
                      std::to_string(train.class_count()) + " outputs");
  Topology topology = Topology::uniform(sizes, cfg.hidden_transfer);
  topology.transfers.back() = cfg.output_transfer;

  Rng rng(cfg.seed);
  TrainResult trained;
  try {
    switch (cfg.algorithm()) {
    case Algorithm::Fabpnn:
      trained = train_firefly(data, topology, std::get<FireflyConfig>(cfg.block), rng);
      break;
    case Algorithm::Gabpnn:
      trained = train_ga(data, topology, std::get<GaConfig>(cfg.block), rng);
      break;
    case Algorithm::Sdbp:
      trained = train_sdbp(data, topology, std::get<SdbpConfig>(cfg.block), rng);
      break;
    }
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }

  RunResult out;
  out.records = std::move(trained.records);
  out.best = std::move(trained.best);
  out.normalization = train.normalization;

  RunSummary &s = out.summary;
  s.algorithm = cfg.algorithm();
  s.dataset = cfg.dataset_label();
  s.seed = cfg.seed;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    s.topology += (i ? "-" : "") + std::to_string(sizes[i]);
  s.iterations = out.records.size();
  std::vector<double> rates;
  for (const auto &r : out.records)
    rates.push_back(r.correct_rate);
  s.correct_rate_final = rates.back();
  s.correct_rate_max = *std::max_element(rates.begin(), rates.end());
  s.correct_rate_min = *std::min_element(rates.begin(), rates.end());
  s.final_avg_sse = out.records.back().avg_sse;
  s.final_best_sse = out.records.back().best_sse;
  s.stability_iteration = stability_iteration(rates);
  if (cfg.holdout > 0.0 && hold_raw.rows() > 0) {
    const Dataset hold = apply_normalization(hold_raw, train.normalization);
    s.holdout_rate = correct_classification_rate(out.best, to_labeled_set(hold));
  }
  s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

std::string metrics_csv(std::span<const TrainingRecord> records) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto &r : records) {
    out += std::to_string(r.iteration);
    out += ',' + format_number(r.avg_sse);
    out += ',' + format_number(r.best_sse);
    out += ',' + format_number(r.correct_rate);
    out += ',';
    if (r.eta)
      out += format_number(*r.eta);
    out += '\n';
  }
  return out;
}

std::string summary_json(const RunSummary &s) {
  nlohmann::ordered_json j;
  j["algorithm"] = algorithm_name(s.algorithm);
  j["dataset"] = s.dataset;
  j["seed"] = s.seed;
  j["topology"] = s.topology;
  j["iterations"] = s.iterations;
  j["correct_rate_final"] = s.correct_rate_final;
  j["correct_rate_max"] = s.correct_rate_max;
  j["correct_rate_min"] = s.correct_rate_min;
  j["final_avg_sse"] = s.final_avg_sse;
  j["final_best_sse"] = s.final_best_sse;
  j["stability_iteration"] = s.stability_iteration
                                 ? nlohmann::ordered_json(*s.stability_iteration)
                                 : nlohmann::ordered_json(nullptr);
  j["holdout_rate"] = s.holdout_rate ? nlohmann::ordered_json(*s.holdout_rate)
                                     : nlohmann::ordered_json(nullptr);
  j["wall_time"] = s.wall_time;
  return j.dump(2) + "\n";
}

std::string summary_line(const RunSummary &s) {
  std::ostringstream os;
  os << algorithm_name(s.algorithm) << " " << s.dataset << " seed=" << s.seed
     << " topology=" << s.topology << " iterations=" << s.iterations
     << " correct=" << fixed(s.correct_rate_final, 2) << "%"
     << " (max " << fixed(s.correct_rate_max, 2) << ", min "
     << fixed(s.correct_rate_min, 2) << ")"
     << " avg_sse=" << format_number(s.final_avg_sse, 6)
     << " best_sse=" << format_number(s.final_best_sse, 6) << " stable_after=";
  if (s.stability_iteration)
    os << *s.stability_iteration;
  else
    os << "none";
  if (s.holdout_rate)
    os << " holdout=" << fixed(*s.holdout_rate, 2) << "%";
  os << " time=" << fixed(s.wall_time, 3) << "s";
  return os.str();
}

void write_file_atomic(const std::string &path, std::string_view content) {
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw DataError("cannot create directory '" +
                      target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
      throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw DataError("cannot rename '" + tmp.string() + "': " + ec.message());
}

void write_run(const RunResult &run, const std::string &dir) {
  write_file_atomic((fs::path(dir) / "metrics.csv").string(), metrics_csv(run.records));
  write_file_atomic((fs::path(dir) / "summary.json").string(), summary_json(run.summary));
}

Variant parse_variant(std::string_view spec) {
  Variant v;
  const std::string s(spec);
  const auto colon = s.find(':');
  const std::string algo = s.substr(0, colon);
  parse_algorithm(algo);
  v.overrides.set("algo", algo);
  v.label = algo;
  if (colon == std::string::npos)
    return v;
  const std::string rest = s.substr(colon + 1);
  std::istringstream in(rest);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("variant override '" + item + "' lacks '='");
    v.overrides.set(item.substr(0, eq), item.substr(eq + 1));
  }
  if (!rest.empty())
    v.label += " " + rest;
  return v;
}

double median(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

CompareTable run_comparison(const ConfigMap &base,
                            const std::vector<Variant> &variants,
                            std::span<const std::uint64_t> seeds,
                            const std::string &out_dir) {
  if (variants.empty())
    throw ConfigError("comparison needs at least one algorithm");
  if (seeds.empty())
    throw ConfigError("comparison needs at least one seed");

  CompareTable table;
  table.seeds.assign(seeds.begin(), seeds.end());
  for (const auto &variant : variants) {
    CompareRow row;
    row.label = variant.label;
    std::vector<double> rates, avg_sse, best_sse, stability, iterations;
    for (std::uint64_t seed : seeds) {
      ConfigMap map = base;
      map.merge(variant.overrides);
      map.set("seed", std::to_string(seed));
      const RunConfig cfg = resolve_run_config(map);
      const RunResult run = run_experiment(cfg);
      if (!out_dir.empty())
        write_run(run, (fs::path(out_dir) / sanitize(variant.label) /
                        ("seed-" + std::to_string(seed)))
                           .string());
      row.algorithm = run.summary.algorithm;
      table.dataset = run.summary.dataset;
      rates.push_back(run.summary.correct_rate_final);
      avg_sse.push_back(run.summary.final_avg_sse);
      best_sse.push_back(run.summary.final_best_sse);
      iterations.push_back(static_cast<double>(run.summary.iterations));
      if (run.summary.stability_iteration)
        stability.push_back(static_cast<double>(*run.summary.stability_iteration));
      table.runs.push_back(run.summary);
    }
    row.runs = rates.size();
    row.median_correct_rate = median(rates);
    row.max_correct_rate = *std::max_element(rates.begin(), rates.end());
    row.min_correct_rate = *std::min_element(rates.begin(), rates.end());
    row.median_avg_sse = median(avg_sse);
    row.median_best_sse = median(best_sse);
    if (!stability.empty())
      row.median_stability_iteration = median(stability);
    row.median_iterations = median(iterations);
    table.rows.push_back(std::move(row));
  }

  if (!out_dir.empty()) {
    write_file_atomic((fs::path(out_dir) / "comparison.csv").string(),
                      comparison_csv(table));
    write_file_atomic((fs::path(out_dir) / "comparison.txt").string(),
                      comparison_text(table));
  }
  return table;
}

std::string comparison_csv(const CompareTable &t) {
  std::string out =
      "variant,algorithm,runs,median_correct_rate,max_correct_rate,"
      "min_correct_rate,median_avg_sse,median_best_sse,"
      "median_stability_iteration,median_iterations\n";
  for (const auto &r : t.rows) {
    std::string label = r.label;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label)
        quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = quoted + "\"";
    }
    out += label + "," + std::string(algorithm_name(r.algorithm)) + "," +
           std::to_string(r.runs) + "," + format_number(r.median_correct_rate) +
           "," + format_number(r.max_correct_rate) + "," +
           format_number(r.min_correct_rate) + "," + format_number(r.median_avg_sse) +
           "," + format_number(r.median_best_sse) + "," +
           (r.median_stability_iteration
                ? format_number(*r.median_stability_iteration)
                : std::string()) +
           "," + format_number(r.median_iterations) + "\n";
  }
  return out;
}

std::string comparison_text(const CompareTable &t) {
  const std::vector<std::string> header = {
      "Algorithm", "Runs", "Correct(%)", "Max(%)", "Min(%)",
      "Avg SSE",   "Best SSE", "Stable after", "Iterations"};
  std::vector<std::vector<std::string>> cells;
  for (const auto &r : t.rows)
    cells.push_back({r.label, std::to_string(r.runs), fixed(r.median_correct_rate, 2),
                     fixed(r.max_correct_rate, 2), fixed(r.min_correct_rate, 2),
                     format_number(r.median_avg_sse, 5),
                     format_number(r.median_best_sse, 5),
                     r.median_stability_iteration
                         ? format_number(*r.median_stability_iteration, 4)
                         : "-",
                     format_number(r.median_iterations, 4)});

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto &row : cells)
      width[c] = std::max(width[c], row[c].size());
  }
  auto render = [&](const std::vector<std::string> &row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      const std::string pad(width[c] - cell.size(), ' ');
      cell = c == 0 ? cell + pad : pad + cell;
      line += (c ? "  " : "") + cell;
    }
    return line + "\n";
  };

  std::string out = "Training performance on " + t.dataset + " (medians over " +
                    std::to_string(t.seeds.size()) + " seed" +
                    (t.seeds.size() == 1 ? "" : "s") + ")\n";
  out += render(header);
  std::size_t total = 0;
  for (auto w : width)
    total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto &row : cells)
    out += render(row);
  return out;
}

} // namespace fabp
