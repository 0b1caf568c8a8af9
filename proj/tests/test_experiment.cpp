#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "experiment.hpp"
#include "plot.hpp"

using namespace fabp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::string &hay, const std::string &needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
    ++n;
  return n;
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("fabp-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ConfigMap quick(const std::string &algo, std::size_t iters) {
  ConfigMap m;
  m.set("algo", algo);
  m.set("iters", std::to_string(iters));
  m.set("pop", "5");
  return m;
}

} // namespace

TEST(Stability, Examples) {
  EXPECT_EQ(stability_iteration(std::vector<double>{80, 80, 80}), 1u);
  EXPECT_EQ(stability_iteration(std::vector<double>{50, 90, 97, 97, 97}), 3u);
  EXPECT_EQ(stability_iteration(std::vector<double>{10, 20, 30, 40, 90}), 5u);
  EXPECT_EQ(stability_iteration(std::vector<double>{42}), std::nullopt);
  EXPECT_EQ(stability_iteration(std::vector<double>{96.6, 97.0, 96.8}), 1u);
  EXPECT_EQ(stability_iteration(std::vector<double>{96.0, 97.0, 96.8, 97.2}), 2u);
}

TEST(Config, ParseText) {
  const ConfigMap m = parse_config_text("# comment\nalgo = fabpnn\n\n firefly.alpha=0.3 # tail\n");
  EXPECT_EQ(m.get("algo"), "fabpnn");
  EXPECT_EQ(m.get_double("firefly.alpha"), 0.3);
  EXPECT_FALSE(m.contains("seed"));
  EXPECT_THROW(parse_config_text("algo fabpnn\n"), ConfigError);
  EXPECT_THROW(parse_config_text(" = 3\n"), ConfigError);
  try {
    parse_config_text("a = 1\nbroken\n");
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Config, TypedGetters) {
  ConfigMap m;
  m.set("n", "12");
  m.set("x", "abc");
  m.set("neg", "-3");
  EXPECT_EQ(m.get_uint("n"), 12u);
  EXPECT_THROW(m.get_double("x"), ConfigError);
  EXPECT_THROW(m.get_uint("neg"), ConfigError);
  EXPECT_EQ(parse_size_list("4,6,3"), (std::vector<std::size_t>{4, 6, 3}));
  EXPECT_THROW(parse_size_list("4,,3"), ConfigError);
}

TEST(Config, LaterValuesWin) {
  ConfigMap file = parse_config_text("pop = 5\nseed = 3\n");
  ConfigMap flags;
  flags.set("pop", "20");
  file.merge(flags);
  EXPECT_EQ(file.get_uint("pop"), 20u);
  EXPECT_EQ(file.get_uint("seed"), 3u);
}

TEST(Resolve, DefaultsAndBlocks) {
  const RunConfig rc = resolve_run_config(ConfigMap{});
  EXPECT_EQ(rc.algorithm(), Algorithm::Fabpnn);
  EXPECT_EQ(rc.dataset, "iris");
  const auto &ff = std::get<FireflyConfig>(rc.block);
  EXPECT_EQ(ff.population_size, 20u);
  EXPECT_EQ(ff.max_iterations, 100u);

  ConfigMap m = parse_config_text("algo = gabpnn\nga.pop = 30\nga.mutation_rate = 0.1\n");
  const RunConfig ga = resolve_run_config(m);
  EXPECT_EQ(ga.algorithm(), Algorithm::Gabpnn);
  EXPECT_EQ(std::get<GaConfig>(ga.block).population_size, 30u);
  EXPECT_EQ(std::get<GaConfig>(ga.block).mutation_rate, 0.1);

  m.set("pop", "7");
  EXPECT_EQ(std::get<GaConfig>(resolve_run_config(m).block).population_size, 7u);
}

TEST(Resolve, Errors) {
  auto bad = [](const std::string &text) {
    EXPECT_THROW(resolve_run_config(parse_config_text(text)), ConfigError) << text;
  };
  bad("algo = pso\n");
  bad("firefly.wobble = 1\n");
  bad("colour = red\n");
  bad("pop = 0\n");
  bad("firefly.alpha = -1\n");
  bad("movement_space = spiral\n");
  bad("holdout = 1.5\n");
  bad("topology = 4,x,3\n");
  bad("dataset = mnist\n");
}

TEST(Run, TopologyMismatchIsConfigError) {
  ConfigMap m = quick("fabpnn", 1);
  m.set("topology", "5,6,3");
  EXPECT_THROW(run_experiment(resolve_run_config(m)), ConfigError);
}

TEST(Run, MissingFileIsDataError) {
  ConfigMap m = quick("fabpnn", 1);
  m.set("data_file", "/nonexistent.csv");
  m.set("schema", "iris");
  EXPECT_THROW(run_experiment(resolve_run_config(m)), DataError);
}

TEST(Run, SummaryAgreesWithRecords) {
  for (const char *algo : {"fabpnn", "gabpnn", "sdbp"}) {
    const RunResult r = run_experiment(resolve_run_config(quick(algo, 8)));
    const RunSummary &s = r.summary;
    ASSERT_EQ(s.iterations, r.records.size()) << algo;
    std::vector<double> rates;
    for (const auto &rec : r.records)
      rates.push_back(rec.correct_rate);
    EXPECT_EQ(s.stability_iteration, stability_iteration(rates));
    EXPECT_EQ(s.correct_rate_final, rates.back());
    EXPECT_GE(s.correct_rate_max, s.correct_rate_final);
    EXPECT_GE(s.correct_rate_final, s.correct_rate_min);
    EXPECT_GE(s.correct_rate_min, 0.0);
    if (s.stability_iteration)
      EXPECT_LE(*s.stability_iteration, s.iterations);
    EXPECT_EQ(s.topology, "4-6-3");
    EXPECT_FALSE(s.holdout_rate.has_value());
  }
}

TEST(Run, HoldoutRateReported) {
  ConfigMap m = quick("fabpnn", 3);
  m.set("holdout", "0.2");
  const RunResult r = run_experiment(resolve_run_config(m));
  ASSERT_TRUE(r.summary.holdout_rate.has_value());
  EXPECT_GE(*r.summary.holdout_rate, 0.0);
  EXPECT_LE(*r.summary.holdout_rate, 100.0);
}

TEST(Output, MetricsCsvFormat) {
  const RunResult ff = run_experiment(resolve_run_config(quick("fabpnn", 3)));
  const std::string csv = metrics_csv(ff.records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,avg_sse,best_sse,correct_rate,eta");
  EXPECT_EQ(count(csv, "\n"), 4u);
  EXPECT_TRUE(std::regex_search(csv, std::regex("\n1,[^,]+,[^,]+,[^,]+,1\n")));

  const RunResult sd = run_experiment(resolve_run_config(quick("sdbp", 2)));
  const std::string s = metrics_csv(sd.records);
  EXPECT_TRUE(std::regex_search(s, std::regex("\n2,[^,]+,[^,]+,[^,]+,\n$")));
}

TEST(Output, SummaryJsonFields) {
  const RunResult r = run_experiment(resolve_run_config(quick("fabpnn", 4)));
  const auto j = nlohmann::json::parse(summary_json(r.summary));
  for (const char *k : {"algorithm", "dataset", "seed", "topology", "iterations",
                        "correct_rate_final", "correct_rate_max", "correct_rate_min",
                        "final_avg_sse", "final_best_sse", "stability_iteration",
                        "wall_time"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["algorithm"], "fabpnn");
  EXPECT_EQ(j["iterations"], 4);
}

TEST(Output, WriteRunCreatesFiles) {
  const fs::path dir = scratch("write") / "nested";
  const RunResult r = run_experiment(resolve_run_config(quick("sdbp", 3)));
  write_run(r, dir.string());
  EXPECT_EQ(slurp(dir / "metrics.csv"), metrics_csv(r.records));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  for (const auto &e : fs::directory_iterator(dir))
    EXPECT_EQ(e.path().extension().string().find("tmp"), std::string::npos);
}

TEST(Output, DeterministicMetrics) {
  ConfigMap m = quick("fabpnn", 10);
  m.set("seed", "99");
  const std::string a = metrics_csv(run_experiment(resolve_run_config(m)).records);
  const std::string b = metrics_csv(run_experiment(resolve_run_config(m)).records);
  EXPECT_EQ(a, b);
  m.set("seed", "100");
  EXPECT_NE(a, metrics_csv(run_experiment(resolve_run_config(m)).records));
}

TEST(Compare, VariantParsing) {
  const Variant v = parse_variant("fabpnn:pop=5,firefly.alpha=0.1");
  EXPECT_EQ(v.label, "fabpnn pop=5,firefly.alpha=0.1");
  EXPECT_EQ(v.overrides.get("pop"), "5");
  EXPECT_EQ(v.overrides.get("algo"), "fabpnn");
  EXPECT_EQ(parse_variant("gabpnn").label, "gabpnn");
  EXPECT_THROW(parse_variant("pso"), ConfigError);
  EXPECT_THROW(parse_variant("fabpnn:pop"), ConfigError);
}

TEST(Compare, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(Compare, SingleRunDegeneratesToSummary) {
  ConfigMap base;
  base.set("iters", "5");
  const std::vector<std::uint64_t> seeds{4};
  const CompareTable t = run_comparison(base, {parse_variant("fabpnn:pop=5")}, seeds, "");
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.runs.size(), 1u);
  const CompareRow &row = t.rows[0];
  const RunSummary &s = t.runs[0];
  EXPECT_EQ(row.runs, 1u);
  EXPECT_EQ(row.median_correct_rate, s.correct_rate_final);
  EXPECT_EQ(row.max_correct_rate, s.correct_rate_final);
  EXPECT_EQ(row.min_correct_rate, s.correct_rate_final);
  EXPECT_EQ(row.median_avg_sse, s.final_avg_sse);
  EXPECT_EQ(row.median_iterations, static_cast<double>(s.iterations));
}

TEST(Compare, WineTableShape) {
  ConfigMap base;
  base.set("dataset", "wine");
  base.set("iters", "3");
  base.set("pop", "5");
  const fs::path dir = scratch("compare");
  const std::vector<std::uint64_t> seeds{1, 2};
  const CompareTable t = run_comparison(
      base, {parse_variant("fabpnn"), parse_variant("gabpnn")}, seeds, dir.string());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.dataset, "wine");
  EXPECT_EQ(t.rows[0].algorithm, Algorithm::Fabpnn);
  EXPECT_EQ(t.rows[1].algorithm, Algorithm::Gabpnn);
  EXPECT_EQ(t.runs.size(), 4u);
  EXPECT_TRUE(fs::exists(dir / "comparison.csv"));
  EXPECT_TRUE(fs::exists(dir / "comparison.txt"));
  EXPECT_TRUE(fs::exists(dir / "fabpnn" / "seed-2" / "metrics.csv"));
  const std::string csv = comparison_csv(t);
  EXPECT_EQ(count(csv, "\n"), 3u);
  EXPECT_NE(comparison_text(t).find("gabpnn"), std::string::npos);
}

TEST(Plot, PolylinesAndLegend) {
  const fs::path dir = scratch("plot");
  std::vector<std::string> paths;
  for (const char *name : {"a", "b", "c"}) {
    ConfigMap m = quick("sdbp", 100);
    m.set("seed", std::to_string(paths.size() + 1));
    const RunResult r = run_experiment(resolve_run_config(m));
    write_run(r, (dir / name).string());
    paths.push_back((dir / name / "metrics.csv").string());
  }
  const MetricsSeries one = read_metrics_csv(paths[0]);
  EXPECT_EQ(one.label, "a");
  EXPECT_EQ(one.iterations.size(), 100u);

  const std::string svg1 = render_svg({one});
  EXPECT_EQ(count(svg1, "<polyline"), 2u);

  std::vector<MetricsSeries> three;
  for (const auto &p : paths)
    three.push_back(read_metrics_csv(p));
  const std::string svg3 = render_svg(three);
  EXPECT_EQ(count(svg3, "<polyline"), 6u);
  const std::string legend = svg3.substr(svg3.find("<g class=\"legend\">"));
  EXPECT_EQ(count(legend.substr(0, legend.find("</g>")), "<text"), 3u);
  EXPECT_EQ(render_svg(three), svg3);
}

TEST(Plot, BadInputs) {
  const fs::path dir = scratch("plotbad");
  std::ofstream(dir / "bad.csv") << "iteration,sse\n1,2\n";
  std::ofstream(dir / "short.csv") << "iteration,avg_sse,best_sse,correct_rate,eta\n1,2,3\n";
  EXPECT_THROW(read_metrics_csv((dir / "bad.csv").string()), DataError);
  EXPECT_THROW(read_metrics_csv((dir / "short.csv").string()), DataError);
  EXPECT_THROW(read_metrics_csv((dir / "missing.csv").string()), DataError);
  EXPECT_EQ(series_label("/x/run7.csv"), "run7");
  EXPECT_EQ(series_label("/x/seed-3/metrics.csv"), "seed-3");
}
