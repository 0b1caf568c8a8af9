#include <CLI11.hpp>

#include <cstdio>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "fabp/fabp.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int exit_code(fabp_status s) {
  switch (s) {
  case FABP_OK:
    return 0;
  case FABP_ERR_ARGUMENT:
  case FABP_ERR_CONFIG:
    return kExitConfig;
  case FABP_ERR_DATA:
    return kExitData;
  default:
    return 1;
  }
}

int report(fabp_status s) {
  std::cerr << "fabp: " << fabp_last_error() << '\n';
  return exit_code(s);
}

// Run-level options shared by train and compare. Empty strings are unset.
struct RunFlags {
  std::string config;
  std::string algo, dataset, data_file, data_dir, schema, topology;
  std::string pop, iters, seed, holdout, movement_space, out_dir;
  std::vector<std::string> sets;

  void add_to(CLI::App *cmd, bool with_seed) {
    cmd->add_option("--config", config, "key = value configuration file");
    cmd->add_option("--algo", algo, "fabpnn | gabpnn | sdbp");
    cmd->add_option("--dataset", dataset, "builtin data set: iris | wine | liver");
    cmd->add_option("--data-file", data_file, "CSV file to load instead of a builtin");
    cmd->add_option("--data-dir", data_dir, "directory holding the builtin data files");
    cmd->add_option("--schema", schema,
                    "builtin name or label=first|last|N;kind=string|integer;...");
    cmd->add_option("--topology", topology, "layer sizes, e.g. 4,6,3");
    cmd->add_option("--pop", pop, "population size (fireflies or chromosomes)");
    cmd->add_option("--iters", iters, "maximum iterations / generations");
    if (with_seed)
      cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--holdout", holdout, "fraction held out for evaluation");
    cmd->add_option("--movement-space", movement_space,
                    "firefly movement: weight-vector | error-scalar");
    cmd->add_option("--out-dir", out_dir, "output directory");
    cmd->add_option("--set", sets, "extra key=value assignment (repeatable)");
  }

  // File first, then flags, so flags win.
  fabp_status apply(fabp_config *cfg) const {
    fabp_status s = FABP_OK;
    if (!config.empty() && (s = fabp_config_load_file(cfg, config.c_str())))
      return s;
    const std::pair<const char *, const std::string *> flags[] = {
        {"algo", &algo},         {"dataset", &dataset},
        {"data_file", &data_file}, {"data_dir", &data_dir},
        {"schema", &schema},     {"topology", &topology},
        {"pop", &pop},           {"iters", &iters},
        {"seed", &seed},         {"holdout", &holdout},
        {"movement_space", &movement_space}, {"out_dir", &out_dir}};
    for (const auto &[key, value] : flags)
      if (!value->empty() && (s = fabp_config_set(cfg, key, value->c_str())))
        return s;
    for (const auto &kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        return fabp_config_parse(cfg, kv.c_str()); // reports the malformed line
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if ((s = fabp_config_set(cfg, key.c_str(), value.c_str())))
        return s;
    }
    return FABP_OK;
  }
};

struct ConfigHandle {
  fabp_config *p = nullptr;
  ~ConfigHandle() { fabp_config_destroy(p); }
};

int cmd_train(const RunFlags &flags) {
  ConfigHandle cfg;
  if (fabp_status s = fabp_config_create(&cfg.p))
    return report(s);
  if (fabp_status s = flags.apply(cfg.p))
    return report(s);
  fabp_run *run = nullptr;
  if (fabp_status s = fabp_train(cfg.p, &run))
    return report(s);
  fabp_status s = fabp_run_write(run, nullptr);
  if (s == FABP_OK)
    std::cout << fabp_run_summary_line(run) << '\n';
  fabp_run_destroy(run);
  return s == FABP_OK ? 0 : report(s);
}

int cmd_compare(const RunFlags &flags, const std::vector<std::uint64_t> &seeds,
                std::vector<std::string> variants) {
  ConfigHandle cfg;
  if (fabp_status s = fabp_config_create(&cfg.p))
    return report(s);
  if (fabp_status s = flags.apply(cfg.p))
    return report(s);
  if (variants.empty())
    variants = {"fabpnn:pop=5", "fabpnn:pop=20", "gabpnn"};
  fabp_compare *cmp = nullptr;
  if (fabp_status s = fabp_compare_create(cfg.p, &cmp))
    return report(s);
  fabp_status s = FABP_OK;
  for (const auto &v : variants)
    if ((s = fabp_compare_add_variant(cmp, v.c_str())))
      break;
  const std::string out = flags.out_dir.empty() ? "out" : flags.out_dir;
  if (s == FABP_OK)
    s = fabp_compare_run(cmp, seeds.data(), seeds.size(), out.c_str());
  if (s == FABP_OK)
    std::cout << fabp_compare_text(cmp);
  fabp_compare_destroy(cmp);
  return s == FABP_OK ? 0 : report(s);
}

int cmd_plot(const std::vector<std::string> &inputs, const std::string &output) {
  std::vector<const char *> paths;
  for (const auto &p : inputs)
    paths.push_back(p.c_str());
  if (fabp_status s = fabp_plot_svg(paths.data(), paths.size(), output.c_str())) {
    // Missing or malformed inputs are data errors here.
    std::cerr << "fabp: " << fabp_last_error() << '\n';
    return s == FABP_ERR_ARGUMENT ? kExitConfig : kExitData;
  }
  std::cout << "wrote " << output << '\n';
  return 0;
}

int cmd_stability(const std::vector<double> &rates) {
  std::size_t k = 0;
  int has = 0;
  if (fabp_status s = fabp_stability_iteration(rates.data(), rates.size(), &k, &has))
    return report(s);
  if (has)
    std::cout << k << '\n';
  else
    std::cout << "none\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Firefly / GA / steepest-descent training of feed-forward networks"};
  app.set_version_flag("--version", std::string(fabp_version()));
  app.require_subcommand(1);

  RunFlags train_flags;
  CLI::App *train = app.add_subcommand("train", "train one network and write metrics");
  train_flags.add_to(train, true);

  RunFlags compare_flags;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<std::string> variants;
  CLI::App *compare = app.add_subcommand("compare", "run variants over several seeds");
  compare_flags.add_to(compare, false);
  compare->add_option("--seeds", seeds, "comma-separated seed list")->delimiter(',');
  compare->add_option("--variant", variants,
                      "algo[:key=value,...] (repeatable; default fabpnn pop 5/20 and gabpnn)");

  std::vector<std::string> plot_inputs;
  std::string plot_output = "training.svg";
  CLI::App *plot = app.add_subcommand("plot", "render metrics CSV files as an SVG");
  plot->add_option("inputs", plot_inputs, "metrics.csv files")->required();
  plot->add_option("-o,--output", plot_output, "SVG output path");

  std::vector<double> rates;
  CLI::App *stability = app.add_subcommand("stability", "stability iteration of a rate list");
  stability->add_option("rates", rates, "correct rates in percent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*train)
    return cmd_train(train_flags);
  if (*compare)
    return cmd_compare(compare_flags, seeds, variants);
  if (*plot)
    return cmd_plot(plot_inputs, plot_output);
  return cmd_stability(rates);
}
