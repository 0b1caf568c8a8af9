#include "fabp/fabp.h"

#include <exception>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "experiment.hpp"
#include "plot.hpp"

struct fabp_config {
  fabp::ConfigMap map;
};

struct fabp_run {
  fabp::RunResult result;
  std::string out_dir;
  std::string algorithm;
  std::string line;
};

struct fabp_compare {
  fabp::ConfigMap base;
  std::vector<fabp::Variant> variants;
  std::string text;
  std::string csv;
};

namespace {

thread_local std::string last_error;

fabp_status fail(fabp_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

// Maps exceptions from the core onto status codes.
template <typename F> fabp_status guarded(F &&body) {
  try {
    last_error.clear();
    return body();
  } catch (const fabp::ConfigError &e) {
    return fail(FABP_ERR_CONFIG, e.what());
  } catch (const fabp::DataError &e) {
    return fail(FABP_ERR_DATA, e.what());
  } catch (const std::invalid_argument &e) {
    return fail(FABP_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc &) {
    return fail(FABP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(FABP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FABP_ERR_INTERNAL, "unknown error");
  }
}

fabp_status null_arg(const char *what) {
  return fail(FABP_ERR_ARGUMENT, std::string(what) + " is null");
}

} // namespace

extern "C" {

const char *fabp_version(void) { return "1.0.0"; }

const char *fabp_last_error(void) { return last_error.c_str(); }

fabp_status fabp_config_create(fabp_config **out) {
  if (!out)
    return null_arg("out");
  return guarded([&] {
    *out = new fabp_config{};
    return FABP_OK;
  });
}

fabp_status fabp_config_clone(const fabp_config *cfg, fabp_config **out) {
  if (!cfg)
    return null_arg("cfg");
  if (!out)
    return null_arg("out");
  return guarded([&] {
    *out = new fabp_config{*cfg};
    return FABP_OK;
  });
}

void fabp_config_destroy(fabp_config *cfg) { delete cfg; }

fabp_status fabp_config_set(fabp_config *cfg, const char *key, const char *value) {
  if (!cfg)
    return null_arg("cfg");
  if (!key || !value)
    return null_arg("key/value");
  return guarded([&] {
    cfg->map.set(key, value);
    return FABP_OK;
  });
}

fabp_status fabp_config_parse(fabp_config *cfg, const char *text) {
  if (!cfg)
    return null_arg("cfg");
  if (!text)
    return null_arg("text");
  return guarded([&] {
    cfg->map.merge(fabp::parse_config_text(text));
    return FABP_OK;
  });
}

fabp_status fabp_config_load_file(fabp_config *cfg, const char *path) {
  if (!cfg)
    return null_arg("cfg");
  if (!path)
    return null_arg("path");
  return guarded([&] {
    cfg->map.merge(fabp::load_config_file(path));
    return FABP_OK;
  });
}

fabp_status fabp_config_validate(const fabp_config *cfg) {
  if (!cfg)
    return null_arg("cfg");
  return guarded([&] {
    fabp::resolve_run_config(cfg->map);
    return FABP_OK;
  });
}

fabp_status fabp_train(const fabp_config *cfg, fabp_run **out) {
  if (!cfg)
    return null_arg("cfg");
  if (!out)
    return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const fabp::RunConfig rc = fabp::resolve_run_config(cfg->map);
    auto run = std::make_unique<fabp_run>();
    run->result = fabp::run_experiment(rc);
    run->out_dir = rc.out_dir;
    run->algorithm = std::string(fabp::algorithm_name(run->result.summary.algorithm));
    run->line = fabp::summary_line(run->result.summary);
    *out = run.release();
    return FABP_OK;
  });
}

void fabp_run_destroy(fabp_run *run) { delete run; }

fabp_status fabp_run_summary(const fabp_run *run, fabp_summary *out) {
  if (!run)
    return null_arg("run");
  if (!out)
    return null_arg("out");
  const auto &s = run->result.summary;
  *out = fabp_summary{};
  out->algorithm = run->algorithm.c_str();
  out->dataset = s.dataset.c_str();
  out->topology = s.topology.c_str();
  out->seed = s.seed;
  out->iterations = s.iterations;
  out->correct_rate_final = s.correct_rate_final;
  out->correct_rate_max = s.correct_rate_max;
  out->correct_rate_min = s.correct_rate_min;
  out->final_avg_sse = s.final_avg_sse;
  out->final_best_sse = s.final_best_sse;
  out->has_stability = s.stability_iteration.has_value();
  out->stability_iteration = s.stability_iteration.value_or(0);
  out->has_holdout = s.holdout_rate.has_value();
  out->holdout_rate = s.holdout_rate.value_or(0.0);
  out->wall_time = s.wall_time;
  return FABP_OK;
}

size_t fabp_run_record_count(const fabp_run *run) {
  return run ? run->result.records.size() : 0;
}

fabp_status fabp_run_record(const fabp_run *run, size_t index, fabp_record *out) {
  if (!run)
    return null_arg("run");
  if (!out)
    return null_arg("out");
  if (index >= run->result.records.size())
    return fail(FABP_ERR_ARGUMENT, "record index out of range");
  const auto &r = run->result.records[index];
  out->iteration = r.iteration;
  out->avg_sse = r.avg_sse;
  out->best_sse = r.best_sse;
  out->correct_rate = r.correct_rate;
  out->has_eta = r.eta.has_value();
  out->eta = r.eta.value_or(0.0);
  return FABP_OK;
}

const char *fabp_run_summary_line(const fabp_run *run) {
  return run ? run->line.c_str() : "";
}

fabp_status fabp_run_write(const fabp_run *run, const char *dir) {
  if (!run)
    return null_arg("run");
  return guarded([&] {
    fabp::write_run(run->result, dir ? std::string(dir) : run->out_dir);
    return FABP_OK;
  });
}

fabp_status fabp_run_classify(const fabp_run *run, const double *features,
                              size_t length, size_t *out_class) {
  if (!run)
    return null_arg("run");
  if (!features || !out_class)
    return null_arg("features/out_class");
  const auto &norm = run->result.normalization;
  if (length != norm.size())
    return fail(FABP_ERR_ARGUMENT, "expected " + std::to_string(norm.size()) +
                                       " features, got " + std::to_string(length));
  return guarded([&] {
    Eigen::VectorXd x(static_cast<Eigen::Index>(length));
    for (size_t i = 0; i < length; ++i) {
      const auto [lo, hi] = norm[i];
      x(static_cast<Eigen::Index>(i)) = hi > lo ? (features[i] - lo) / (hi - lo) : 0.0;
    }
    *out_class = fabp::classify(run->result.best, x);
    return FABP_OK;
  });
}

fabp_status fabp_compare_create(const fabp_config *base, fabp_compare **out) {
  if (!base)
    return null_arg("base");
  if (!out)
    return null_arg("out");
  return guarded([&] {
    *out = new fabp_compare{base->map, {}, {}, {}};
    return FABP_OK;
  });
}

void fabp_compare_destroy(fabp_compare *cmp) { delete cmp; }

fabp_status fabp_compare_add_variant(fabp_compare *cmp, const char *spec) {
  if (!cmp)
    return null_arg("cmp");
  if (!spec)
    return null_arg("spec");
  return guarded([&] {
    cmp->variants.push_back(fabp::parse_variant(spec));
    return FABP_OK;
  });
}

fabp_status fabp_compare_run(fabp_compare *cmp, const uint64_t *seeds,
                             size_t seed_count, const char *out_dir) {
  if (!cmp)
    return null_arg("cmp");
  if (!seeds && seed_count > 0)
    return null_arg("seeds");
  return guarded([&] {
    const fabp::CompareTable table = fabp::run_comparison(
        cmp->base, cmp->variants, std::span<const uint64_t>(seeds, seed_count),
        out_dir ? out_dir : "");
    cmp->text = fabp::comparison_text(table);
    cmp->csv = fabp::comparison_csv(table);
    return FABP_OK;
  });
}

const char *fabp_compare_text(const fabp_compare *cmp) {
  return cmp ? cmp->text.c_str() : "";
}

const char *fabp_compare_csv(const fabp_compare *cmp) {
  return cmp ? cmp->csv.c_str() : "";
}

fabp_status fabp_plot_svg(const char *const *metrics_paths, size_t count,
                          const char *out_path) {
  if (!metrics_paths || !out_path)
    return null_arg("metrics_paths/out_path");
  if (count == 0)
    return fail(FABP_ERR_ARGUMENT, "no metrics files given");
  return guarded([&] {
    std::vector<fabp::MetricsSeries> series;
    for (size_t i = 0; i < count; ++i) {
      if (!metrics_paths[i])
        return null_arg("metrics path");
      series.push_back(fabp::read_metrics_csv(metrics_paths[i]));
    }
    fabp::write_file_atomic(out_path, fabp::render_svg(series));
    return FABP_OK;
  });
}

fabp_status fabp_stability_iteration(const double *rates, size_t count,
                                     size_t *out_index, int *has_value) {
  if (!out_index || !has_value)
    return null_arg("out_index/has_value");
  if (!rates || count == 0)
    return fail(FABP_ERR_ARGUMENT, "rate list is empty");
  const auto k = fabp::stability_iteration(std::span<const double>(rates, count));
  *has_value = k.has_value();
  *out_index = k.value_or(0);
  return FABP_OK;
}

} // extern "C"
