/*
 * fabp: feed-forward network training with firefly-algorithm back-propagation
 * (FABPNN), a genetic-algorithm baseline (GABPNN) and plain steepest descent
 * (SDBP).
 *
 * C interface. Objects are opaque handles created and destroyed through this
 * API. Every fallible call returns a fabp_status; on failure a description is
 * available from fabp_last_error() on the calling thread until the next call.
 */
#ifndef FABP_FABP_H
#define FABP_FABP_H

#include <stddef.h>
#include <stdint.h>

#if defined(FABP_BUILDING_LIBRARY)
#define FABP_API __attribute__((visibility("default")))
#else
#define FABP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fabp_status {
  FABP_OK = 0,
  FABP_ERR_ARGUMENT = 1, /* null handle, index out of range, bad buffer */
  FABP_ERR_CONFIG = 2,   /* invalid configuration key or value */
  FABP_ERR_DATA = 3,     /* unreadable or malformed data / IO failure */
  FABP_ERR_INTERNAL = 4
} fabp_status;

FABP_API const char *fabp_version(void);

/* Message for the last failed call on this thread; never NULL. */
FABP_API const char *fabp_last_error(void);

/* ---- configuration ------------------------------------------------------ */

/* Flat key/value run configuration. Later assignments replace earlier ones. */
typedef struct fabp_config fabp_config;

FABP_API fabp_status fabp_config_create(fabp_config **out);
FABP_API fabp_status fabp_config_clone(const fabp_config *cfg, fabp_config **out);
FABP_API void fabp_config_destroy(fabp_config *cfg);

FABP_API fabp_status fabp_config_set(fabp_config *cfg, const char *key,
                                     const char *value);
/* Parses `key = value` lines ('#' starts a comment). */
FABP_API fabp_status fabp_config_parse(fabp_config *cfg, const char *text);
FABP_API fabp_status fabp_config_load_file(fabp_config *cfg, const char *path);
/* Resolves every key without loading data; reports the first problem. */
FABP_API fabp_status fabp_config_validate(const fabp_config *cfg);

/* ---- single runs -------------------------------------------------------- */

typedef struct fabp_record {
  size_t iteration; /* 1-based */
  double avg_sse;
  double best_sse;
  double correct_rate; /* percent */
  int has_eta;         /* firefly runs only */
  double eta;
} fabp_record;

/* String members point into the owning fabp_run and live as long as it. */
typedef struct fabp_summary {
  const char *algorithm;
  const char *dataset;
  const char *topology;
  uint64_t seed;
  size_t iterations;
  double correct_rate_final;
  double correct_rate_max;
  double correct_rate_min;
  double final_avg_sse;
  double final_best_sse;
  int has_stability;
  size_t stability_iteration;
  int has_holdout;
  double holdout_rate;
  double wall_time;
} fabp_summary;

typedef struct fabp_run fabp_run;

/* Loads the configured data set and trains with the configured algorithm. */
FABP_API fabp_status fabp_train(const fabp_config *cfg, fabp_run **out);
FABP_API void fabp_run_destroy(fabp_run *run);

FABP_API fabp_status fabp_run_summary(const fabp_run *run, fabp_summary *out);
FABP_API size_t fabp_run_record_count(const fabp_run *run);
FABP_API fabp_status fabp_run_record(const fabp_run *run, size_t index,
                                     fabp_record *out);
/* One-line human-readable summary owned by the run. */
FABP_API const char *fabp_run_summary_line(const fabp_run *run);

/* Writes metrics.csv and summary.json into `dir` (NULL: the configured
 * out_dir). metrics.csv header: iteration,avg_sse,best_sse,correct_rate,eta */
FABP_API fabp_status fabp_run_write(const fabp_run *run, const char *dir);

/* Class index predicted by the best weights for a raw (unnormalised) feature
 * vector of `length` values. */
FABP_API fabp_status fabp_run_classify(const fabp_run *run, const double *features,
                                       size_t length, size_t *out_class);

/* ---- comparisons -------------------------------------------------------- */

typedef struct fabp_compare fabp_compare;

/* `base` is copied; variants add overrides on top of it. */
FABP_API fabp_status fabp_compare_create(const fabp_config *base,
                                         fabp_compare **out);
FABP_API void fabp_compare_destroy(fabp_compare *cmp);
/* "algo" or "algo:key=value,key=value", e.g. "fabpnn:pop=5". */
FABP_API fabp_status fabp_compare_add_variant(fabp_compare *cmp, const char *spec);
/* Runs every (variant, seed) pair. A non-NULL out_dir receives per-run
 * subdirectories plus comparison.csv and comparison.txt. */
FABP_API fabp_status fabp_compare_run(fabp_compare *cmp, const uint64_t *seeds,
                                      size_t seed_count, const char *out_dir);
/* Rendered table of the last successful run, owned by the handle. */
FABP_API const char *fabp_compare_text(const fabp_compare *cmp);
FABP_API const char *fabp_compare_csv(const fabp_compare *cmp);

/* ---- utilities ---------------------------------------------------------- */

/* Two-panel SVG (correct rate and average SSE against iteration), one
 * polyline per input file per panel. */
FABP_API fabp_status fabp_plot_svg(const char *const *metrics_paths, size_t count,
                                   const char *out_path);

/* First 1-based index after which every rate stays within 0.5 points of the
 * last one. *has_value is 0 for a single-element list. */
FABP_API fabp_status fabp_stability_iteration(const double *rates, size_t count,
                                              size_t *out_index, int *has_value);

#ifdef __cplusplus
}
#endif

#endif /* FABP_FABP_H */
