#pragma once

// Two-panel SVG training curves: correct rate and average SSE per iteration.

#include <string>
#include <vector>

namespace fabp {

struct MetricsSeries {
  std::string label;
  std::vector<double> iterations;
  std::vector<double> avg_sse;
  std::vector<double> correct_rate;
};

/// Reads a metrics.csv written by write_run. Throws DataError.
MetricsSeries read_metrics_csv(const std::string &path);

/// Legend label for a metrics file: its stem, or the parent directory name
/// when the stem is the generic "metrics".
std::string series_label(const std::string &path);

std::string render_svg(const std::vector<MetricsSeries> &series);

} // namespace fabp
