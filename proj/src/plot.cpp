#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dataset.hpp"
#include "experiment.hpp"

namespace fabp {

namespace {

constexpr double kWidth = 720;
constexpr double kPanelHeight = 260;
constexpr double kLeft = 70;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kGap = 70;

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo, hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0 ? std::abs(lo) * 0.1 : 1.0;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

void panel(std::ostringstream &os, const std::vector<MetricsSeries> &series,
           double top, const std::string &title,
           const std::vector<double> MetricsSeries::*field) {
  double xmax = 1, ymin = INFINITY, ymax = -INFINITY;
  for (const auto &s : series) {
    for (double x : s.iterations)
      xmax = std::max(xmax, x);
    for (double y : s.*field) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  const Range xr = padded(1, xmax);
  const Range yr = padded(ymin, ymax);
  const double plot_w = kWidth - kLeft - kRight;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) {
    return top + kPanelHeight - (y - yr.lo) / (yr.hi - yr.lo) * kPanelHeight;
  };

  os << "  <text x=\"" << num(kLeft) << "\" y=\"" << num(top - 10)
     << "\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "  <rect x=\"" << num(kLeft) << "\" y=\"" << num(top) << "\" width=\""
     << num(plot_w) << "\" height=\"" << num(kPanelHeight)
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    os << "  <text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4)
       << "\" font-size=\"10\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    const double x = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    os << "  <text x=\"" << num(px(x)) << "\" y=\""
       << num(top + kPanelHeight + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << tick_label(x)
       << "</text>\n";
  }
  os << "  <text x=\"" << num(kLeft + plot_w / 2) << "\" y=\""
     << num(top + kPanelHeight + 30)
     << "\" font-size=\"11\" text-anchor=\"middle\">iteration</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto &s = series[i];
    os << "  <polyline fill=\"none\" stroke-width=\"1.5\" stroke=\""
       << kPalette[i % std::size(kPalette)] << "\" points=\"";
    const auto &ys = s.*field;
    for (std::size_t k = 0; k < s.iterations.size(); ++k)
      os << (k ? " " : "") << num(px(s.iterations[k])) << "," << num(py(ys[k]));
    os << "\"/>\n";
  }
}

} // namespace

std::string series_label(const std::string &path) {
  const std::filesystem::path p(path);
  const std::string stem = p.stem().string();
  if (stem == "metrics" && p.has_parent_path() &&
      !p.parent_path().filename().empty())
    return p.parent_path().filename().string();
  return stem;
}

MetricsSeries read_metrics_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open metrics file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader)
    throw DataError(path + ": missing metrics header '" +
                    std::string(kMetricsHeader) + "'");
  MetricsSeries s;
  s.label = series_label(path);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
      cells.emplace_back();
    if (cells.size() != 5)
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected 5 fields");
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      char *end = nullptr;
      vals[i] = std::strtod(cells[static_cast<std::size_t>(i)].c_str(), &end);
      if (cells[static_cast<std::size_t>(i)].empty() || *end != '\0' ||
          !std::isfinite(vals[i]))
        throw DataError(path + ": line " + std::to_string(line_no) +
                        ": non-numeric field");
    }
    s.iterations.push_back(vals[0]);
    s.avg_sse.push_back(vals[1]);
    s.correct_rate.push_back(vals[3]);
  }
  if (s.iterations.empty())
    throw DataError(path + ": no metrics rows");
  return s;
}

std::string render_svg(const std::vector<MetricsSeries> &series) {
  const double height = kTop + 2 * kPanelHeight + kGap + 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(kWidth) << " "
     << num(height) << "\" font-family=\"sans-serif\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  panel(os, series, kTop, "Correct classification (%)", &MetricsSeries::correct_rate);
  panel(os, series, kTop + kPanelHeight + kGap, "Average SSE",
        &MetricsSeries::avg_sse);

  const double lx = kWidth - kRight + 20;
  os << "  <g class=\"legend\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    os << "    <line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(lx + 20) << "\" y2=\"" << num(ly) << "\" stroke=\""
       << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n";
    os << "    <text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4)
       << "\" font-size=\"11\">" << escape(series[i].label) << "</text>\n";
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

} // namespace fabp
