#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "random.hpp"

namespace fabp {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string &line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim))
    cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delim)
    cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string &s) {
  if (s.empty())
    return std::nullopt;
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<std::size_t> parse_size(const std::string &s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

} // namespace

DatasetSchema DatasetSchema::builtin(const std::string &name) {
  DatasetSchema s;
  if (name == "iris") {
    s.label_kind = LabelKind::StringClass;
    s.expected_rows = 150;
    s.expected_features = 4;
  } else if (name == "wine") {
    s.label_column = 0;
    s.label_kind = LabelKind::IntegerClass;
    s.expected_rows = 178;
    s.expected_features = 13;
  } else if (name == "liver") {
    // BUPA: six blood-test features, the selector column is the class.
    s.label_kind = LabelKind::IntegerClass;
    s.expected_rows = 345;
    s.expected_features = 6;
  } else {
    throw std::invalid_argument("unknown builtin data set '" + name + "'");
  }
  return s;
}

DatasetSchema DatasetSchema::parse(const std::string &text) {
  if (text == "iris" || text == "wine" || text == "liver")
    return builtin(text);
  DatasetSchema s;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty())
      continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("schema item '" + item + "' lacks '='");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = item.substr(eq + 1);
    const std::string tv = trim(value);
    if (key == "label") {
      if (tv == "last")
        s.label_column.reset();
      else if (tv == "first")
        s.label_column = 0;
      else if (auto n = parse_size(tv))
        s.label_column = *n;
      else
        throw std::invalid_argument("bad schema label column '" + tv + "'");
    } else if (key == "kind") {
      if (tv == "string")
        s.label_kind = LabelKind::StringClass;
      else if (tv == "integer")
        s.label_kind = LabelKind::IntegerClass;
      else
        throw std::invalid_argument("bad schema label kind '" + tv + "'");
    } else if (key == "delim" || key == "delimiter") {
      const std::string d = tv == "tab" ? "\t" : value;
      if (d.size() != 1)
        throw std::invalid_argument("schema delimiter must be one character");
      s.delimiter = d[0];
    } else if (key == "rows") {
      auto n = parse_size(tv);
      if (!n)
        throw std::invalid_argument("bad schema row count '" + tv + "'");
      s.expected_rows = *n;
    } else if (key == "features") {
      auto n = parse_size(tv);
      if (!n)
        throw std::invalid_argument("bad schema feature count '" + tv + "'");
      s.expected_features = *n;
    } else {
      throw std::invalid_argument("unknown schema key '" + key + "'");
    }
  }
  return s;
}

std::string builtin_file_name(const std::string &name) {
  if (name == "iris")
    return "iris.data";
  if (name == "wine")
    return "wine.data";
  if (name == "liver")
    return "bupa.data";
  throw std::invalid_argument("unknown builtin data set '" + name + "'");
}

std::string default_data_dir() {
#ifdef FABP_DATA_DIR
  return FABP_DATA_DIR;
#else
  return "data";
#endif
}

Dataset parse_csv(std::istream &in, const DatasetSchema &schema) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::optional<std::size_t> width;
  std::string line;
  std::size_t line_no = 0;
  std::size_t blank_run = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      ++blank_run;
      continue;
    }
    if (blank_run > 0 && !rows.empty())
      throw DataError("line " + std::to_string(line_no) +
                      ": data after blank line");
    blank_run = 0;

    const auto cells = split(line, schema.delimiter);
    if (width && cells.size() != *width)
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(*width) + " fields, found " +
                      std::to_string(cells.size()));
    if (cells.size() < 2)
      throw DataError("line " + std::to_string(line_no) +
                      ": need at least one feature and a label");
    width = cells.size();

    const std::size_t label_col = schema.label_column.value_or(cells.size() - 1);
    if (label_col >= cells.size())
      throw DataError("line " + std::to_string(line_no) +
                      ": label column out of range");

    std::vector<double> feats;
    feats.reserve(cells.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col)
        continue;
      auto v = parse_number(cells[c]);
      if (!v)
        throw DataError("line " + std::to_string(line_no) +
                        ": non-numeric feature '" + cells[c] + "' in column " +
                        std::to_string(c + 1));
      feats.push_back(*v);
    }

    std::string label = cells[label_col];
    if (label.empty())
      throw DataError("line " + std::to_string(line_no) + ": empty label");
    if (schema.label_kind == LabelKind::IntegerClass) {
      auto v = parse_number(label);
      if (!v || *v != std::floor(*v))
        throw DataError("line " + std::to_string(line_no) +
                        ": label '" + label + "' is not an integer");
      label = std::to_string(static_cast<long long>(*v));
    }
    rows.push_back(std::move(feats));
    raw_labels.push_back(std::move(label));
  }

  if (rows.empty())
    throw DataError("data file holds no rows");
  if (schema.expected_rows && rows.size() != *schema.expected_rows)
    throw DataError("expected " + std::to_string(*schema.expected_rows) +
                    " rows, found " + std::to_string(rows.size()));
  const std::size_t dim = rows.front().size();
  if (schema.expected_features && dim != *schema.expected_features)
    throw DataError("expected " + std::to_string(*schema.expected_features) +
                    " features, found " + std::to_string(dim));

  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c)
      d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  for (const auto &name : raw_labels) {
    auto it = std::find(d.class_names.begin(), d.class_names.end(), name);
    if (it == d.class_names.end()) {
      d.class_names.push_back(name);
      d.labels.push_back(d.class_names.size() - 1);
    } else {
      d.labels.push_back(static_cast<std::size_t>(it - d.class_names.begin()));
    }
  }
  return d;
}

Dataset load_csv(const std::string &path, const DatasetSchema &schema) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open data file '" + path + "'");
  try {
    return parse_csv(in, schema);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

Dataset min_max_normalize(Dataset d) {
  std::vector<std::pair<double, double>> params;
  params.reserve(d.feature_count());
  for (Eigen::Index c = 0; c < d.features.cols(); ++c)
    params.emplace_back(d.features.col(c).minCoeff(), d.features.col(c).maxCoeff());
  return apply_normalization(std::move(d), params);
}

Dataset apply_normalization(Dataset d,
                            const std::vector<std::pair<double, double>> &params) {
  if (params.size() != d.feature_count())
    throw std::invalid_argument("normalization parameter count mismatch");
  for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
    const auto [lo, hi] = params[static_cast<std::size_t>(c)];
    const double span = hi - lo;
    if (span > 0.0)
      d.features.col(c) = (d.features.col(c).array() - lo) / span;
    else
      d.features.col(c).setZero();
  }
  d.normalization = params;
  return d;
}

LabeledSet to_labeled_set(const Dataset &d) {
  LabeledSet out;
  out.inputs.reserve(d.rows());
  out.targets.reserve(d.rows());
  const auto classes = static_cast<Eigen::Index>(d.class_count());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    out.inputs.emplace_back(d.features.row(static_cast<Eigen::Index>(r)).transpose());
    Eigen::VectorXd t = Eigen::VectorXd::Zero(classes);
    t(static_cast<Eigen::Index>(d.labels[r])) = 1.0;
    out.targets.push_back(std::move(t));
  }
  return out;
}

namespace {

Dataset select_rows(const Dataset &d, const std::vector<std::size_t> &idx) {
  Dataset out;
  out.class_names = d.class_names;
  out.normalization = d.normalization;
  out.features.resize(static_cast<Eigen::Index>(idx.size()), d.features.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        d.features.row(static_cast<Eigen::Index>(idx[i]));
    out.labels.push_back(d.labels[idx[i]]);
  }
  return out;
}

} // namespace

std::pair<Dataset, Dataset> split_holdout(const Dataset &d, double fraction,
                                          std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw std::invalid_argument("holdout fraction must lie in [0, 1)");
  std::vector<std::size_t> idx(d.rows());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.index(i)]);
  const auto held = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(d.rows())));
  std::vector<std::size_t> hold(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(held));
  std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(held), idx.end());
  std::sort(hold.begin(), hold.end());
  std::sort(train.begin(), train.end());
  if (train.empty())
    throw std::invalid_argument("holdout leaves no training rows");
  return {select_rows(d, train), select_rows(d, hold)};
}

} // namespace fabp
