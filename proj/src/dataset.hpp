#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "network.hpp"

namespace fabp {

/// Raised for unreadable or malformed data files.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class LabelKind { StringClass, IntegerClass };

struct DatasetSchema {
  char delimiter = ',';
  std::optional<std::size_t> label_column; ///< unset means last column
  LabelKind label_kind = LabelKind::StringClass;
  std::optional<std::size_t> expected_rows;
  std::optional<std::size_t> expected_features;

  /// `iris`, `wine` or `liver`. Throws std::invalid_argument otherwise.
  static DatasetSchema builtin(const std::string &name);

  /// Parses `label=first|last|<index>;kind=string|integer;delim=<c>;rows=<n>;features=<n>`
  /// or a builtin name.
  static DatasetSchema parse(const std::string &text);
};

/// File name of a builtin data set inside the data directory.
std::string builtin_file_name(const std::string &name);

/// Compiled-in location of the bundled UCI files.
std::string default_data_dir();

struct Dataset {
  Eigen::MatrixXd features; ///< N x D
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names; ///< first-appearance order
  std::vector<std::pair<double, double>> normalization; ///< per feature (min, max)

  std::size_t rows() const { return labels.size(); }
  std::size_t feature_count() const {
    return static_cast<std::size_t>(features.cols());
  }
  std::size_t class_count() const { return class_names.size(); }
};

Dataset parse_csv(std::istream &in, const DatasetSchema &schema);
Dataset load_csv(const std::string &path, const DatasetSchema &schema);

/// Min-max scaling to [0, 1] with parameters taken from `d` itself. Constant
/// features map to 0.
Dataset min_max_normalize(Dataset d);

/// Scale with previously computed (min, max) pairs, e.g. for a holdout split.
/// Values are not clamped.
Dataset apply_normalization(Dataset d,
                            const std::vector<std::pair<double, double>> &params);

/// One-hot targets of length class_count(); row order preserved.
LabeledSet to_labeled_set(const Dataset &d);

/// Split rows into (train, holdout) with `fraction` of the rows held out,
/// chosen by a seeded shuffle. fraction must lie in [0, 1).
std::pair<Dataset, Dataset> split_holdout(const Dataset &d, double fraction,
                                          std::uint64_t seed);

} // namespace fabp
