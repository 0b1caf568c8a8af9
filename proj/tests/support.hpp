#pragma once

#include <string>

#include "dataset.hpp"
#include "network.hpp"

namespace fabp::test {

inline Dataset builtin(const std::string &name) {
  return load_csv(default_data_dir() + "/" + builtin_file_name(name),
                  DatasetSchema::builtin(name));
}

inline LabeledSet normalized(const std::string &name) {
  return to_labeled_set(min_max_normalize(builtin(name)));
}

inline LabeledSet first_rows(const LabeledSet &s, std::size_t n) {
  LabeledSet out;
  out.inputs.assign(s.inputs.begin(), s.inputs.begin() + n);
  out.targets.assign(s.targets.begin(), s.targets.begin() + n);
  return out;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
    out(i++) = x;
  return out;
}

} // namespace fabp::test
