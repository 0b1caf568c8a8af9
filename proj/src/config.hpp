#pragma once

// Flat `key = value` configuration text with dotted keys, e.g.
//
//   algo = fabpnn
//   firefly.alpha = 0.2   # trailing comments are allowed
//
// Later assignments replace earlier ones, so loading a file and then applying
// command-line flags gives flags precedence.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fabp {

/// Raised for malformed configuration text or out-of-range values.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigMap {
public:
  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  std::optional<double> get_double(std::string_view key) const;
  std::optional<std::uint64_t> get_uint(std::string_view key) const;

  /// Merge `other` on top of this map.
  void merge(const ConfigMap &other);

  const std::map<std::string, std::string, std::less<>> &entries() const {
    return entries_;
  }

private:
  std::map<std::string, std::string, std::less<>> entries_;
};

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::string &path);

/// Parses "4,6,3" style lists of positive integers.
std::vector<std::size_t> parse_size_list(std::string_view text);

} // namespace fabp
