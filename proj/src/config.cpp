#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dataset.hpp"

namespace fabp {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

} // namespace

void ConfigMap::set(std::string key, std::string value) {
  key = trim(key);
  if (key.empty())
    throw ConfigError("empty configuration key");
  entries_[std::move(key)] = trim(value);
}

bool ConfigMap::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> ConfigMap::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    return std::nullopt;
  return it->second;
}

std::optional<double> ConfigMap::get_double(std::string_view key) const {
  auto v = get(key);
  if (!v)
    return std::nullopt;
  char *end = nullptr;
  const double d = std::strtod(v->c_str(), &end);
  if (v->empty() || end != v->c_str() + v->size() || !std::isfinite(d))
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" +
                      *v + "'");
  return d;
}

std::optional<std::uint64_t> ConfigMap::get_uint(std::string_view key) const {
  auto v = get(key);
  if (!v)
    return std::nullopt;
  std::uint64_t n = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
  if (v->empty() || ec != std::errc() || ptr != v->data() + v->size())
    throw ConfigError("'" + std::string(key) +
                      "' expects a non-negative integer, got '" + *v + "'");
  return n;
}

void ConfigMap::merge(const ConfigMap &other) {
  for (const auto &[k, v] : other.entries_)
    entries_[k] = v;
}

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    out.set(key, line.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || n == 0)
      throw ConfigError("expected a comma-separated list of positive integers, got '" +
                        std::string(text) + "'");
    out.push_back(n);
  }
  if (out.empty())
    throw ConfigError("empty integer list");
  return out;
}

} // namespace fabp
