#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "acsheet/errors.hpp"

namespace acsheet {

// Flat key = value configuration; '#' starts a comment, lists are comma
// separated. Every key has a default, so an empty config is runnable.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // cross-field validation against the module preconditions; throws
  // ConfigInvalid naming the offending field
  void validate() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// One line per key: "key = default  # meaning"; backs the CLI --help text.
std::string config_reference();

}  // namespace acsheet
