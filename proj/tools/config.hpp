#pragma once

// Flat key = value experiment configuration with per-command sections.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace irslab::cli {

/// Usage or configuration problem; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string key;
  std::string fallback;  // empty: no default
  std::string help;
};

struct ConfigFile {
  std::map<std::string, std::string> global;   // keys before the first section
  std::map<std::string, std::string> section;  // keys of the command's section
};

/// Lines `key = value`; `#` starts a comment. Keys inside `[name]` apply only
/// to the command `name`. Throws ConfigError when the file is missing or a
/// line does not parse.
ConfigFile read_config_file(const std::string& path, const std::string& command);

class ExperimentConfig {
 public:
  ExperimentConfig(std::string command, const std::vector<KeySpec>& keys);

  /// Later calls override earlier ones; unknown keys throw ConfigError.
  void set(const std::string& key, const std::string& value);
  void merge(const std::map<std::string, std::string>& values);

  const std::string& command() const { return command_; }
  bool knows(const std::string& key) const { return known_.count(key) > 0; }
  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma- or whitespace-separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  /// Items separated by ';'.
  std::vector<std::string> items(const std::string& key) const;
  /// "a,b" or "a:b".
  std::pair<double, double> range(const std::string& key) const;

  /// key = value lines in key order.
  std::string dump() const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
  std::map<std::string, KeySpec> known_;
};

}  // namespace irslab::cli
