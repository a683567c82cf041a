#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace irslab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") + 1 - first);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  if (!trim(text.substr(used)).empty()) throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  return value;
}

}  // namespace

ConfigFile read_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ConfigFile out;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) {
      out.global[key] = trim(line.substr(eq + 1));
    } else if (section == command) {
      out.section[key] = trim(line.substr(eq + 1));
    }
  }
  return out;
}

ExperimentConfig::ExperimentConfig(std::string command, const std::vector<KeySpec>& keys)
    : command_(std::move(command)) {
  for (const KeySpec& k : keys) {
    known_[k.key] = k;
    if (!k.fallback.empty()) values_[k.key] = k.fallback;
  }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!known_.count(key)) throw ConfigError("unknown key '" + key + "' for " + command_);
  values_[key] = value;
}

void ExperimentConfig::merge(const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) set(key, value);
}

bool ExperimentConfig::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string ExperimentConfig::text(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing key '" + key + "' for " + command_);
  return values_.at(key);
}

double ExperimentConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

long long ExperimentConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw ConfigError("key '" + key + "': expected an integer");
  }
  return static_cast<long long>(v);
}

std::uint64_t ExperimentConfig::seed(const std::string& key) const {
  const std::string t = text(key);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("key '" + key + "': expected a non-negative integer");
  }
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': out of range");
  }
}

bool ExperimentConfig::flag(const std::string& key) const {
  const std::string t = text(key);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  std::string t = text(key);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<std::string> ExperimentConfig::items(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(text(key));
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::pair<double, double> ExperimentConfig::range(const std::string& key) const {
  std::string t = text(key);
  std::replace(t.begin(), t.end(), ':', ',');
  const auto comma = t.find(',');
  if (comma == std::string::npos) throw ConfigError("key '" + key + "': expected lo,hi");
  const double lo = parse_number(key, trim(t.substr(0, comma)));
  const double hi = parse_number(key, trim(t.substr(comma + 1)));
  if (!(lo < hi)) throw ConfigError("key '" + key + "': empty range");
  return {lo, hi};
}

std::string ExperimentConfig::dump() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << " = " << value << '\n';
  return out.str();
}

}  // namespace irslab::cli
