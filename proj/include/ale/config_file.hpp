#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ale/experiment.hpp"

namespace ale {

// Flat "[section] key = value" file: strings quoted, bools true/false,
// numbers plain, # starts a comment. Keys are exposed as "section.key".
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  long long get_int(const std::string& key, long long fallback);
  bool get_bool(const std::string& key, bool fallback);

  // Keys present in the file but never read by a getter; used to reject
  // misspelled configuration.
  std::map<std::string, std::string> unread() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> read_;
};

// Builds a full experiment configuration, rejecting unknown keys.
ExperimentConfig experiment_config_from(ConfigFile& file);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace ale
