#include "ale/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ale {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// strips an unquoted trailing comment
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    std::string full = section.empty() ? key : section + "." + key;
    if (file.values_.count(full))
      throw std::runtime_error("config: duplicate key " + full);
    file.values_[full] = value;
    file.read_[full] = false;
  }
  return file;
}

std::string ConfigFile::get_string(const std::string& key,
                                   const std::string& fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  return it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for " + key);
  }
}

long long ConfigFile::get_int(const std::string& key, long long fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for " + key);
  }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw std::runtime_error("config: bad boolean for " + key);
}

std::map<std::string, std::string> ConfigFile::unread() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : values_)
    if (!read_.at(key)) out[key] = value;
  return out;
}

ExperimentConfig experiment_config_from(ConfigFile& file) {
  ExperimentConfig cfg;

  cfg.dataset.synthetic = file.get_bool("dataset.synthetic", true);
  cfg.dataset.spec.n_samples = file.get_int("dataset.n_samples", cfg.dataset.spec.n_samples);
  cfg.dataset.spec.image_side =
      static_cast<int>(file.get_int("dataset.image_side", cfg.dataset.spec.image_side));
  cfg.dataset.spec.modes = static_cast<int>(file.get_int("dataset.modes", cfg.dataset.spec.modes));
  cfg.dataset.spec.mode_falloff =
      file.get_double("dataset.mode_falloff", cfg.dataset.spec.mode_falloff);
  cfg.dataset.spec.mode_offset =
      file.get_double("dataset.mode_offset", cfg.dataset.spec.mode_offset);
  cfg.dataset.spec.class_separation =
      file.get_double("dataset.class_separation", cfg.dataset.spec.class_separation);
  cfg.dataset.spec.noise_sigma =
      file.get_double("dataset.noise_sigma", cfg.dataset.spec.noise_sigma);
  cfg.dataset.spec.seed =
      static_cast<std::uint64_t>(file.get_int("dataset.seed", 0));
  cfg.dataset.pool_manifest = file.get_string("dataset.pool_manifest", "");
  cfg.dataset.val_manifest = file.get_string("dataset.val_manifest", "");
  cfg.dataset.test_manifest = file.get_string("dataset.test_manifest", "");
  if (!cfg.dataset.synthetic &&
      (cfg.dataset.pool_manifest.empty() || cfg.dataset.val_manifest.empty() ||
       cfg.dataset.test_manifest.empty()))
    throw std::runtime_error("config: manifest paths required when synthetic = false");

  cfg.features.gray_world = file.get_bool("features.gray_world", cfg.features.gray_world);
  cfg.features.classifier_side =
      static_cast<int>(file.get_int("features.classifier_side", cfg.features.classifier_side));
  cfg.features.pca_side =
      static_cast<int>(file.get_int("features.pca_side", cfg.features.pca_side));
  cfg.features.pca_dims =
      static_cast<int>(file.get_int("features.pca_dims", cfg.features.pca_dims));

  cfg.selection.gamma = file.get_double("selection.gamma", cfg.selection.gamma);
  cfg.selection.round_fraction =
      file.get_double("selection.round_fraction", cfg.selection.round_fraction);
  cfg.selection.buckets =
      static_cast<int>(file.get_int("selection.buckets", cfg.selection.buckets));

  cfg.classifier.hidden_units =
      static_cast<int>(file.get_int("classifier.hidden_units", cfg.classifier.hidden_units));
  cfg.classifier.learning_rate =
      file.get_double("classifier.learning_rate", cfg.classifier.learning_rate);
  cfg.classifier.epochs =
      static_cast<int>(file.get_int("classifier.epochs", cfg.classifier.epochs));
  cfg.classifier.batch_size =
      static_cast<int>(file.get_int("classifier.batch_size", cfg.classifier.batch_size));
  std::string opt = file.get_string("classifier.optimizer", "adam");
  if (opt == "adam")
    cfg.classifier.optimizer = Optimizer::adam;
  else if (opt == "sgd")
    cfg.classifier.optimizer = Optimizer::sgd;
  else
    throw std::runtime_error("config: unknown optimizer " + opt);

  cfg.strategy = parse_strategy(file.get_string("experiment.strategy", "sa"));
  cfg.init_fraction = file.get_double("experiment.init_fraction", cfg.init_fraction);
  cfg.max_rounds = static_cast<int>(file.get_int("experiment.max_rounds", cfg.max_rounds));
  cfg.stop_p = file.get_double("experiment.stop_p", cfg.stop_p);
  cfg.stop_rule = file.get_bool("experiment.stop_rule", cfg.stop_rule);
  cfg.warm_start = file.get_bool("experiment.warm_start", cfg.warm_start);
  cfg.mixup_alpha = file.get_double("experiment.mixup_alpha", cfg.mixup_alpha);
  cfg.seed = static_cast<std::uint64_t>(file.get_int("experiment.seed", 0));
  cfg.output_dir = file.get_string("experiment.output_dir", "");

  auto leftover = file.unread();
  if (!leftover.empty())
    throw std::runtime_error("config: unknown key " + leftover.begin()->first);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  ConfigFile file = ConfigFile::parse_file(path);
  return experiment_config_from(file);
}

}  // namespace ale
