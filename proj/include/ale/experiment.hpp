#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ale/classifier.hpp"
#include "ale/dataset.hpp"
#include "ale/features.hpp"
#include "ale/metrics.hpp"
#include "ale/selection.hpp"

namespace ale {

enum class Strategy { sa, sa_as, random_sampling, entropy, sa_mixup };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct FeatureConfig {
  bool gray_world = true;
  int classifier_side = 16;  // classifier input is side*side grayscale
  int pca_side = 32;         // PCA input resolution
  int pca_dims = 8;          // diversity feature dimensionality
};

struct DatasetSource {
  bool synthetic = true;
  SyntheticSpec spec;
  std::string pool_manifest;
  std::string val_manifest;
  std::string test_manifest;
};

bool same_dataset(const DatasetSource& a, const DatasetSource& b);

struct ExperimentConfig {
  Strategy strategy = Strategy::sa;
  DatasetSource dataset;
  FeatureConfig features;
  SelectionConfig selection;        // per-round seed is derived internally
  ClassifierConfig classifier;      // input_dim/num_classes/seed set internally
  double init_fraction = 0.10;
  int max_rounds = 9;
  double stop_p = 0.05;
  bool stop_rule = true;            // off = always run max_rounds (aligned curves)
  bool warm_start = true;
  double mixup_alpha = 0.2;
  std::uint64_t seed = 0;
  std::string output_dir;           // empty = no files written
  bool dump_augmented = false;      // write each round's synthesized images
};

// Normalized images and derived feature vectors for one dataset, shared
// across runs. PCA state is built only on first use so model-free
// strategies can be shown to never touch it.
class FeatureCache {
 public:
  FeatureCache(const DatasetBundle& bundle, const FeatureConfig& config);

  const std::unordered_map<SampleId, Image>& normalized() const { return normalized_; }
  const FeatureMap& classifier_features() const { return classifier_features_; }
  const FeatureMap& diversity_features() const;  // pool ids only, lazy
  const PCABasis& basis() const;                 // lazy
  int feature_dim() const { return config_.classifier_side * config_.classifier_side; }
  const FeatureConfig& config() const { return config_; }

 private:
  const DatasetBundle* bundle_;
  FeatureConfig config_;
  std::unordered_map<SampleId, Image> normalized_;
  FeatureMap classifier_features_;
  mutable std::optional<PCABasis> basis_;
  mutable FeatureMap diversity_features_;
};

struct RoundRecord {
  int round = 0;
  double query_ratio = 0.0;
  long long n_labeled = 0;
  EvalResult train;
  EvalResult val;
  EvalResult test;
  double train_loss = 0.0;
  double stop_p_value = 0.0;  // NaN at round 0
};

struct SelectionRecord {
  int round = 0;
  std::string strategy;
  SampleId id = 0;
  double score = 0.0;
  std::string criterion;  // certainty | representative | entropy | random
};

struct LearningCurve {
  std::vector<RoundRecord> rounds;
  std::vector<SelectionRecord> selections;
  std::string termination;  // stop_rule | max_rounds | exhausted
};

// Paired-correctness stopping check: stop once the exact McNemar p-value of
// consecutive validation predictions exceeds the threshold.
struct StopDecision {
  bool stop = false;
  double p_value = 1.0;
};
StopDecision stop_decision(const std::vector<int>& prev_correct,
                           const std::vector<int>& curr_correct, double stop_p);

LearningCurve run_experiment(const ExperimentConfig& config);
LearningCurve run_experiment(const ExperimentConfig& config,
                             const DatasetBundle& bundle);
LearningCurve run_experiment(const ExperimentConfig& config,
                             const DatasetBundle& bundle,
                             const FeatureCache& cache);

struct StrategyResult {
  std::string label;
  ExperimentConfig config;
  std::vector<LearningCurve> curves;  // one per seed replicate
};

struct CompareResult {
  std::vector<StrategyResult> strategies;
};

// Runs each config n_seeds times on one shared dataset (all configs must
// name the same dataset) with paired per-replicate seeds, sequentially.
CompareResult compare_strategies(const std::vector<ExperimentConfig>& configs,
                                 int n_seeds);

// SA at each gamma plus a random-sampling baseline, same pairing scheme.
CompareResult gamma_sweep(const ExperimentConfig& base,
                          const std::vector<double>& gammas, int n_seeds);

void write_curve_csv(const LearningCurve& curve, const std::string& path);
void write_selection_log_csv(const LearningCurve& curve, const std::string& path);
void write_summary_csv(const CompareResult& result, const std::string& path);

}  // namespace ale
