#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ale {

enum class Optimizer { adam, sgd };

struct ClassifierConfig {
  int input_dim = 0;
  int num_classes = 2;
  int hidden_units = 0;  // 0 = linear softmax, >0 = one tanh hidden layer
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int epochs = 200;
  int batch_size = 32;
  Optimizer optimizer = Optimizer::adam;
  std::uint64_t seed = 0;
};

// One training example: feature vector plus a target distribution over
// classes (a one-hot row for hard labels, a mixed row for soft labels).
struct TrainExample {
  std::vector<double> feature;
  std::vector<double> target;
};

std::vector<double> one_hot(int label, int num_classes);

// Inverse-frequency class weights rescaled to mean 1. A class absent from
// counts gets weight 0 so it cannot dominate the rescaling.
std::vector<double> inverse_frequency_weights(const std::vector<long long>& counts);

// Softmax probability model trained by mini-batch weighted cross-entropy.
// Parameters are stored flat: [W1 row-major, b1, W2 row-major, b2] for the
// hidden architecture, [W row-major, b] for the linear one.
class ProbabilisticClassifier {
 public:
  explicit ProbabilisticClassifier(const ClassifierConfig& config);

  // Runs config.epochs passes of seeded-shuffled mini-batches. Optimizer
  // moment state starts fresh each call; parameters continue from their
  // current values (warm start across calls). Returns the final mean loss
  // over the full set; a non-finite value raises "diverged".
  double train(const std::vector<TrainExample>& examples,
               const std::vector<double>& class_weights,
               std::uint64_t shuffle_seed);

  std::vector<double> predict_proba(const std::vector<double>& feature) const;
  double certainty(const std::vector<double>& feature) const;  // max class prob
  double entropy(const std::vector<double>& feature) const;    // -sum p ln p

  bool trained() const { return trained_; }
  const ClassifierConfig& config() const { return config_; }
  const std::vector<double>& parameters() const { return params_; }
  std::vector<double>& mutable_parameters() { return params_; }

  // Re-draws the uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] init and clears
  // the trained flag; used for cold-start runs.
  void reinitialize(std::uint64_t seed);

  // Mean weighted cross-entropy over a set, no parameter updates.
  double loss_on(const std::vector<TrainExample>& examples,
                 const std::vector<double>& class_weights) const;
  // Mean gradient over a set, same layout as parameters(); test hook for
  // finite-difference checks.
  std::vector<double> gradient_on(const std::vector<TrainExample>& examples,
                                  const std::vector<double>& class_weights) const;

  void save_checkpoint(std::ostream& out) const;
  void save_checkpoint(const std::string& path) const;
  static ProbabilisticClassifier load_checkpoint(std::istream& in);
  static ProbabilisticClassifier load_checkpoint(const std::string& path);

 private:
  std::vector<double> logits(const std::vector<double>& feature) const;
  void accumulate_example(const TrainExample& ex,
                          const std::vector<double>& class_weights,
                          std::vector<double>& grad, double& loss) const;
  void check_ready(const std::vector<double>& feature) const;

  ClassifierConfig config_;
  std::vector<double> params_;
  bool trained_ = false;
};

}  // namespace ale
