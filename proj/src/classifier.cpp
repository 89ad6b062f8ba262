#include "ale/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ale/seeding.hpp"

namespace ale {

namespace {

constexpr const char* kMagic = "ale-classifier-v2";

std::size_t param_count(const ClassifierConfig& c) {
  if (c.hidden_units > 0)
    return static_cast<std::size_t>(c.hidden_units) * c.input_dim + c.hidden_units +
           static_cast<std::size_t>(c.num_classes) * c.hidden_units + c.num_classes;
  return static_cast<std::size_t>(c.num_classes) * c.input_dim + c.num_classes;
}

void softmax_inplace(std::vector<double>& z) {
  double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

// log(sum(exp(z))) with max subtraction; kept separate so the loss never
// round-trips through normalized probabilities.
double log_sum_exp(const std::vector<double>& z) {
  double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace

std::vector<double> one_hot(int label, int num_classes) {
  if (label < 0 || label >= num_classes)
    throw std::invalid_argument("label out of range");
  std::vector<double> t(num_classes, 0.0);
  t[label] = 1.0;
  return t;
}

std::vector<double> inverse_frequency_weights(const std::vector<long long>& counts) {
  std::vector<double> w(counts.size(), 0.0);
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) {
      w[c] = 1.0 / static_cast<double>(counts[c]);
      sum += w[c];
      ++present;
    }
  }
  if (present == 0) throw std::invalid_argument("no labeled samples");
  double mean = sum / static_cast<double>(present);
  for (double& v : w) v /= mean;
  return w;
}

ProbabilisticClassifier::ProbabilisticClassifier(const ClassifierConfig& config)
    : config_(config) {
  if (config_.input_dim < 1) throw std::invalid_argument("bad input dimension");
  if (config_.num_classes < 2) throw std::invalid_argument("need at least two classes");
  if (config_.hidden_units < 0) throw std::invalid_argument("bad hidden size");
  if (config_.batch_size < 1) throw std::invalid_argument("bad batch size");
  if (config_.epochs < 0) throw std::invalid_argument("bad epoch count");
  reinitialize(config_.seed);
  trained_ = false;
}

void ProbabilisticClassifier::reinitialize(std::uint64_t seed) {
  params_.assign(param_count(config_), 0.0);
  std::mt19937_64 rng(derive_seed(seed, streams::classifier_init));
  auto fill = [&](std::size_t begin, std::size_t count, int fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> uni(-bound, bound);
    for (std::size_t i = begin; i < begin + count; ++i) params_[i] = uni(rng);
  };
  if (config_.hidden_units > 0) {
    std::size_t w1 = static_cast<std::size_t>(config_.hidden_units) * config_.input_dim;
    std::size_t b1 = config_.hidden_units;
    std::size_t w2 = static_cast<std::size_t>(config_.num_classes) * config_.hidden_units;
    std::size_t b2 = config_.num_classes;
    fill(0, w1 + b1, config_.input_dim);
    fill(w1 + b1, w2 + b2, config_.hidden_units);
  } else {
    fill(0, params_.size(), config_.input_dim);
  }
  trained_ = false;
}

std::vector<double> ProbabilisticClassifier::logits(
    const std::vector<double>& feature) const {
  const int d = config_.input_dim;
  const int cn = config_.num_classes;
  const int h = config_.hidden_units;
  if (h > 0) {
    std::size_t w1 = static_cast<std::size_t>(h) * d;
    std::size_t b1 = w1;          // bias1 offset
    std::size_t w2 = w1 + h;      // weight2 offset
    std::size_t b2 = w2 + static_cast<std::size_t>(cn) * h;
    std::vector<double> a(h);
    for (int j = 0; j < h; ++j) {
      double s = params_[b1 + j];
      const double* row = &params_[static_cast<std::size_t>(j) * d];
      for (int i = 0; i < d; ++i) s += row[i] * feature[i];
      a[j] = std::tanh(s);
    }
    std::vector<double> z(cn);
    for (int k = 0; k < cn; ++k) {
      double s = params_[b2 + k];
      const double* row = &params_[w2 + static_cast<std::size_t>(k) * h];
      for (int j = 0; j < h; ++j) s += row[j] * a[j];
      z[k] = s;
    }
    return z;
  }
  std::size_t bias = static_cast<std::size_t>(cn) * d;
  std::vector<double> z(cn);
  for (int k = 0; k < cn; ++k) {
    double s = params_[bias + k];
    const double* row = &params_[static_cast<std::size_t>(k) * d];
    for (int i = 0; i < d; ++i) s += row[i] * feature[i];
    z[k] = s;
  }
  return z;
}

void ProbabilisticClassifier::accumulate_example(
    const TrainExample& ex, const std::vector<double>& class_weights,
    std::vector<double>& grad, double& loss) const {
  const int d = config_.input_dim;
  const int cn = config_.num_classes;
  const int h = config_.hidden_units;
  if (ex.feature.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("inconsistent feature length");
  if (ex.target.size() != static_cast<std::size_t>(cn))
    throw std::invalid_argument("bad target length");

  // Weighted soft-target cross-entropy: L = -sum_c w_c t_c log p_c, giving
  // dL/dz_k = p_k * (sum_c w_c t_c) - w_k t_k.
  std::vector<double> a;          // hidden activations (hidden case)
  std::vector<double> z;
  if (h > 0) {
    std::size_t b1 = static_cast<std::size_t>(h) * d;
    a.resize(h);
    for (int j = 0; j < h; ++j) {
      double s = params_[b1 + j];
      const double* row = &params_[static_cast<std::size_t>(j) * d];
      for (int i = 0; i < d; ++i) s += row[i] * ex.feature[i];
      a[j] = std::tanh(s);
    }
    std::size_t w2 = b1 + h;
    std::size_t b2 = w2 + static_cast<std::size_t>(cn) * h;
    z.resize(cn);
    for (int k = 0; k < cn; ++k) {
      double s = params_[b2 + k];
      const double* row = &params_[w2 + static_cast<std::size_t>(k) * h];
      for (int j = 0; j < h; ++j) s += row[j] * a[j];
      z[k] = s;
    }
  } else {
    z = logits(ex.feature);
  }

  double lse = log_sum_exp(z);
  double wt_sum = 0.0;
  for (int c = 0; c < cn; ++c) {
    double wt = class_weights[c] * ex.target[c];
    wt_sum += wt;
    if (wt != 0.0) loss -= wt * (z[c] - lse);
  }

  std::vector<double> p = z;
  softmax_inplace(p);
  std::vector<double> dz(cn);
  for (int k = 0; k < cn; ++k)
    dz[k] = p[k] * wt_sum - class_weights[k] * ex.target[k];

  if (h > 0) {
    std::size_t b1 = static_cast<std::size_t>(h) * d;
    std::size_t w2 = b1 + h;
    std::size_t b2 = w2 + static_cast<std::size_t>(cn) * h;
    std::vector<double> da(h, 0.0);
    for (int k = 0; k < cn; ++k) {
      const double* row = &params_[w2 + static_cast<std::size_t>(k) * h];
      double* grow = &grad[w2 + static_cast<std::size_t>(k) * h];
      for (int j = 0; j < h; ++j) {
        grow[j] += dz[k] * a[j];
        da[j] += dz[k] * row[j];
      }
      grad[b2 + k] += dz[k];
    }
    for (int j = 0; j < h; ++j) {
      double ds = da[j] * (1.0 - a[j] * a[j]);
      double* grow = &grad[static_cast<std::size_t>(j) * d];
      for (int i = 0; i < d; ++i) grow[i] += ds * ex.feature[i];
      grad[b1 + j] += ds;
    }
  } else {
    std::size_t bias = static_cast<std::size_t>(cn) * d;
    for (int k = 0; k < cn; ++k) {
      double* grow = &grad[static_cast<std::size_t>(k) * d];
      for (int i = 0; i < d; ++i) grow[i] += dz[k] * ex.feature[i];
      grad[bias + k] += dz[k];
    }
  }
}

double ProbabilisticClassifier::loss_on(
    const std::vector<TrainExample>& examples,
    const std::vector<double>& class_weights) const {
  if (examples.empty()) throw std::invalid_argument("no training data");
  if (class_weights.size() != static_cast<std::size_t>(config_.num_classes))
    throw std::invalid_argument("bad class weight length");
  std::vector<double> scratch(params_.size(), 0.0);
  double loss = 0.0;
  for (const auto& ex : examples) accumulate_example(ex, class_weights, scratch, loss);
  return loss / static_cast<double>(examples.size());
}

std::vector<double> ProbabilisticClassifier::gradient_on(
    const std::vector<TrainExample>& examples,
    const std::vector<double>& class_weights) const {
  if (examples.empty()) throw std::invalid_argument("no training data");
  if (class_weights.size() != static_cast<std::size_t>(config_.num_classes))
    throw std::invalid_argument("bad class weight length");
  std::vector<double> grad(params_.size(), 0.0);
  double loss = 0.0;
  for (const auto& ex : examples) accumulate_example(ex, class_weights, grad, loss);
  double inv = 1.0 / static_cast<double>(examples.size());
  for (double& g : grad) g *= inv;
  return grad;
}

double ProbabilisticClassifier::train(const std::vector<TrainExample>& examples,
                                      const std::vector<double>& class_weights,
                                      std::uint64_t shuffle_seed) {
  if (examples.empty()) throw std::invalid_argument("no training data");
  if (class_weights.size() != static_cast<std::size_t>(config_.num_classes))
    throw std::invalid_argument("bad class weight length");

  std::mt19937_64 rng(derive_seed(shuffle_seed, streams::train_shuffle));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> m(params_.size(), 0.0);
  std::vector<double> v(params_.size(), 0.0);
  std::vector<double> grad(params_.size());
  long long step = 0;

  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config_.batch_size)) {
      std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config_.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i)
        accumulate_example(examples[order[i]], class_weights, grad, batch_loss);
      double inv = 1.0 / static_cast<double>(end - start);
      for (double& g : grad) g *= inv;

      if (config_.optimizer == Optimizer::adam) {
        ++step;
        double b1 = config_.adam_beta1;
        double b2 = config_.adam_beta2;
        double corr1 = 1.0 - std::pow(b1, static_cast<double>(step));
        double corr2 = 1.0 - std::pow(b2, static_cast<double>(step));
        for (std::size_t i = 0; i < params_.size(); ++i) {
          m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
          v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
          double mhat = m[i] / corr1;
          double vhat = v[i] / corr2;
          params_[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.adam_epsilon);
        }
      } else {
        for (std::size_t i = 0; i < params_.size(); ++i)
          params_[i] -= config_.learning_rate * grad[i];
      }
    }
  }

  double final_loss = loss_on(examples, class_weights);
  if (!std::isfinite(final_loss)) throw std::runtime_error("diverged");
  trained_ = true;
  return final_loss;
}

void ProbabilisticClassifier::check_ready(const std::vector<double>& feature) const {
  if (!trained_) throw std::logic_error("classifier not trained");
  if (feature.size() != static_cast<std::size_t>(config_.input_dim))
    throw std::invalid_argument("inconsistent feature length");
}

std::vector<double> ProbabilisticClassifier::predict_proba(
    const std::vector<double>& feature) const {
  check_ready(feature);
  std::vector<double> p = logits(feature);
  softmax_inplace(p);
  return p;
}

double ProbabilisticClassifier::certainty(const std::vector<double>& feature) const {
  std::vector<double> p = predict_proba(feature);
  return *std::max_element(p.begin(), p.end());
}

double ProbabilisticClassifier::entropy(const std::vector<double>& feature) const {
  std::vector<double> p = predict_proba(feature);
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log(q);
  return h;
}

void ProbabilisticClassifier::save_checkpoint(std::ostream& out) const {
  out << kMagic << "\n";
  out << config_.input_dim << " " << config_.hidden_units << " "
      << config_.num_classes << "\n";
  // the full training config travels too, so a loaded model can keep
  // training exactly as the original would have
  out << (config_.optimizer == Optimizer::adam ? "adam" : "sgd") << " "
      << config_.epochs << " " << config_.batch_size << " " << config_.seed
      << "\n";
  // hexfloat keeps the round trip bit exact
  out << std::hexfloat;
  out << config_.learning_rate << " " << config_.adam_beta1 << " "
      << config_.adam_beta2 << " " << config_.adam_epsilon << "\n";
  out << params_.size() << "\n";
  for (double p : params_) out << p << "\n";
  out << std::defaultfloat;
  if (!out) throw std::runtime_error("checkpoint write failed");
}

void ProbabilisticClassifier::save_checkpoint(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("checkpoint write failed");
  save_checkpoint(f);
}

ProbabilisticClassifier ProbabilisticClassifier::load_checkpoint(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != kMagic)
    throw std::runtime_error("bad checkpoint header");
  ClassifierConfig cfg;
  std::string optimizer;
  if (!(in >> cfg.input_dim >> cfg.hidden_units >> cfg.num_classes >>
        optimizer >> cfg.epochs >> cfg.batch_size >> cfg.seed))
    throw std::runtime_error("bad checkpoint header");
  if (optimizer == "adam")
    cfg.optimizer = Optimizer::adam;
  else if (optimizer == "sgd")
    cfg.optimizer = Optimizer::sgd;
  else
    throw std::runtime_error("bad checkpoint header");

  // stream extraction does not accept hexfloat, so parse tokens directly
  auto read_double = [&in](double& value) {
    std::string token;
    if (!(in >> token)) throw std::runtime_error("bad checkpoint header");
    value = std::strtod(token.c_str(), nullptr);
  };
  read_double(cfg.learning_rate);
  read_double(cfg.adam_beta1);
  read_double(cfg.adam_beta2);
  read_double(cfg.adam_epsilon);

  std::size_t count = 0;
  if (!(in >> count)) throw std::runtime_error("bad checkpoint header");
  ProbabilisticClassifier clf(cfg);
  if (count != clf.params_.size()) throw std::runtime_error("bad checkpoint header");
  for (std::size_t i = 0; i < count; ++i) {
    std::string token;
    if (!(in >> token)) throw std::runtime_error("truncated checkpoint");
    clf.params_[i] = std::strtod(token.c_str(), nullptr);
  }
  clf.trained_ = true;
  return clf;
}

ProbabilisticClassifier ProbabilisticClassifier::load_checkpoint(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("checkpoint read failed");
  return load_checkpoint(f);
}

}  // namespace ale
