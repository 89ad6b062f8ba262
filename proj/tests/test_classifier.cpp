#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ale/classifier.hpp"

using namespace ale;

namespace {

std::vector<TrainExample> two_blobs(int per_class, double gap,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 0.5);
  std::vector<TrainExample> out;
  for (int cls = 0; cls < 2; ++cls)
    for (int i = 0; i < per_class; ++i) {
      TrainExample ex;
      ex.feature = {gauss(rng) + (cls ? gap : -gap), gauss(rng)};
      ex.target = one_hot(cls, 2);
      out.push_back(std::move(ex));
    }
  return out;
}

double blob_accuracy(const ProbabilisticClassifier& model,
                     const std::vector<TrainExample>& examples) {
  int hits = 0;
  for (const auto& ex : examples) {
    auto p = model.predict_proba(ex.feature);
    int pred = p[1] > p[0] ? 1 : 0;
    int truth = ex.target[1] > ex.target[0] ? 1 : 0;
    hits += pred == truth;
  }
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

ClassifierConfig blob_config(int hidden) {
  ClassifierConfig cfg;
  cfg.input_dim = 2;
  cfg.num_classes = 2;
  cfg.hidden_units = hidden;
  cfg.learning_rate = 0.05;
  cfg.epochs = 500;
  cfg.batch_size = 16;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("one_hot and inverse-frequency weights") {
  CHECK(one_hot(1, 3) == std::vector<double>{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(one_hot(3, 3), std::invalid_argument);

  // Counts 10 vs 30: weights proportional to 1/10 and 1/30, mean 1.
  auto w = inverse_frequency_weights({10, 30});
  CHECK(w[0] == doctest::Approx(1.5));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK((w[0] + w[1]) / 2.0 == doctest::Approx(1.0));

  // An absent class keeps weight 0 and the present ones still average 1.
  auto w3 = inverse_frequency_weights({10, 0, 30});
  CHECK(w3[1] == 0.0);
  CHECK((w3[0] + w3[2]) / 2.0 == doctest::Approx(1.0));
}

TEST_CASE("gradients match central finite differences on 20 configs") {
  std::mt19937_64 rng(20240819);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_int_distribution<int> classes(2, 4);
  std::uniform_int_distribution<int> hidden_pick(0, 6);
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_real_distribution<double> uni(0.1, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    ClassifierConfig cfg;
    cfg.input_dim = dim(rng);
    cfg.num_classes = classes(rng);
    int h = hidden_pick(rng);
    cfg.hidden_units = h <= 3 ? 0 : h;  // mix linear and hidden architectures
    cfg.seed = trial;
    ProbabilisticClassifier model(cfg);

    std::vector<TrainExample> examples;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      TrainExample ex;
      ex.feature.resize(cfg.input_dim);
      for (double& x : ex.feature) x = gauss(rng);
      // Soft targets exercise the general weighted-CE gradient.
      ex.target.resize(cfg.num_classes);
      double sum = 0.0;
      for (double& t : ex.target) sum += (t = uni(rng));
      for (double& t : ex.target) t /= sum;
      examples.push_back(std::move(ex));
    }
    std::vector<double> weights(cfg.num_classes);
    for (double& w : weights) w = uni(rng);

    auto grad = model.gradient_on(examples, weights);
    auto& params = model.mutable_parameters();
    REQUIRE(grad.size() == params.size());

    const double eps = 1e-6;
    for (std::size_t k = 0; k < params.size(); k += 7) {  // sampled coordinates
      double saved = params[k];
      params[k] = saved + eps;
      double up = model.loss_on(examples, weights);
      params[k] = saved - eps;
      double down = model.loss_on(examples, weights);
      params[k] = saved;
      double numeric = (up - down) / (2.0 * eps);
      double denom = std::max({1.0, std::fabs(numeric), std::fabs(grad[k])});
      CHECK(std::fabs(numeric - grad[k]) / denom < 1e-4);
    }
  }
}

TEST_CASE("separable blobs train to >= 0.99 accuracy in 500 epochs") {
  std::mt19937_64 rng(4);
  auto examples = two_blobs(40, 2.0, rng);

  SUBCASE("linear softmax") {
    ProbabilisticClassifier model(blob_config(0));
    double loss = model.train(examples, {1.0, 1.0}, 1);
    CHECK(std::isfinite(loss));
    CHECK(blob_accuracy(model, examples) >= 0.99);
  }
  SUBCASE("tanh hidden layer") {
    ProbabilisticClassifier model(blob_config(8));
    double loss = model.train(examples, {1.0, 1.0}, 1);
    CHECK(std::isfinite(loss));
    CHECK(blob_accuracy(model, examples) >= 0.99);
  }
  SUBCASE("sgd optimizer") {
    ClassifierConfig cfg = blob_config(0);
    cfg.optimizer = Optimizer::sgd;
    cfg.learning_rate = 0.5;
    ProbabilisticClassifier model(cfg);
    model.train(examples, {1.0, 1.0}, 1);
    CHECK(blob_accuracy(model, examples) >= 0.99);
  }
}

TEST_CASE("training is bit-deterministic given seeds") {
  std::mt19937_64 rng(9);
  auto examples = two_blobs(20, 1.0, rng);

  ProbabilisticClassifier a(blob_config(4));
  ProbabilisticClassifier b(blob_config(4));
  double la = a.train(examples, {1.0, 1.0}, 33);
  double lb = b.train(examples, {1.0, 1.0}, 33);
  CHECK(la == lb);
  CHECK(a.parameters() == b.parameters());

  ProbabilisticClassifier c(blob_config(4));
  c.train(examples, {1.0, 1.0}, 34);  // different shuffle stream
  CHECK(a.parameters() != c.parameters());
}

TEST_CASE("warm start continues, reinitialize forgets") {
  std::mt19937_64 rng(14);
  auto examples = two_blobs(20, 1.5, rng);

  ProbabilisticClassifier model(blob_config(0));
  model.train(examples, {1.0, 1.0}, 1);
  auto after_first = model.parameters();
  model.train(examples, {1.0, 1.0}, 2);
  CHECK(model.parameters() != after_first);  // kept moving from the warm state

  ProbabilisticClassifier fresh(blob_config(0));
  model.reinitialize(7);  // same seed as construction
  CHECK(model.parameters() == fresh.parameters());
  CHECK(!model.trained());
}

TEST_CASE("probabilities, certainty and entropy are coherent") {
  std::mt19937_64 rng(15);
  auto examples = two_blobs(30, 2.0, rng);
  ProbabilisticClassifier model(blob_config(0));
  model.train(examples, {1.0, 1.0}, 1);

  auto p = model.predict_proba({2.0, 0.0});
  REQUIRE(p.size() == 2);
  CHECK(p[0] + p[1] == doctest::Approx(1.0));
  CHECK(model.certainty({2.0, 0.0}) == doctest::Approx(std::max(p[0], p[1])));

  double h = model.entropy({2.0, 0.0});
  double expect = 0.0;
  for (double q : p)
    if (q > 0.0) expect -= q * std::log(q);
  CHECK(h == doctest::Approx(expect));

  // A deep point is more certain, lower entropy, than a boundary point.
  CHECK(model.certainty({4.0, 0.0}) > model.certainty({0.0, 0.0}));
  CHECK(model.entropy({4.0, 0.0}) < model.entropy({0.0, 0.0}));
}

TEST_CASE("class weights shift the learned decision boundary") {
  // Imbalanced blob sizes; inverse-frequency weights should pull the
  // boundary toward the majority class relative to unweighted training.
  std::mt19937_64 rng(16);
  std::vector<TrainExample> examples;
  std::normal_distribution<double> gauss(0.0, 0.6);
  for (int i = 0; i < 60; ++i) {
    TrainExample ex;
    ex.feature = {gauss(rng) - 0.6, gauss(rng)};
    ex.target = one_hot(0, 2);
    examples.push_back(std::move(ex));
  }
  for (int i = 0; i < 8; ++i) {
    TrainExample ex;
    ex.feature = {gauss(rng) + 0.6, gauss(rng)};
    ex.target = one_hot(1, 2);
    examples.push_back(std::move(ex));
  }

  ProbabilisticClassifier flat(blob_config(0));
  flat.train(examples, {1.0, 1.0}, 3);
  ProbabilisticClassifier weighted(blob_config(0));
  weighted.train(examples, inverse_frequency_weights({60, 8}), 3);

  // At the midpoint the weighted model must favor the minority class more.
  CHECK(weighted.predict_proba({0.0, 0.0})[1] >
        flat.predict_proba({0.0, 0.0})[1]);
}

TEST_CASE("checkpoint round-trips parameters and config exactly") {
  std::mt19937_64 rng(17);
  auto examples = two_blobs(15, 1.0, rng);
  ClassifierConfig cfg = blob_config(6);
  cfg.optimizer = Optimizer::sgd;
  ProbabilisticClassifier model(cfg);
  model.train(examples, {1.3, 0.7}, 5);

  std::stringstream buffer;
  model.save_checkpoint(buffer);
  ProbabilisticClassifier loaded = ProbabilisticClassifier::load_checkpoint(buffer);

  CHECK(loaded.parameters() == model.parameters());  // hexfloat: bit exact
  CHECK(loaded.trained());
  CHECK(loaded.config().input_dim == cfg.input_dim);
  CHECK(loaded.config().hidden_units == cfg.hidden_units);
  CHECK(loaded.config().optimizer == cfg.optimizer);
  CHECK(loaded.config().learning_rate == cfg.learning_rate);
  CHECK(loaded.config().epochs == cfg.epochs);
  CHECK(loaded.predict_proba({0.5, -0.5}) ==
        model.predict_proba({0.5, -0.5}));
}

TEST_CASE("checkpoint loading rejects malformed input") {
  std::stringstream empty;
  CHECK_THROWS_AS(ProbabilisticClassifier::load_checkpoint(empty),
                  std::runtime_error);
  std::stringstream bad("not-a-checkpoint 1 2 3\n");
  CHECK_THROWS_AS(ProbabilisticClassifier::load_checkpoint(bad),
                  std::runtime_error);
}

TEST_CASE("input validation") {
  ClassifierConfig cfg;
  cfg.input_dim = 0;
  CHECK_THROWS_AS(ProbabilisticClassifier{cfg}, std::invalid_argument);

  ProbabilisticClassifier model(blob_config(0));
  // prediction before any training is a usage error, not a shape error
  CHECK_THROWS_WITH_AS(model.predict_proba({1.0}), "classifier not trained",
                       std::logic_error);
  CHECK_THROWS_AS(model.train({}, {1.0, 1.0}, 1), std::invalid_argument);

  std::vector<TrainExample> bad_target{{{0.1, 0.2}, {0.5}}};
  CHECK_THROWS_AS(model.train(bad_target, {1.0, 1.0}, 1),
                  std::invalid_argument);

  std::vector<TrainExample> ok{{{0.1, 0.2}, {1.0, 0.0}}};
  CHECK_THROWS_AS(model.train(ok, {1.0}, 1), std::invalid_argument);

  model.train(ok, {1.0, 1.0}, 1);
  CHECK_THROWS_WITH_AS(model.predict_proba({1.0}),
                       "inconsistent feature length", std::invalid_argument);
}
