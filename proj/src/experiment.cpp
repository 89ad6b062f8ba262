#include "ale/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ale/augmentation.hpp"
#include "ale/png_io.hpp"
#include "ale/seeding.hpp"

namespace ale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-metric fallback to NaN; the metric functions themselves stay strict.
EvalResult safe_eval(const std::vector<double>& scores,
                     const std::vector<int>& labels) {
  EvalResult r{kNaN, kNaN, kNaN, kNaN, kNaN};
  auto guard = [](auto&& fn) {
    try {
      return fn();
    } catch (const std::invalid_argument&) {
      return kNaN;
    }
  };
  Confusion c = confusion_at(scores, labels, 0.5);
  r.acc = guard([&] { return accuracy(c); });
  r.se = guard([&] { return sensitivity(c); });
  r.sp = guard([&] { return specificity(c); });
  r.auc = guard([&] { return auc_roc(scores, labels); });
  r.ap = guard([&] { return average_precision(scores, labels); });
  return r;
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

DatasetBundle build_bundle(const DatasetSource& source) {
  if (source.synthetic) return generate_synthetic(source.spec);
  return load_manifest_dataset(source.pool_manifest, source.val_manifest,
                               source.test_manifest);
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::sa: return "sa";
    case Strategy::sa_as: return "sa_as";
    case Strategy::random_sampling: return "random";
    case Strategy::entropy: return "entropy";
    case Strategy::sa_mixup: return "sa_mixup";
  }
  throw std::logic_error("unknown strategy");
}

Strategy parse_strategy(const std::string& name) {
  if (name == "sa") return Strategy::sa;
  if (name == "sa_as") return Strategy::sa_as;
  if (name == "random") return Strategy::random_sampling;
  if (name == "entropy") return Strategy::entropy;
  if (name == "sa_mixup") return Strategy::sa_mixup;
  throw std::invalid_argument("unknown strategy: " + name);
}

bool same_dataset(const DatasetSource& a, const DatasetSource& b) {
  if (a.synthetic != b.synthetic) return false;
  if (a.synthetic) {
    const auto& x = a.spec;
    const auto& y = b.spec;
    return x.n_samples == y.n_samples && x.image_side == y.image_side &&
           x.modes == y.modes && x.mode_falloff == y.mode_falloff &&
           x.mode_offset == y.mode_offset &&
           x.class_separation == y.class_separation &&
           x.noise_sigma == y.noise_sigma && x.seed == y.seed;
  }
  return a.pool_manifest == b.pool_manifest && a.val_manifest == b.val_manifest &&
         a.test_manifest == b.test_manifest;
}

FeatureCache::FeatureCache(const DatasetBundle& bundle, const FeatureConfig& config)
    : bundle_(&bundle), config_(config) {
  for (const auto& s : bundle.samples) {
    Image norm = config_.gray_world ? gray_world_normalize(s.image) : s.image;
    classifier_features_.emplace(
        s.id, to_feature_vector(norm, config_.classifier_side));
    normalized_.emplace(s.id, std::move(norm));
  }
}

const PCABasis& FeatureCache::basis() const {
  if (!basis_) {
    std::vector<std::vector<double>> vectors;
    vectors.reserve(bundle_->pool_ids.size());
    for (SampleId id : bundle_->pool_ids)  // ids ascending: deterministic fit
      vectors.push_back(to_feature_vector(normalized_.at(id), config_.pca_side));
    PCAOptions opts;
    opts.max_iterations = 2000;  // statistical use; exactness is not required here
    basis_ = fit_pca(vectors, config_.pca_dims, opts);
  }
  return *basis_;
}

const FeatureMap& FeatureCache::diversity_features() const {
  if (diversity_features_.empty()) {
    const PCABasis& b = basis();
    for (SampleId id : bundle_->pool_ids)
      diversity_features_.emplace(
          id, project(b, to_feature_vector(normalized_.at(id), config_.pca_side)));
  }
  return diversity_features_;
}

StopDecision stop_decision(const std::vector<int>& prev_correct,
                           const std::vector<int>& curr_correct, double stop_p) {
  StopDecision d;
  d.p_value = mcnemar_p(prev_correct, curr_correct);
  d.stop = d.p_value > stop_p;
  return d;
}

LearningCurve run_experiment(const ExperimentConfig& config) {
  DatasetBundle bundle = build_bundle(config.dataset);
  return run_experiment(config, bundle);
}

LearningCurve run_experiment(const ExperimentConfig& config,
                             const DatasetBundle& bundle) {
  FeatureCache cache(bundle, config.features);
  return run_experiment(config, bundle, cache);
}

LearningCurve run_experiment(const ExperimentConfig& config,
                             const DatasetBundle& bundle,
                             const FeatureCache& cache) {
  if (config.max_rounds < 0) throw std::invalid_argument("bad round count");
  if (!(config.stop_p >= 0.0) || !(config.stop_p <= 1.0))
    throw std::invalid_argument("invalid fraction");

  SamplePool pool = bundle.make_pool();
  Oracle oracle = bundle.make_oracle();
  pool.init_random(config.init_fraction, config.seed, oracle);

  ClassifierConfig ccfg = config.classifier;
  ccfg.input_dim = cache.feature_dim();
  ccfg.num_classes = bundle.num_classes;
  ccfg.seed = config.seed;
  ProbabilisticClassifier model(ccfg);

  const double total = static_cast<double>(pool.total_available());
  LearningCurve curve;
  curve.termination = "max_rounds";
  std::vector<int> prev_correct;

  auto scores_for = [&](const std::vector<std::pair<SampleId, int>>& split,
                        std::vector<double>& scores, std::vector<int>& labels) {
    scores.clear();
    labels.clear();
    for (const auto& [id, label] : split) {
      scores.push_back(model.predict_proba(cache.classifier_features().at(id))[1]);
      labels.push_back(label);
    }
  };

  for (int r = 0; r <= config.max_rounds; ++r) {
    if (r > 0) {
      SelectionConfig sel = config.selection;
      sel.seed = derive_seed(config.seed, streams::round_selection, r);
      std::vector<SampleId> chosen;
      switch (config.strategy) {
        case Strategy::sa:
        case Strategy::sa_as:
        case Strategy::sa_mixup: {
          SelectionRound sr = select_round(pool, model, cache.classifier_features(),
                                           cache.diversity_features(), sel);
          for (SampleId id : sr.informative)
            curve.selections.push_back(
                {r, strategy_name(config.strategy), id,
                 model.certainty(cache.classifier_features().at(id)), "certainty"});
          for (SampleId id : sr.representative)
            curve.selections.push_back({r, strategy_name(config.strategy), id,
                                        static_cast<double>(sr.buckets.at(id)),
                                        "representative"});
          chosen = sr.selected;
          break;
        }
        case Strategy::random_sampling: {
          long long n = budget(pool.total_available(), sel).total();
          chosen = select_random(pool, n, sel.seed);
          for (SampleId id : chosen)
            curve.selections.push_back(
                {r, strategy_name(config.strategy), id, 0.0, "random"});
          break;
        }
        case Strategy::entropy: {
          long long n = budget(pool.total_available(), sel).total();
          chosen = select_entropy(pool, model, cache.classifier_features(), n);
          for (SampleId id : chosen)
            curve.selections.push_back(
                {r, strategy_name(config.strategy), id,
                 model.entropy(cache.classifier_features().at(id)), "entropy"});
          break;
        }
      }
      if (chosen.empty()) {
        curve.termination = "exhausted";
        break;
      }
      pool.annotate(chosen, oracle);
    }

    // assemble the round's training set: labeled originals plus any
    // strategy-specific synthesized samples
    std::vector<TrainExample> examples;
    examples.reserve(pool.labeled().size() * 2);
    for (const auto& [id, label] : pool.labeled())
      examples.push_back({cache.classifier_features().at(id),
                          one_hot(label, pool.num_classes())});

    std::vector<AugmentedSample> synthesized;
    if (config.strategy == Strategy::sa_as)
      synthesized = build_aggregated_set(
          pool, cache.normalized(),
          derive_seed(config.seed, streams::round_augment, r));
    else if (config.strategy == Strategy::sa_mixup)
      synthesized = build_mixup_set(
          pool, cache.normalized(), config.mixup_alpha,
          derive_seed(config.seed, streams::round_augment, r));
    for (const auto& aug : synthesized)
      examples.push_back(
          {to_feature_vector(aug.image, config.features.classifier_side),
           aug.target});

    if (config.dump_augmented && !synthesized.empty() &&
        !config.output_dir.empty()) {
      namespace fs = std::filesystem;
      fs::path dir = fs::path(config.output_dir) / "augmented" /
                     ("round_" + std::to_string(r));
      fs::create_directories(dir);
      for (const auto& aug : synthesized) {
        std::ostringstream name;
        name << "anchor_" << std::setfill('0') << std::setw(6) << aug.anchor
             << ".png";
        write_png((dir / name.str()).string(), aug.image);
      }
    }

    std::vector<double> weights = inverse_frequency_weights(pool.class_counts());
    if (!config.warm_start)
      model.reinitialize(derive_seed(config.seed, streams::cold_start, r));
    double loss =
        model.train(examples, weights, derive_seed(config.seed, streams::round_train, r));

    RoundRecord row;
    row.round = r;
    row.n_labeled = static_cast<long long>(pool.labeled().size());
    row.query_ratio = static_cast<double>(row.n_labeled) / total;
    row.train_loss = loss;
    row.stop_p_value = kNaN;

    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<std::pair<SampleId, int>> train_split(pool.labeled().begin(),
                                                      pool.labeled().end());
    scores_for(train_split, scores, labels);
    row.train = safe_eval(scores, labels);
    scores_for(bundle.val, scores, labels);
    row.val = safe_eval(scores, labels);
    std::vector<int> curr_correct(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      curr_correct[i] = ((scores[i] >= 0.5) ? 1 : 0) == labels[i] ? 1 : 0;
    scores_for(bundle.test, scores, labels);
    row.test = safe_eval(scores, labels);

    bool stop_now = false;
    if (r >= 1) {
      StopDecision d = stop_decision(prev_correct, curr_correct, config.stop_p);
      row.stop_p_value = d.p_value;
      stop_now = config.stop_rule && d.stop;
    }
    curve.rounds.push_back(row);
    prev_correct = curr_correct;
    if (stop_now) {
      curve.termination = "stop_rule";
      break;
    }
  }

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    write_curve_csv(curve,
                    (std::filesystem::path(config.output_dir) / "curve.csv").string());
    write_selection_log_csv(
        curve,
        (std::filesystem::path(config.output_dir) / "selection_log.csv").string());
  }
  return curve;
}

CompareResult compare_strategies(const std::vector<ExperimentConfig>& configs,
                                 int n_seeds) {
  if (configs.empty()) throw std::invalid_argument("no configurations");
  if (n_seeds < 1) throw std::invalid_argument("bad seed count");
  for (const auto& c : configs)
    if (!same_dataset(c.dataset, configs[0].dataset))
      throw std::invalid_argument("mismatched dataset specs");

  DatasetBundle bundle = build_bundle(configs[0].dataset);

  CompareResult result;
  result.strategies.reserve(configs.size());
  for (const auto& base : configs) {
    FeatureCache cache(bundle, base.features);
    StrategyResult sr;
    sr.label = strategy_name(base.strategy);
    sr.config = base;
    for (int i = 0; i < n_seeds; ++i) {
      ExperimentConfig run = base;
      run.output_dir.clear();
      run.seed = derive_seed(base.seed, streams::compare_run, static_cast<std::uint64_t>(i));
      sr.curves.push_back(run_experiment(run, bundle, cache));
    }
    result.strategies.push_back(std::move(sr));
  }
  return result;
}

CompareResult gamma_sweep(const ExperimentConfig& base,
                          const std::vector<double>& gammas, int n_seeds) {
  if (gammas.empty()) throw std::invalid_argument("no gammas");
  std::vector<ExperimentConfig> configs;
  configs.reserve(gammas.size() + 1);
  for (double g : gammas) {
    ExperimentConfig c = base;
    c.strategy = Strategy::sa;
    c.selection.gamma = g;
    configs.push_back(c);
  }
  ExperimentConfig baseline = base;
  baseline.strategy = Strategy::random_sampling;
  configs.push_back(baseline);

  CompareResult result = compare_strategies(configs, n_seeds);
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    std::ostringstream label;
    label << "gamma=" << std::fixed << std::setprecision(2) << gammas[i];
    result.strategies[i].label = label.str();
  }
  result.strategies.back().label = "random";
  return result;
}

void write_curve_csv(const LearningCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "round,query_ratio,n_labeled,split,acc,auc,ap,se,sp\n";
  auto emit = [&](const RoundRecord& r, const char* split, const EvalResult& e) {
    out << r.round << "," << format_value(r.query_ratio) << "," << r.n_labeled
        << "," << split << "," << format_value(e.acc) << ","
        << format_value(e.auc) << "," << format_value(e.ap) << ","
        << format_value(e.se) << "," << format_value(e.sp) << "\n";
  };
  for (const auto& r : curve.rounds) {
    emit(r, "train", r.train);
    emit(r, "val", r.val);
    emit(r, "test", r.test);
  }
}

void write_selection_log_csv(const LearningCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "round,strategy,id,score,criterion\n";
  for (const auto& s : curve.selections)
    out << s.round << "," << s.strategy << "," << s.id << ","
        << format_value(s.score) << "," << s.criterion << "\n";
}

void write_summary_csv(const CompareResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "kind,label,gamma,round,query_ratio,split,metric,mean,sd,n\n";

  struct Key {
    int round;
    const char* split;
    const char* metric;
  };
  static constexpr const char* kSplits[] = {"train", "val", "test"};
  static constexpr const char* kMetrics[] = {"acc", "auc", "ap", "se", "sp"};

  auto metric_of = [](const EvalResult& e, const char* name) {
    std::string m(name);
    if (m == "acc") return e.acc;
    if (m == "auc") return e.auc;
    if (m == "ap") return e.ap;
    if (m == "se") return e.se;
    return e.sp;
  };
  auto split_of = [](const RoundRecord& r, const char* split) -> const EvalResult& {
    std::string s(split);
    if (s == "train") return r.train;
    if (s == "val") return r.val;
    return r.test;
  };

  auto values_at = [&](const StrategyResult& sr, int round, const char* split,
                       const char* metric, double* ratio) {
    std::vector<double> vals;
    for (const auto& curve : sr.curves) {
      if (round < static_cast<int>(curve.rounds.size())) {
        const RoundRecord& row = curve.rounds[round];
        double v = metric_of(split_of(row, split), metric);
        if (!std::isnan(v)) vals.push_back(v);
        *ratio = row.query_ratio;
      }
    }
    return vals;
  };
  auto mean_sd = [](const std::vector<double>& vals, double* mean, double* sd) {
    *mean = kNaN;
    *sd = kNaN;
    if (vals.empty()) return;
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(vals.size());
    *mean = m;
    if (vals.size() > 1) {
      double acc = 0.0;
      for (double v : vals) acc += (v - m) * (v - m);
      *sd = std::sqrt(acc / static_cast<double>(vals.size() - 1));
    } else {
      *sd = 0.0;
    }
  };

  int max_rounds = 0;
  for (const auto& sr : result.strategies)
    for (const auto& c : sr.curves)
      max_rounds = std::max(max_rounds, static_cast<int>(c.rounds.size()));

  for (const auto& sr : result.strategies) {
    for (int round = 0; round < max_rounds; ++round) {
      for (const char* split : kSplits) {
        for (const char* metric : kMetrics) {
          double ratio = kNaN, mean = kNaN, sd = kNaN;
          auto vals = values_at(sr, round, split, metric, &ratio);
          if (vals.empty()) continue;
          mean_sd(vals, &mean, &sd);
          out << "level," << sr.label << ","
              << format_value(sr.config.selection.gamma) << "," << round << ","
              << format_value(ratio) << "," << split << "," << metric << ","
              << format_value(mean) << "," << format_value(sd) << ","
              << vals.size() << "\n";
        }
      }
    }
  }

  // paired per-seed differences against the first configuration
  const auto& ref = result.strategies.front();
  for (std::size_t s = 1; s < result.strategies.size(); ++s) {
    const auto& sr = result.strategies[s];
    std::size_t n_pairs = std::min(sr.curves.size(), ref.curves.size());
    for (int round = 0; round < max_rounds; ++round) {
      for (const char* split : kSplits) {
        for (const char* metric : kMetrics) {
          std::vector<double> diffs;
          double ratio = kNaN;
          for (std::size_t i = 0; i < n_pairs; ++i) {
            const auto& a = sr.curves[i].rounds;
            const auto& b = ref.curves[i].rounds;
            if (round >= static_cast<int>(a.size()) ||
                round >= static_cast<int>(b.size()))
              continue;
            double va = metric_of(split_of(a[round], split), metric);
            double vb = metric_of(split_of(b[round], split), metric);
            if (std::isnan(va) || std::isnan(vb)) continue;
            diffs.push_back(va - vb);
            ratio = a[round].query_ratio;
          }
          if (diffs.empty()) continue;
          double mean = kNaN, sd = kNaN;
          mean_sd(diffs, &mean, &sd);
          out << "diff_vs_" << ref.label << "," << sr.label << ","
              << format_value(sr.config.selection.gamma) << "," << round << ","
              << format_value(ratio) << "," << split << "," << metric << ","
              << format_value(mean) << "," << format_value(sd) << ","
              << diffs.size() << "\n";
        }
      }
    }
  }
}

}  // namespace ale
