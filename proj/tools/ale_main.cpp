#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ale/config_file.hpp"
#include "ale/dataset.hpp"
#include "ale/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunArgs {
  std::string config_path;
  std::string strategy;
  std::string out_dir;
  long long seed = -1;
  bool cold_start = false;
  bool dump_augmented = false;
};

struct SweepArgs {
  std::string config_path;
  std::string gammas = "0,0.3,0.7,1.0";
  int seeds = 5;
  std::string out_dir;
};

struct CompareArgs {
  std::string config_path;
  std::string strategies = "sa,random";
  int seeds = 10;
  std::string out_dir;
};

struct GenArgs {
  std::string out_dir;
  long long n = 600;
  long long seed = 0;
  int image_side = 32;
  int modes = 6;
  double mode_falloff = 2.5;
  double mode_offset = 0.06;
  double separation = 0.3;
  double noise = 0.04;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_final(const ale::LearningCurve& curve) {
  if (curve.rounds.empty()) {
    std::cout << "no rounds completed\n";
    return;
  }
  const auto& last = curve.rounds.back();
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "rounds: " << curve.rounds.size() << " (termination: "
            << curve.termination << ")\n";
  std::cout << "final labeled fraction: " << last.query_ratio << " ("
            << last.n_labeled << " samples)\n";
  std::cout << "final test  acc=" << last.test.acc << " auc=" << last.test.auc
            << " ap=" << last.test.ap << " se=" << last.test.se
            << " sp=" << last.test.sp << "\n";
  std::cout << "final val   acc=" << last.val.acc << " auc=" << last.val.auc
            << "\n";
}

int do_run(const RunArgs& args) {
  ale::ExperimentConfig cfg;
  try {
    cfg = ale::load_experiment_config(args.config_path);
    if (!args.strategy.empty()) cfg.strategy = ale::parse_strategy(args.strategy);
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.cold_start) cfg.warm_start = false;
    if (args.dump_augmented) cfg.dump_augmented = true;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    ale::LearningCurve curve = ale::run_experiment(cfg);
    print_final(curve);
    if (!cfg.output_dir.empty())
      std::cout << "wrote " << cfg.output_dir << "/curve.csv and selection_log.csv\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

void print_summary(const ale::CompareResult& result) {
  std::cout << std::fixed << std::setprecision(4);
  for (const auto& sr : result.strategies) {
    double mean = 0.0;
    int n = 0;
    for (const auto& curve : sr.curves) {
      if (curve.rounds.empty()) continue;
      mean += curve.rounds.back().test.acc;
      ++n;
    }
    if (n > 0) mean /= n;
    std::cout << std::left << std::setw(14) << sr.label
              << " final test acc (mean over " << n << " runs): " << mean << "\n";
  }
}

int do_sweep(const SweepArgs& args) {
  ale::ExperimentConfig base;
  std::vector<double> gammas;
  try {
    base = ale::load_experiment_config(args.config_path);
    for (const auto& tok : split_csv(args.gammas)) {
      double g = std::stod(tok);
      if (g < 0.0 || g > 1.0) throw std::runtime_error("gamma outside [0,1]");
      gammas.push_back(g);
    }
    if (gammas.empty()) throw std::runtime_error("no gammas given");
    if (args.seeds < 1) throw std::runtime_error("bad seed count");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    ale::CompareResult result = ale::gamma_sweep(base, gammas, args.seeds);
    print_summary(result);
    if (!args.out_dir.empty()) {
      std::filesystem::create_directories(args.out_dir);
      std::string path = (std::filesystem::path(args.out_dir) / "summary.csv").string();
      ale::write_summary_csv(result, path);
      std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int do_compare(const CompareArgs& args) {
  std::vector<ale::ExperimentConfig> configs;
  try {
    ale::ExperimentConfig base = ale::load_experiment_config(args.config_path);
    for (const auto& name : split_csv(args.strategies)) {
      ale::ExperimentConfig c = base;
      c.strategy = ale::parse_strategy(name);
      configs.push_back(c);
    }
    if (configs.empty()) throw std::runtime_error("no strategies given");
    if (args.seeds < 1) throw std::runtime_error("bad seed count");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    ale::CompareResult result = ale::compare_strategies(configs, args.seeds);
    print_summary(result);
    if (!args.out_dir.empty()) {
      std::filesystem::create_directories(args.out_dir);
      std::string path = (std::filesystem::path(args.out_dir) / "summary.csv").string();
      ale::write_summary_csv(result, path);
      std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "compare failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int do_gen(const GenArgs& args) {
  ale::SyntheticSpec spec;
  try {
    spec.n_samples = args.n;
    spec.image_side = args.image_side;
    spec.modes = args.modes;
    spec.mode_falloff = args.mode_falloff;
    spec.mode_offset = args.mode_offset;
    spec.class_separation = args.separation;
    spec.noise_sigma = args.noise;
    spec.seed = static_cast<std::uint64_t>(args.seed);
    if (spec.n_samples < 10) throw std::runtime_error("need at least 10 samples");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    ale::DatasetBundle bundle = ale::generate_synthetic(spec);
    ale::write_dataset(bundle, args.out_dir);
    std::cout << "wrote " << bundle.samples.size() << " images to " << args.out_dir
              << " (pool " << bundle.pool_ids.size() << ", val "
              << bundle.val.size() << ", test " << bundle.test.size() << ")\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active-learning experiment harness"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run one active-learning experiment");
  run_cmd->add_option("--config", run_args.config_path, "experiment config file")
      ->required();
  run_cmd->add_option("--strategy", run_args.strategy,
                      "override strategy (sa|sa_as|random|entropy|sa_mixup)");
  run_cmd->add_option("--seed", run_args.seed, "override experiment seed");
  run_cmd->add_option("--out", run_args.out_dir, "output directory for CSV logs");
  run_cmd->add_flag("--cold-start", run_args.cold_start,
                    "reinitialize the classifier every round");
  run_cmd->add_flag("--dump-augmented", run_args.dump_augmented,
                    "write synthesized training images under the output directory");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep-gamma",
                                       "sweep the informative/representative split");
  sweep_cmd->add_option("--config", sweep_args.config_path, "experiment config file")
      ->required();
  sweep_cmd->add_option("--gammas", sweep_args.gammas, "comma-separated gamma values");
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "replicates per gamma");
  sweep_cmd->add_option("--out", sweep_args.out_dir, "directory for summary.csv");

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "compare selection strategies");
  compare_cmd->add_option("--config", compare_args.config_path, "experiment config file")
      ->required();
  compare_cmd->add_option("--strategies", compare_args.strategies,
                          "comma-separated strategy names");
  compare_cmd->add_option("--seeds", compare_args.seeds, "replicates per strategy");
  compare_cmd->add_option("--out", compare_args.out_dir, "directory for summary.csv");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a synthetic dataset to disk");
  gen_cmd->add_option("--out", gen_args.out_dir, "output directory")->required();
  gen_cmd->add_option("--n", gen_args.n, "total sample count");
  gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
  gen_cmd->add_option("--image-side", gen_args.image_side, "square image side");
  gen_cmd->add_option("--modes", gen_args.modes, "texture mode count");
  gen_cmd->add_option("--mode-falloff", gen_args.mode_falloff,
                      "relative frequency decay across modes");
  gen_cmd->add_option("--mode-offset", gen_args.mode_offset,
                      "outermost modes' luminance offset");
  gen_cmd->add_option("--separation", gen_args.separation, "class separation");
  gen_cmd->add_option("--noise", gen_args.noise, "pixel noise sigma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (run_cmd->parsed()) return do_run(run_args);
  if (sweep_cmd->parsed()) return do_sweep(sweep_args);
  if (compare_cmd->parsed()) return do_compare(compare_args);
  if (gen_cmd->parsed()) return do_gen(gen_args);
  return kExitConfig;
}
