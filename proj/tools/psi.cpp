#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psips/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed-confidence Pareto set identification harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  std::string config_path;
  std::string instance, out, calibration, stopping;
  std::vector<std::string> algos;
  std::vector<double> deltas;
  int runs = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double alpha = -1.0, xi = -1.0;
  long long max_rounds = -1;
  std::string noc_features;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--instance", instance, "builtin name (covboost|rotation|noc) or json path");
  run->add_option("--algo", algos, "psips|uniform|oracle|ape (repeatable)");
  run->add_option("--delta", deltas, "confidence levels (repeatable)");
  run->add_option("--runs", runs, "trials per (algo, delta)");
  run->add_option("--seed", seed, "base seed")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--calibration", calibration, "heuristic|lemma2");
  run->add_option("--stopping", stopping, "ps|glr (uniform sampler)");
  run->add_option("--alpha", alpha, "forced-exploration rate");
  run->add_option("--xi", xi, "regularization (structured)");
  run->add_option("--max-rounds", max_rounds, "safety cap on pulls");
  run->add_option("--out", out, "records CSV path");
  run->add_option("--noc-features", noc_features, "path to the 259-design feature CSV");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Re-run one of the reported experiments");
  std::string rep_name, rep_out = "out";
  double rep_scale = 1.0;
  bool rep_check = false;
  std::string rep_noc_features;
  rep->add_option("name", rep_name,
                  "covboost|correlation|random-gaussian|random-bernoulli|noc|rejections|"
                  "posterior-error")
      ->required();
  rep->add_option("--scale", rep_scale, "run-count scale in (0,1]");
  rep->add_option("--out-dir", rep_out, "output directory");
  rep->add_flag("--check", rep_check, "verify reproduction thresholds (exit 3 on failure)");
  rep->add_option("--noc-features", rep_noc_features, "path to the 259-design feature CSV");

  // instance gen
  auto* inst_cmd = app.add_subcommand("instance", "Instance file utilities");
  auto* gen = inst_cmd->add_subcommand("gen", "Generate an instance JSON file");
  std::string gen_spec, gen_out = "instance.json";
  int gen_K = 5, gen_d = 2;
  std::uint64_t gen_seed = 0;
  double gen_cap = -1.0;
  gen->add_option("--spec", gen_spec, "rotation|gaussian_cube|bernoulli_box")->required();
  gen->add_option("--K", gen_K, "arm count");
  gen->add_option("--d", gen_d, "objective dimension");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--cap", gen_cap, "complexity cap on H(mu)");
  gen->add_option("--out", gen_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      psips::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = psips::ExperimentConfig::from_json_file(config_path);
      if (!instance.empty()) cfg.instance_source = instance;
      if (!algos.empty()) cfg.algos = algos;
      if (!deltas.empty()) cfg.deltas = deltas;
      if (runs > 0) cfg.runs = runs;
      if (seed_set) cfg.seed = seed;
      if (!calibration.empty())
        cfg.calibration = calibration == "lemma2" ? psips::CalibrationKind::lemma2
                                                  : psips::CalibrationKind::heuristic;
      if (!stopping.empty())
        cfg.stopping =
            stopping == "glr" ? psips::StoppingKind::glr : psips::StoppingKind::ps;
      if (alpha > 0.0) cfg.alpha = alpha;
      if (xi > 0.0) cfg.xi = xi;
      if (max_rounds > 0) cfg.max_rounds = max_rounds;
      if (!out.empty()) cfg.out = out;
      if (!noc_features.empty()) cfg.noc_features = noc_features;
      const auto res = psips::run_experiment(cfg);
      std::printf("wrote %s and %s (%zu trials, run_id %s)\n", res.records_csv_path.c_str(),
                  res.summary_json_path.c_str(), res.records.size(), res.run_id.c_str());
      return 0;
    }
    if (rep->parsed()) {
      std::optional<std::string> noc;
      if (!rep_noc_features.empty()) noc = rep_noc_features;
      try {
        const auto files = psips::reproduce(rep_name, rep_scale, rep_out, rep_check, noc);
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
      } catch (const psips::CheckFailure& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 3;
      }
      return 0;
    }
    if (gen->parsed()) {
      std::optional<double> cap;
      if (gen_cap > 0.0) cap = gen_cap;
      psips::gen_instance_file(gen_spec, gen_K, gen_d, cap, gen_seed, gen_out);
      std::printf("wrote %s\n", gen_out.c_str());
      return 0;
    }
    std::fprintf(stderr, "no subcommand\n");
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
