#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psips/algorithms.hpp"
#include "psips/instance.hpp"

namespace psips {

struct ExperimentConfig {
  std::string instance_source = "rotation";  // builtin name or a json file path
  std::optional<std::string> noc_features;
  std::vector<std::string> algos = {"psips"};
  std::vector<double> deltas = {0.1};
  int runs = 100;
  std::uint64_t seed = 42;
  CalibrationKind calibration = CalibrationKind::heuristic;
  double alpha = 0.25;
  double xi = 1.0;
  StoppingKind stopping = StoppingKind::ps;
  long long max_rounds = 10000000;
  std::string out = "results.csv";
  long long horizon = 5000;  // profile-style subcommands

  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_string() const;
  std::string run_signature() const;
};

struct TrialRecord {
  long long trial_index = 0;
  std::string instance;
  RunRecord run;
};

struct ExperimentResult {
  std::string run_id;
  std::vector<TrialRecord> records;  // sorted by trial_index
  std::string records_csv_path;
  std::string summary_json_path;
};

/// Executes runs x algos x deltas trials with per-trial derived seeds and
/// writes the records CSV and the summary JSON next to `config.out`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Resolves a builtin instance name or a json path.
Instance resolve_instance(const ExperimentConfig& config);

/// CSV header of the records file.
std::string records_csv_header();
std::string record_to_csv_row(const TrialRecord& rec, const std::string& run_id,
                              const ExperimentConfig& config);

/// Paper-figure reproduction subcommands. Returns the paths written. When
/// `check` is set, throws CheckFailure if a reproduction threshold fails.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> reproduce(const std::string& name, double scale,
                                   const std::string& out_dir, bool check,
                                   const std::optional<std::string>& noc_features = {});

/// Writes an instance JSON file from a generator spec name.
void gen_instance_file(const std::string& spec, int K, int d,
                       std::optional<double> complexity_cap, std::uint64_t seed,
                       const std::string& path);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double x);

int thread_pool_size();

}  // namespace psips
