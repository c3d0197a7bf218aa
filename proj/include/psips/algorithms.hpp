#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psips/calibration.hpp"
#include "psips/instance.hpp"
#include "psips/oracle.hpp"
#include "psips/pareto.hpp"

namespace psips {

enum class StoppingKind { ps, glr };

/// One Monte Carlo trial.
struct RunRecord {
  std::string algo;
  double delta = 0.0;
  long long tau = 0;  // total pulls at stopping
  bool stopped = false;
  ParetoSet recommended;
  bool correct = false;
  int pareto_size = 0;
  double avg_m_t = 0.0;
  double avg_m_t_delta = 0.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  long long fallback_count = 0;
  std::vector<long long> pull_counts;  // per arm, at stopping
};

struct RunOptions {
  double delta = 0.1;
  CalibrationKind calibration = CalibrationKind::heuristic;
  double alpha = 0.25;
  double xi = 1.0;
  long long max_rounds = 10000000;
  StoppingKind stopping = StoppingKind::ps;  // uniform sampler only
  double zeta_s = 2.0;
};

/// Picks the (M, c, beta) setting for an instance and validates that the
/// requested kind is defined there.
Calibration calibration_for(const Instance& inst, CalibrationKind kind, double xi,
                            double s = 2.0);

RunRecord run_psips(const Instance& inst, const RunOptions& opt, std::uint64_t seed);
RunRecord run_uniform(const Instance& inst, const RunOptions& opt, std::uint64_t seed);
RunRecord run_oracle(const Instance& inst, const RunOptions& opt, std::uint64_t seed,
                     const CharacteristicTime* precomputed = nullptr);
RunRecord run_ape(const Instance& inst, const RunOptions& opt, std::uint64_t seed);

struct ProfileRow {
  long long round = 0;
  long long m_t = 0;
  long long m_t_delta = 0;
  bool error = false;
  double glr = 0.0;  // when requested
};

struct ProfileOptions {
  long long horizon = 1000;
  bool record_glr = false;
};

struct ProfileResult {
  std::vector<ProfileRow> rows;
  Eigen::MatrixXd final_theta_hat;
  std::vector<long long> final_counts;
};

/// PSIPS with the stopping rule disabled; per-round rejection counts and
/// error indicator over a fixed horizon.
ProfileResult run_profile(const Instance& inst, const RunOptions& opt,
                          const ProfileOptions& prof, std::uint64_t seed);

}  // namespace psips
