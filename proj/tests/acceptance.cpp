// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "psips/algorithms.hpp"
#include "psips/harness.hpp"
#include "psips/oracle.hpp"
#include "psips/qp.hpp"
#include "psips/stopping.hpp"
#include "test_util.hpp"

using namespace psips;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void parallel_for(long long n, const std::function<void(long long)>& body) {
  const int pool = std::min<long long>(thread_pool_size(), n);
  if (pool <= 1) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> ws;
  for (int w = 0; w < pool; ++w)
    ws.emplace_back([&] {
      for (;;) {
        const long long i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  for (auto& t : ws) t.join();
}

Instance rotation5() {
  Rng rng(0);
  return gen_random_instance(GenKind::rotation, 5, 2, rng);
}

Instance rotation_rho(double rho) {
  const Instance base = rotation5();
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, rho, rho, 1.0;
  return make_unstructured(base.theta, sigma, NoiseKind::gaussian, "rotation_rho");
}

Instance bai_unit() {
  Eigen::MatrixXd means(2, 1);
  means << 0.0, 1.0;
  return make_unstructured(means, Eigen::MatrixXd::Identity(1, 1), NoiseKind::gaussian,
                           "bai");
}

// ---------------------------------------------------------------- criterion 1
void criterion_covboost_front() {
  const Instance inst = load_covboost();
  const Eigen::MatrixXd means = inst.answer_means();
  const auto start = std::chrono::steady_clock::now();
  const ParetoSet fast = pareto_set(means);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  const ParetoSet brute = pareto_set_naive(means);
  const bool members = fast == ParetoSet{8, 18} && brute == fast &&
                       covboost_labels()[8] == "BNT/BNT m1273" &&
                       covboost_labels()[18] == "ChAd/ChAd m1273";
  std::ostringstream os;
  os << "covboost front {8,18} (both m1273 boosters), " << ms << " ms";
  report(1, members && ms < 1.0, os.str());
}

// ---------------------------------------------------------------- criterion 2
void criterion_covboost_complexity() {
  const Instance inst = load_covboost();
  const int runs = 100;
  std::vector<double> taus(runs, 0.0);
  std::atomic<int> wrong{0};
  parallel_for(runs, [&](long long i) {
    RunOptions opt;
    opt.delta = 0.1;
    const RunRecord rec = run_psips(inst, opt, 42ULL ^ splitmix64(i));
    taus[static_cast<std::size_t>(i)] = static_cast<double>(rec.tau);
    if (!rec.correct) wrong.fetch_add(1);
  });
  double mean = 0.0;
  for (double t : taus) mean += t;
  mean /= runs;
  std::ostringstream os;
  os << "covboost psips delta=0.1 mean tau = " << mean << " over " << runs
     << " runs (target [14300, 26600]), wrong = " << wrong.load();
  report(2, mean >= 14300.0 && mean <= 26600.0, os.str());
}

// ---------------------------------------------------------------- criterion 3
void criterion_delta_correctness() {
  const Instance inst = rotation5();
  const int runs = 500;
  bool all_ok = true;
  std::ostringstream os;
  os << "rotation 500-run error rates:";
  for (const CalibrationKind kind : {CalibrationKind::heuristic, CalibrationKind::lemma2}) {
    for (const double delta : {0.1, 0.01}) {
      std::atomic<int> wrong{0};
      std::atomic<int> nonstopped{0};
      parallel_for(runs, [&](long long i) {
        RunOptions opt;
        opt.delta = delta;
        opt.calibration = kind;
        const RunRecord rec = run_psips(inst, opt, 4242ULL ^ splitmix64(i));
        if (!rec.stopped) nonstopped.fetch_add(1);
        if (rec.stopped && !rec.correct) wrong.fetch_add(1);
      });
      const double err = static_cast<double>(wrong.load()) / runs;
      const bool ok = err <= delta && nonstopped.load() == 0;
      all_ok = all_ok && ok;
      os << ' ' << (kind == CalibrationKind::heuristic ? "heuristic" : "lemma2") << '@'
         << delta << "->" << err;
      std::fprintf(stderr, "criterion 3 cell done: %s delta=%g err=%g\n",
                   kind == CalibrationKind::heuristic ? "heuristic" : "lemma2", delta, err);
    }
  }
  report(3, all_ok, os.str());
}

// ---------------------------------------------------------------- criterion 4
void criterion_correlation() {
  const int runs = 100;
  double psips_tau[3] = {0, 0, 0};
  double ape_tau[3] = {0, 0, 0};
  const double rhos[3] = {-0.9, 0.0, 0.9};
  for (int r = 0; r < 3; ++r) {
    const Instance inst = rotation_rho(rhos[r]);
    std::vector<double> tp(runs), ta(runs);
    parallel_for(runs, [&](long long i) {
      RunOptions opt;
      opt.delta = 0.01;
      tp[static_cast<std::size_t>(i)] =
          static_cast<double>(run_psips(inst, opt, 7ULL ^ splitmix64(i)).tau);
      ta[static_cast<std::size_t>(i)] =
          static_cast<double>(run_ape(inst, opt, 9ULL ^ splitmix64(i)).tau);
    });
    for (int i = 0; i < runs; ++i) {
      psips_tau[r] += tp[i] / runs;
      ape_tau[r] += ta[i] / runs;
    }
  }
  const double ape_min = std::min({ape_tau[0], ape_tau[1], ape_tau[2]});
  const double ape_max = std::max({ape_tau[0], ape_tau[1], ape_tau[2]});
  const bool halved = psips_tau[0] <= 0.5 * psips_tau[1];
  const bool ape_flat = (ape_max - ape_min) / ape_min < 0.10;
  std::ostringstream os;
  os << "psips mean tau rho=-0.9: " << psips_tau[0] << ", rho=0: " << psips_tau[1]
     << " (need factor 2); ape spread " << (ape_max - ape_min) / ape_min << " (need < 0.10)";
  report(4, halved && ape_flat, os.str());
}

// ---------------------------------------------------------------- criterion 5
void criterion_characteristic_time() {
  const Instance inst = bai_unit();
  const auto ct = characteristic_time(inst);
  Eigen::MatrixXd means(2, 1);
  means << 0.0, 1.0;
  const Instance wide =
      make_unstructured(means, 4.0 * Eigen::MatrixXd::Identity(1, 1));
  const auto ct4 = characteristic_time(wide);
  const bool ok = std::abs(ct.t_star - 8.0) <= 0.02 * 8.0 &&
                  std::abs(ct.w_star[0] - 0.5) <= 0.02 &&
                  std::abs(ct.w_star[1] - 0.5) <= 0.02 &&
                  std::abs(ct4.t_star - 4.0 * ct.t_star) <= 0.01 * 4.0 * ct.t_star;
  std::ostringstream os;
  os << "T* = " << ct.t_star << " (target 8 +/- 2%), w* = (" << ct.w_star[0] << ", "
     << ct.w_star[1] << "), T*(4 Sigma) = " << ct4.t_star;
  report(5, ok, os.str());
}

// ---------------------------------------------------------------- criterion 6
void criterion_posterior_contraction() {
  const Instance inst = bai_unit();
  RunOptions opt;
  opt.delta = 0.1;
  ProfileOptions prof;
  prof.horizon = 20000;
  const auto res = run_profile(inst, opt, prof, 99);
  const double n0 = static_cast<double>(res.final_counts[0]);
  const double n1 = static_cast<double>(res.final_counts[1]);
  const double gap = std::abs(res.final_theta_hat(1, 0) - res.final_theta_hat(0, 0));
  const double x = gap / std::sqrt(1.0 / n0 + 1.0 / n1);
  // log of the flat-posterior flip probability through the Mills ratio
  const double log_tail =
      std::log(mills_ratio(x)) - 0.5 * x * x - 0.5 * std::log(2.0 * M_PI);
  const double rate = -log_tail / static_cast<double>(prof.horizon + 2);
  const bool ok = std::abs(rate - 0.125) <= 0.2 * 0.125;
  std::ostringstream os;
  os << "-(1/t) log posterior alt mass = " << rate << " (target 1/8 +/- 20%)";
  report(6, ok, os.str());
}

// ---------------------------------------------------------------- criterion 7
bool prop_mills() {
  double prev = mills_ratio(-8.0);
  for (double x = -7.9; x <= 20.0; x += 0.05) {
    const double cur = mills_ratio(x);
    if (!(cur < prev)) return false;
    prev = cur;
  }
  for (double x = 0.0; x <= 20.0; x += 0.1)
    if (!(mills_ratio(x) >= 2.0 / (x + std::sqrt(x * x + 4.0)))) return false;
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const int p = 2 + static_cast<int>(rng.uniform() * 4);
    double sum = 0.0, logprod = 0.0;
    for (int i = 0; i < p; ++i) {
      const double xi = -2.0 + 8.0 * rng.uniform();
      sum += xi;
      logprod += std::log(mills_ratio(xi));
    }
    if (!(p * std::log(mills_ratio(sum / p)) <= logprod + 1e-10)) return false;
  }
  return true;
}

bool prop_lambert() {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double x = 1.0 + 999.0 * rng.uniform();
    const double w = lambert_wbar(x);
    if (!(std::abs(w - std::log(w) - x) <= 1e-12)) return false;
    if (!(w >= x + std::log(x) - 1e-12)) return false;
    if (!(w <= x + std::log(x) + std::min(0.5, 1.0 / std::sqrt(x)) + 1e-12)) return false;
  }
  return true;
}

bool prop_sherman_morrison() {
  Rng rng(3);
  Instance lin;
  lin.K = 6;
  lin.h = 4;
  lin.d = 2;
  lin.A = testutil::random_matrix(6, 4, rng);
  lin.Z = lin.A;
  lin.theta = testutil::random_matrix(4, 2, rng);
  lin.sigma = testutil::random_spd(2, rng, 0.3);
  lin.validate();
  auto est = EstimatorState::init(lin, EstimatorMode::structured, rng, 1.0);
  for (int i = 0; i < 50; ++i) {
    const int arm = static_cast<int>(rng.uniform() * 6);
    est.update(arm, lin.draw_observation(arm, rng));
    if (((est.V_inv() - est.V().inverse()).cwiseAbs().maxCoeff() > 1e-9)) return false;
  }
  return true;
}

bool prop_in_alt() {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform() * 3);
    const int d = 2 + static_cast<int>(rng.uniform() * 2);
    const Eigen::MatrixXd base = testutil::random_matrix(n, d, rng);
    const ParetoSet S = pareto_set_naive(base);
    const Eigen::MatrixXd lam = testutil::random_matrix(n, d, rng);
    if (in_alt_means(lam, S) != (pareto_set_naive(lam) != S)) return false;
  }
  return true;
}

bool prop_piece_count() {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform() * 5);
    const int d = 1 + static_cast<int>(rng.uniform() * 3);
    const ParetoSet S = pareto_set_naive(testutil::random_matrix(n, d, rng));
    const auto p = static_cast<long long>(S.size());
    const long long expected =
        p * (p - 1) + (n - p) * static_cast<long long>(std::llround(std::pow(d, double(p))));
    if (static_cast<long long>(alt_pieces(S, n, d).size()) != expected) return false;
  }
  return true;
}

bool prop_glr_oracle() {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd means = testutil::random_matrix(3, 2, rng);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
    sigma(0, 0) = 0.4 + rng.uniform();
    sigma(1, 1) = 0.4 + rng.uniform();
    const Instance inst = make_unstructured(means, sigma);
    auto est = EstimatorState::init(inst, EstimatorMode::unstructured, rng);
    for (int i = 0; i < 40; ++i) {
      const int arm = static_cast<int>(rng.uniform() * 3);
      est.update(arm, inst.draw_observation(arm, rng));
    }
    const ParetoSet S = recommend(est);
    Eigen::VectorXd w(3);
    for (int i = 0; i < 3; ++i) w[i] = static_cast<double>(est.counts()[i]);
    const double closed = glr_statistic(est, S, ThetaRegion{});
    const double ref = 0.5 * testutil::independent_best_response(est.theta_hat(), S, w, inst);
    if (std::abs(closed - ref) > 1e-3 * (1.0 + std::abs(ref))) return false;
  }
  return true;
}

bool prop_posterior_mass() {
  Rng rng(7);
  int ok = 0;
  for (int t = 0; t < 50; ++t) {
    const int K = 3 + static_cast<int>(rng.uniform() * 2);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
    sigma(0, 0) = 0.4 + 0.5 * rng.uniform();
    sigma(1, 1) = 0.4 + 0.5 * rng.uniform();
    const Instance inst = make_unstructured(testutil::random_matrix(K, 2, rng), sigma);
    auto est = EstimatorState::init(inst, EstimatorMode::unstructured, rng);
    const int extra = 5 + static_cast<int>(rng.uniform() * 40);
    for (int i = 0; i < extra; ++i) {
      const int arm = static_cast<int>(rng.uniform() * K);
      est.update(arm, inst.draw_observation(arm, rng));
    }
    const ParetoSet S = recommend(est);
    const double c = 1.0 + rng.uniform();
    const double glr = glr_statistic(est, S, ThetaRegion{});
    const double p = static_cast<double>(S.size());
    const double alpha_t = 0.5 * (p * (p - 1.0) + (K - p) * std::pow(2.0, p));
    const int n = 20000;
    long long hits = 0;
    Eigen::MatrixXd v(K, 2);
    for (int i = 0; i < n; ++i) {
      est.centered_draw(rng, v);
      hits += in_alt_means(est.theta_hat() + std::sqrt(c) * v, S) ? 1 : 0;
    }
    const double mass = static_cast<double>(hits) / n;
    const double se = std::sqrt(std::max(mass * (1 - mass), 1e-7) / n);
    if (mass <= alpha_t * std::exp(-glr / c) + 4.0 * se) ++ok;
  }
  return ok == 50;
}

bool prop_orthant() {
  std::atomic<int> ok{0};
  parallel_for(100, [&](long long t) {
    Rng rng(100 + static_cast<std::uint64_t>(t));
    const int d = 2 + static_cast<int>(rng.uniform() * 2);
    const Eigen::MatrixXd sigma = testutil::random_spd(d, rng);
    Eigen::VectorXd x(d);
    for (int c = 0; c < d; ++c) x[c] = -1.5 + 3.0 * rng.uniform();
    const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
    const int n = 1000000;
    long long hits = 0;
    Eigen::VectorXd g(d);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) g[c] = rng.normal();
      const Eigen::VectorXd z = L * g;
      bool ge = true;
      for (int c = 0; c < d && ge; ++c) ge = z[c] >= x[c];
      hits += ge ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-9) / n);
    if (mvn_orthant_lower_bound(sigma, x) <= p + 4.0 * se) ok.fetch_add(1);
  });
  return ok.load() == 100;
}

void criterion_property_suites() {
  struct Item {
    const char* name;
    bool ok;
  };
  const Item items[] = {
      {"mills grid", prop_mills()},
      {"lambert bounds", prop_lambert()},
      {"sherman-morrison", prop_sherman_morrison()},
      {"in_alt vs brute force", prop_in_alt()},
      {"piece count", prop_piece_count()},
      {"glr vs independent oracle", prop_glr_oracle()},
      {"posterior mass bound", prop_posterior_mass()},
      {"orthant bound vs MC", prop_orthant()},
  };
  bool all = true;
  std::ostringstream os;
  for (const auto& item : items) {
    all = all && item.ok;
    os << item.name << (item.ok ? " ok; " : " FAILED; ");
  }
  report(7, all, os.str());
}

// ---------------------------------------------------------------- criterion 8
std::string strip_wall(const std::string& path) {
  std::ifstream in(path);
  std::stringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

void criterion_determinism() {
  ExperimentConfig cfg;
  cfg.instance_source = "rotation";
  cfg.algos = {"psips", "uniform", "oracle", "ape"};
  cfg.deltas = {0.1};
  cfg.runs = 5;
  cfg.seed = 10101;
  cfg.out = "/tmp/psips_accept_det1.csv";
  run_experiment(cfg);
  cfg.out = "/tmp/psips_accept_det2.csv";
  run_experiment(cfg);
  const bool ok =
      strip_wall("/tmp/psips_accept_det1.csv") == strip_wall("/tmp/psips_accept_det2.csv");
  std::remove("/tmp/psips_accept_det1.csv");
  std::remove("/tmp/psips_accept_det2.csv");
  std::remove("/tmp/psips_accept_det1.csv.summary.json");
  std::remove("/tmp/psips_accept_det2.csv.summary.json");
  report(8, ok, "reruns byte-identical on every data column (wall time excluded)");
}

}  // namespace

int main() {
  criterion_covboost_front();
  criterion_characteristic_time();
  criterion_posterior_contraction();
  criterion_property_suites();
  criterion_determinism();
  criterion_covboost_complexity();
  criterion_correlation();
  criterion_delta_correctness();
  std::printf("%s\n", g_failures == 0 ? "ALL ACCEPTANCE CRITERIA PASSED"
                                      : "ACCEPTANCE FAILURES PRESENT");
  return g_failures == 0 ? 0 : 1;
}
