#include "psips/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "psips/estimator.hpp"
#include "psips/stopping.hpp"

namespace psips {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

int thread_pool_size() {
  if (const char* env = std::getenv("PSI_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

CalibrationKind calibration_from_string(const std::string& s) {
  if (s == "heuristic") return CalibrationKind::heuristic;
  if (s == "lemma2") return CalibrationKind::lemma2;
  throw std::invalid_argument("unknown calibration kind: " + s);
}

StoppingKind stopping_from_string(const std::string& s) {
  if (s == "ps") return StoppingKind::ps;
  if (s == "glr") return StoppingKind::glr;
  throw std::invalid_argument("unknown stopping kind: " + s);
}

std::string calibration_to_string(CalibrationKind k) {
  return k == CalibrationKind::heuristic ? "heuristic" : "lemma2";
}

std::string stopping_to_string(StoppingKind k) { return k == StoppingKind::ps ? "ps" : "glr"; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return std::string(buf);
}

/// Round-robin pulls with the stopping rule disabled; per-round error
/// indicator for the anytime-error experiment.
std::vector<char> uniform_error_trace(const Instance& inst, long long horizon,
                                      std::uint64_t seed) {
  Rng rng(seed);
  EstimatorState est = EstimatorState::init(inst, EstimatorMode::unstructured, rng, 0.0);
  const ParetoSet truth = pareto_set_naive(inst.answer_means());
  RecommendCache cache;
  std::vector<char> err(static_cast<std::size_t>(horizon));
  for (long long r = 1; r <= horizon; ++r) {
    err[static_cast<std::size_t>(r - 1)] = recommend(est, cache) != truth ? 1 : 0;
    const int arm = static_cast<int>((r - 1) % inst.K);
    est.update(arm, inst.draw_observation(arm, rng));
  }
  return err;
}

struct MeanStat {
  double mean = 0.0, m2 = 0.0;
  long long n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double stddev() const { return n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0; }
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void run_trials_parallel(long long n_trials, const std::function<void(long long)>& body) {
  const int pool = std::min<long long>(thread_pool_size(), n_trials);
  if (pool <= 1) {
    for (long long i = 0; i < n_trials; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < pool; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const long long i = next.fetch_add(1);
        if (i >= n_trials) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  in >> j;
  ExperimentConfig cfg;
  if (j.contains("instance")) cfg.instance_source = j.at("instance").get<std::string>();
  if (j.contains("noc_features")) cfg.noc_features = j.at("noc_features").get<std::string>();
  if (j.contains("algos")) cfg.algos = j.at("algos").get<std::vector<std::string>>();
  if (j.contains("deltas")) cfg.deltas = j.at("deltas").get<std::vector<double>>();
  if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("calibration"))
    cfg.calibration = calibration_from_string(j.at("calibration").get<std::string>());
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("xi")) cfg.xi = j.at("xi").get<double>();
  if (j.contains("stopping"))
    cfg.stopping = stopping_from_string(j.at("stopping").get<std::string>());
  if (j.contains("max_rounds")) cfg.max_rounds = j.at("max_rounds").get<long long>();
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<long long>();
  return cfg;
}

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["instance"] = instance_source;
  if (noc_features) j["noc_features"] = *noc_features;
  j["algos"] = algos;
  j["deltas"] = deltas;
  j["runs"] = runs;
  j["seed"] = seed;
  j["calibration"] = calibration_to_string(calibration);
  j["alpha"] = alpha;
  j["xi"] = xi;
  j["stopping"] = stopping_to_string(stopping);
  j["max_rounds"] = max_rounds;
  j["out"] = out;
  j["horizon"] = horizon;
  return j.dump();
}

std::string ExperimentConfig::run_signature() const {
  // identifies the experiment itself; output paths do not change the data
  json j;
  j["instance"] = instance_source;
  j["algos"] = algos;
  j["deltas"] = deltas;
  j["runs"] = runs;
  j["seed"] = seed;
  j["calibration"] = calibration_to_string(calibration);
  j["alpha"] = alpha;
  j["xi"] = xi;
  j["stopping"] = stopping_to_string(stopping);
  j["max_rounds"] = max_rounds;
  return j.dump();
}

Instance resolve_instance(const ExperimentConfig& config) {
  const std::string& src = config.instance_source;
  if (src == "covboost") return load_covboost();
  if (src == "rotation") {
    Rng rng(0);
    return gen_random_instance(GenKind::rotation, 5, 2, rng);
  }
  if (src == "noc") return load_noc(config.noc_features);
  return load_instance_json(src);
}

std::string records_csv_header() {
  return "run_id,trial_index,seed,instance,algo,stopping,calibration,delta,tau,stopped,"
         "correct,pareto_size,avg_m_t,avg_m_t_delta,fallback_count,wall_ms";
}

std::string record_to_csv_row(const TrialRecord& rec, const std::string& run_id,
                              const ExperimentConfig& config) {
  std::ostringstream os;
  os << run_id << ',' << rec.trial_index << ',' << rec.run.seed << ',' << rec.instance << ','
     << rec.run.algo << ',' << stopping_to_string(config.stopping) << ','
     << calibration_to_string(config.calibration) << ',' << format_double(rec.run.delta)
     << ',' << rec.run.tau << ',' << (rec.run.stopped ? 1 : 0) << ','
     << (rec.run.correct ? 1 : 0) << ',' << rec.run.pareto_size << ','
     << format_double(rec.run.avg_m_t) << ',' << format_double(rec.run.avg_m_t_delta) << ','
     << rec.run.fallback_count << ',' << format_double(rec.run.wall_ms);
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("config: runs >= 1 required");
  for (double d : config.deltas)
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("config: deltas must lie in (0,1)");
  const Instance inst = resolve_instance(config);
  const GapSummary g = gaps(inst);
  if (g.degenerate)
    throw std::invalid_argument("config: instance has duplicated mean vectors (Delta_min = 0)");

  // optimal weights shared by every oracle trial
  std::optional<CharacteristicTime> tstar;
  for (const auto& algo : config.algos) {
    if (algo == "oracle" && !tstar) tstar = characteristic_time(inst);
    if (algo != "psips" && algo != "uniform" && algo != "oracle" && algo != "ape")
      throw std::invalid_argument("config: unknown algorithm id " + algo);
  }

  ExperimentResult result;
  result.run_id = hex64(fnv1a(config.run_signature()));
  const long long n_trials =
      static_cast<long long>(config.deltas.size()) * config.algos.size() * config.runs;
  result.records.resize(static_cast<std::size_t>(n_trials));
  run_trials_parallel(n_trials, [&](long long i) {
    const long long per_delta = static_cast<long long>(config.algos.size()) * config.runs;
    const std::size_t delta_idx = static_cast<std::size_t>(i / per_delta);
    const std::size_t algo_idx = static_cast<std::size_t>((i % per_delta) / config.runs);
    RunOptions opt;
    opt.delta = config.deltas[delta_idx];
    opt.calibration = config.calibration;
    opt.alpha = config.alpha;
    opt.xi = config.xi;
    opt.max_rounds = config.max_rounds;
    opt.stopping = config.stopping;
    const std::uint64_t trial_seed = config.seed ^ splitmix64(static_cast<std::uint64_t>(i));
    const std::string& algo = config.algos[algo_idx];
    TrialRecord rec;
    rec.trial_index = i;
    rec.instance = inst.name;
    if (algo == "psips")
      rec.run = run_psips(inst, opt, trial_seed);
    else if (algo == "uniform")
      rec.run = run_uniform(inst, opt, trial_seed);
    else if (algo == "oracle")
      rec.run = run_oracle(inst, opt, trial_seed, &*tstar);
    else
      rec.run = run_ape(inst, opt, trial_seed);
    result.records[static_cast<std::size_t>(i)] = std::move(rec);
  });

  // records CSV, canonical trial order
  result.records_csv_path = config.out;
  if (const fs::path parent = fs::path(config.out).parent_path(); !parent.empty())
    fs::create_directories(parent);
  std::ofstream csv(config.out);
  if (!csv) throw std::runtime_error("cannot open " + config.out);
  csv << records_csv_header() << '\n';
  for (const auto& rec : result.records) csv << record_to_csv_row(rec, result.run_id, config) << '\n';
  csv.close();

  // summary grouped by (instance, algo, delta)
  json summary = json::array();
  for (double delta : config.deltas) {
    for (const auto& algo_name : config.algos) {
      MeanStat tau, wall, mtd, mt;
      std::vector<double> taus;
      long long errors = 0, nonstopped = 0, count = 0;
      std::string algo_id;
      for (const auto& rec : result.records) {
        if (rec.run.delta != delta) continue;
        const bool match = (algo_name == "psips" && rec.run.algo == "psips") ||
                           (algo_name == "uniform" && rec.run.algo.rfind("uniform", 0) == 0) ||
                           (algo_name == "oracle" && rec.run.algo == "oracle") ||
                           (algo_name == "ape" && rec.run.algo == "ape-style");
        if (!match) continue;
        algo_id = rec.run.algo;
        ++count;
        tau.add(static_cast<double>(rec.run.tau));
        taus.push_back(static_cast<double>(rec.run.tau));
        wall.add(rec.run.wall_ms);
        mtd.add(rec.run.avg_m_t_delta);
        mt.add(rec.run.avg_m_t);
        if (!rec.run.correct) ++errors;
        if (!rec.run.stopped) ++nonstopped;
      }
      json row;
      row["instance"] = inst.name;
      row["algo"] = algo_id;
      row["delta"] = delta;
      row["runs"] = count;
      row["mean_tau"] = tau.mean;
      row["median_tau"] = median(taus);
      row["std_tau"] = tau.stddev();
      row["error_rate"] = count > 0 ? static_cast<double>(errors) / count : 0.0;
      row["non_stopped"] = nonstopped;
      row["mean_wall_ms"] = wall.mean;
      row["mean_m_t"] = mt.mean;
      row["mean_m_t_delta"] = mtd.mean;
      summary.push_back(row);
    }
  }
  result.summary_json_path = config.out + ".summary.json";
  std::ofstream sj(result.summary_json_path);
  sj << summary.dump(2) << '\n';
  return result;
}

namespace {

Instance rotation_with_correlation(double rho) {
  Rng rng(0);
  Instance base = gen_random_instance(GenKind::rotation, 5, 2, rng);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, rho, rho, 1.0;
  Instance inst = make_unstructured(base.theta, sigma, NoiseKind::gaussian,
                                    "rotation_rho=" + format_double(rho));
  return inst;
}

double mean_tau_for(const ExperimentResult& res, const std::string& algo_prefix) {
  MeanStat s;
  for (const auto& rec : res.records)
    if (rec.run.algo.rfind(algo_prefix, 0) == 0) s.add(static_cast<double>(rec.run.tau));
  return s.mean;
}

std::vector<std::string> reproduce_covboost(double scale, const fs::path& dir, bool check) {
  ExperimentConfig cfg;
  cfg.instance_source = "covboost";
  cfg.algos = {"psips", "ape", "oracle", "uniform"};
  cfg.deltas = {0.1};
  cfg.runs = std::max(1, static_cast<int>(std::lround(500 * scale)));
  cfg.seed = 42;
  cfg.out = (dir / "covboost_records.csv").string();
  const ExperimentResult res = run_experiment(cfg);
  if (check) {
    const double mean_tau = mean_tau_for(res, "psips");
    if (cfg.runs >= 100 && !(mean_tau >= 14300.0 && mean_tau <= 26600.0))
      throw CheckFailure("covboost: psips mean tau " + format_double(mean_tau) +
                         " outside [14300, 26600]");
    for (const auto& rec : res.records)
      if (rec.run.stopped && !rec.run.correct)
        throw CheckFailure("covboost: a stopped run recommended a wrong set");
  }
  return {res.records_csv_path, res.summary_json_path};
}

std::vector<std::string> reproduce_correlation(double scale, const fs::path& dir, bool check) {
  const std::vector<double> rhos = {-0.9, -0.5, 0.0, 0.5, 0.9};
  const int runs = std::max(1, static_cast<int>(std::lround(100 * scale)));
  json rows = json::array();
  std::ofstream csv(dir / "correlation.csv");
  csv << "rho,algo,delta,runs,mean_tau,std_tau,error_rate\n";
  double mean_tau_neg9 = 0.0, mean_tau_zero = 0.0;
  double ape_min = std::numeric_limits<double>::infinity(), ape_max = 0.0;
  for (double rho : rhos) {
    const Instance inst = rotation_with_correlation(rho);
    for (const std::string algo : {std::string("psips"), std::string("ape")}) {
      MeanStat tau;
      long long errors = 0;
      const long long n = runs;
      std::vector<RunRecord> recs(static_cast<std::size_t>(n));
      run_trials_parallel(n, [&](long long i) {
        RunOptions opt;
        opt.delta = 0.01;
        const std::uint64_t seed = 42ULL ^ splitmix64(static_cast<std::uint64_t>(
                                       i + 1000 * static_cast<long long>(rho * 10 + 10)));
        recs[static_cast<std::size_t>(i)] =
            algo == "psips" ? run_psips(inst, opt, seed) : run_ape(inst, opt, seed);
      });
      for (const auto& r : recs) {
        tau.add(static_cast<double>(r.tau));
        if (!r.correct) ++errors;
      }
      csv << format_double(rho) << ',' << algo << ",0.01," << n << ','
          << format_double(tau.mean) << ',' << format_double(tau.stddev()) << ','
          << format_double(static_cast<double>(errors) / n) << '\n';
      if (algo == "psips" && rho == -0.9) mean_tau_neg9 = tau.mean;
      if (algo == "psips" && rho == 0.0) mean_tau_zero = tau.mean;
      if (algo == "ape" && (rho == -0.9 || rho == 0.0 || rho == 0.9)) {
        ape_min = std::min(ape_min, tau.mean);
        ape_max = std::max(ape_max, tau.mean);
      }
    }
  }
  csv.close();
  if (check) {
    if (!(mean_tau_neg9 <= 0.5 * mean_tau_zero))
      throw CheckFailure("correlation: mean tau at rho=-0.9 (" + format_double(mean_tau_neg9) +
                         ") is not half of rho=0 (" + format_double(mean_tau_zero) + ")");
    if (!((ape_max - ape_min) / ape_min < 0.10))
      throw CheckFailure("correlation: ape-style mean tau varies by 10% or more across rho");
  }
  return {(dir / "correlation.csv").string()};
}

std::vector<std::string> reproduce_random(GenKind kind, double scale, const fs::path& dir,
                                          bool check) {
  const int n_instances = std::max(1, static_cast<int>(std::lround(250 * scale)));
  const std::string tag = kind == GenKind::gaussian_cube ? "random_gaussian" : "random_bernoulli";
  std::ofstream csv(dir / (tag + ".csv"));
  csv << "instance_seed,algo,delta,tau,correct\n";
  const double delta = 0.01;
  std::vector<std::string> lines(static_cast<std::size_t>(n_instances));
  std::atomic<long long> errors{0};
  run_trials_parallel(n_instances, [&](long long i) {
    Rng gen_rng(1000 + static_cast<std::uint64_t>(i));
    const Instance inst = gen_random_instance(kind, 5, 2, gen_rng, 500.0);
    std::ostringstream os;
    for (const std::string algo :
         {std::string("psips"), std::string("ape"), std::string("uniform")}) {
      RunOptions opt;
      opt.delta = delta;
      const std::uint64_t seed = 42ULL ^ splitmix64(static_cast<std::uint64_t>(i));
      RunRecord r;
      if (algo == "psips")
        r = run_psips(inst, opt, seed);
      else if (algo == "ape")
        r = run_ape(inst, opt, seed);
      else
        r = run_uniform(inst, opt, seed);
      if (!r.correct) errors.fetch_add(1);
      os << i << ',' << r.algo << ',' << format_double(delta) << ',' << r.tau << ','
         << (r.correct ? 1 : 0) << '\n';
    }
    lines[static_cast<std::size_t>(i)] = os.str();
  });
  for (const auto& l : lines) csv << l;
  csv.close();
  if (check) {
    const double err_rate = static_cast<double>(errors.load()) / (3.0 * n_instances);
    if (!(err_rate <= delta))
      throw CheckFailure(tag + ": error rate " + format_double(err_rate) + " above delta");
  }
  return {(dir / (tag + ".csv")).string()};
}

std::vector<std::string> reproduce_noc(double scale, const fs::path& dir, bool check,
                                       const std::optional<std::string>& noc_features) {
  if (!noc_features) {
    std::fprintf(stderr,
                 "psips: noc reproduction needs the 259-design feature file "
                 "(--noc-features); only the regression matrix is embedded\n");
    std::ofstream note(dir / "noc_SKIPPED.txt");
    note << "feature file not supplied; stopping-time curves unavailable\n";
    return {(dir / "noc_SKIPPED.txt").string()};
  }
  const Instance inst = load_noc(noc_features);
  if (check) {
    const ParetoSet truth = pareto_set_naive(inst.answer_means());
    if (truth.size() != 4)
      throw CheckFailure("noc: expected a 4-answer Pareto set, found " +
                         std::to_string(truth.size()));
  }
  ExperimentConfig cfg;
  cfg.instance_source = "noc";
  cfg.noc_features = noc_features;
  cfg.algos = {"psips", "uniform", "oracle"};
  cfg.deltas = {0.01};
  cfg.runs = std::max(1, static_cast<int>(std::lround(500 * scale)));
  cfg.seed = 42;
  cfg.out = (dir / "noc_records.csv").string();
  const ExperimentResult res = run_experiment(cfg);
  return {res.records_csv_path, res.summary_json_path};
}

std::vector<std::string> reproduce_rejections(double scale, const fs::path& dir, bool check) {
  Rng rng(0);
  const Instance inst = gen_random_instance(GenKind::rotation, 5, 2, rng);
  const long long horizon = 5000;
  const int runs = std::max(1, static_cast<int>(std::lround(1000 * scale)));
  std::vector<double> sum_mt(static_cast<std::size_t>(horizon), 0.0);
  std::vector<double> sum_mtd(static_cast<std::size_t>(horizon), 0.0);
  std::mutex acc_mutex;
  run_trials_parallel(runs, [&](long long i) {
    RunOptions opt;
    opt.delta = 0.01;
    ProfileOptions prof;
    prof.horizon = horizon;
    const auto trace = run_profile(inst, opt, prof, 42ULL ^ splitmix64(i)).rows;
    std::lock_guard<std::mutex> lock(acc_mutex);
    for (std::size_t r = 0; r < trace.size(); ++r) {
      sum_mt[r] += static_cast<double>(trace[r].m_t);
      sum_mtd[r] += static_cast<double>(trace[r].m_t_delta);
    }
  });
  std::ofstream csv(dir / "rejections.csv");
  csv << "t,mean_m_t,mean_m_t_delta\n";
  for (long long r = 0; r < horizon; ++r)
    csv << (r + 1) << ',' << format_double(sum_mt[static_cast<std::size_t>(r)] / runs) << ','
        << format_double(sum_mtd[static_cast<std::size_t>(r)] / runs) << '\n';
  csv.close();
  if (check) {
    const std::size_t dec = static_cast<std::size_t>(horizon / 10);
    double first = 0.0, last = 0.0;
    for (std::size_t r = 0; r < dec; ++r) first += sum_mtd[r];
    for (std::size_t r = static_cast<std::size_t>(horizon) - dec; r < static_cast<std::size_t>(horizon); ++r)
      last += sum_mtd[r];
    if (!(last > first))
      throw CheckFailure("rejections: stopping-scan rejections do not grow with concentration");
  }
  return {(dir / "rejections.csv").string()};
}

std::vector<std::string> reproduce_posterior_error(double scale, const fs::path& dir,
                                                   bool check) {
  const Instance inst = load_covboost();
  const long long horizon = 5000;
  const int runs = std::max(1, static_cast<int>(std::lround(1000 * scale)));
  std::vector<double> err_psips(static_cast<std::size_t>(horizon), 0.0);
  std::vector<double> err_uniform(static_cast<std::size_t>(horizon), 0.0);
  std::mutex acc_mutex;
  run_trials_parallel(runs, [&](long long i) {
    RunOptions opt;
    opt.delta = 0.1;  // anytime trace; delta only scales the recorded rejection counts
    ProfileOptions prof;
    prof.horizon = horizon;
    const auto trace = run_profile(inst, opt, prof, 42ULL ^ splitmix64(i)).rows;
    const auto uerr = uniform_error_trace(inst, horizon, 42ULL ^ splitmix64(i + 7777));
    std::lock_guard<std::mutex> lock(acc_mutex);
    for (std::size_t r = 0; r < trace.size(); ++r) {
      err_psips[r] += trace[r].error ? 1.0 : 0.0;
      err_uniform[r] += uerr[r] ? 1.0 : 0.0;
    }
  });
  std::ofstream csv(dir / "posterior_error.csv");
  csv << "t,error_psips,error_uniform\n";
  for (long long r = 0; r < horizon; ++r)
    csv << (r + 1) << ',' << format_double(err_psips[static_cast<std::size_t>(r)] / runs)
        << ',' << format_double(err_uniform[static_cast<std::size_t>(r)] / runs) << '\n';
  csv.close();
  if (check) {
    const std::size_t dec = static_cast<std::size_t>(horizon / 10);
    double first = 0.0, last = 0.0;
    for (std::size_t r = 0; r < dec; ++r) first += err_psips[r];
    for (std::size_t r = static_cast<std::size_t>(horizon) - dec; r < static_cast<std::size_t>(horizon); ++r)
      last += err_psips[r];
    if (!(last <= first))
      throw CheckFailure("posterior_error: the error rate does not shrink over the horizon");
  }
  return {(dir / "posterior_error.csv").string()};
}

}  // namespace

std::vector<std::string> reproduce(const std::string& name, double scale,
                                   const std::string& out_dir, bool check,
                                   const std::optional<std::string>& noc_features) {
  if (!(scale > 0.0 && scale <= 1.0))
    throw std::invalid_argument("reproduce: scale must lie in (0, 1]");
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  if (name == "covboost") return reproduce_covboost(scale, dir, check);
  if (name == "correlation") return reproduce_correlation(scale, dir, check);
  if (name == "random-gaussian" || name == "random_gaussian")
    return reproduce_random(GenKind::gaussian_cube, scale, dir, check);
  if (name == "random-bernoulli" || name == "random_bernoulli")
    return reproduce_random(GenKind::bernoulli_box, scale, dir, check);
  if (name == "noc") return reproduce_noc(scale, dir, check, noc_features);
  if (name == "rejections") return reproduce_rejections(scale, dir, check);
  if (name == "posterior-error" || name == "posterior_error")
    return reproduce_posterior_error(scale, dir, check);
  throw std::invalid_argument("reproduce: unknown experiment " + name);
}

void gen_instance_file(const std::string& spec, int K, int d,
                       std::optional<double> complexity_cap, std::uint64_t seed,
                       const std::string& path) {
  GenKind kind;
  if (spec == "rotation")
    kind = GenKind::rotation;
  else if (spec == "gaussian_cube" || spec == "gaussian-cube")
    kind = GenKind::gaussian_cube;
  else if (spec == "bernoulli_box" || spec == "bernoulli-box")
    kind = GenKind::bernoulli_box;
  else
    throw std::invalid_argument("gen_instance_file: unknown generator spec " + spec);
  Rng rng(seed);
  Instance inst = gen_random_instance(kind, K, d, rng, complexity_cap);
  save_instance_json(inst, path);
}

}  // namespace psips

