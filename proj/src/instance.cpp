#include "psips/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "psips/pareto.hpp"

namespace psips {

bool Instance::unstructured() const {
  if (h != K || A.rows() != K || Z.rows() != A.rows()) return false;
  if (!A.isIdentity(1e-12)) return false;
  return Z.isApprox(A, 1e-12);
}

Eigen::VectorXd Instance::mean_of(int answer_index) const {
  if (answer_index < 0 || answer_index >= num_answers())
    throw std::out_of_range("mean_of: answer index out of range");
  return theta.transpose() * Z.row(answer_index).transpose();
}

Eigen::MatrixXd Instance::answer_means() const {
  if (Z.rows() == 0) throw std::runtime_error(name + ": answer features not available");
  return Z * theta;
}

Eigen::MatrixXd Instance::arm_means() const {
  if (!has_features()) throw std::runtime_error(name + ": arm features not available");
  return A * theta;
}

Eigen::VectorXd Instance::arm_mean(int arm_index) const {
  if (arm_index < 0 || arm_index >= static_cast<int>(A.rows()))
    throw std::out_of_range("arm_mean: arm index out of range");
  return theta.transpose() * A.row(arm_index).transpose();
}

void Instance::validate() {
  if (d < 1 || h < 1) throw std::invalid_argument("instance: d and h must be positive");
  if (sigma.rows() != d || sigma.cols() != d)
    throw std::invalid_argument("instance: sigma must be d x d");
  if (!sigma.isApprox(sigma.transpose(), 1e-10))
    throw std::invalid_argument("instance: sigma must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("instance: sigma must be positive definite");
  sigma_chol = llt.matrixL();
  if (theta.rows() != h || theta.cols() != d)
    throw std::invalid_argument("instance: theta must be h x d");
  if (has_features()) {
    if (A.cols() != h) throw std::invalid_argument("instance: A must be K x h");
    if (K != static_cast<int>(A.rows())) throw std::invalid_argument("instance: K mismatch");
    if (Z.cols() != h) throw std::invalid_argument("instance: Z must have h columns");
    if (noise == NoiseKind::bernoulli_marginals) {
      const Eigen::MatrixXd mu = arm_means();
      if ((mu.array() < 0.0).any() || (mu.array() > 1.0).any())
        throw std::invalid_argument("instance: Bernoulli means must lie in [0,1]");
    }
  }
  if (std::isfinite(theta_ball)) {
    for (int c = 0; c < d; ++c)
      if (theta.col(c).norm() > theta_ball + 1e-12)
        throw std::invalid_argument("instance: theta violates the ball constraint");
  }
}

Eigen::VectorXd Instance::draw_observation(int arm_index, Rng& rng) const {
  const Eigen::VectorXd mu = arm_mean(arm_index);
  if (noise == NoiseKind::bernoulli_marginals) {
    Eigen::VectorXd x(d);
    for (int c = 0; c < d; ++c) {
      if (mu[c] < 0.0 || mu[c] > 1.0)
        throw std::runtime_error("draw_observation: Bernoulli mean outside [0,1]");
      x[c] = rng.bernoulli(mu[c]) ? 1.0 : 0.0;
    }
    return x;
  }
  Eigen::VectorXd g(d);
  for (int c = 0; c < d; ++c) g[c] = rng.normal();
  return mu + sigma_chol * g;
}

Instance make_unstructured(const Eigen::MatrixXd& means, const Eigen::MatrixXd& sigma,
                           NoiseKind noise, const std::string& name) {
  Instance inst;
  inst.name = name;
  inst.K = static_cast<int>(means.rows());
  inst.d = static_cast<int>(means.cols());
  inst.h = inst.K;
  inst.A = Eigen::MatrixXd::Identity(inst.K, inst.K);
  inst.Z = inst.A;
  inst.theta = means;
  inst.sigma = sigma;
  inst.noise = noise;
  inst.validate();
  return inst;
}

namespace {

Eigen::MatrixXd rotation_means(int K) {
  Eigen::MatrixXd mu(K, 2);
  mu.row(0) << 1.0, 1.0;
  const double a = M_PI / 5.0;
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  for (int i = 1; i < K; ++i) mu.row(i) = (R * mu.row(i - 1).transpose()).transpose();
  return mu;
}

}  // namespace

Instance gen_random_instance(GenKind kind, int K, int d, Rng& rng,
                             std::optional<double> complexity_cap) {
  if (K < 2 || d < 1) throw std::invalid_argument("gen_random_instance: need K >= 2, d >= 1");
  const int max_tries = complexity_cap ? 10000 : 1;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Eigen::MatrixXd mu(K, d);
    Eigen::MatrixXd sigma;
    NoiseKind noise = NoiseKind::gaussian;
    std::string name;
    switch (kind) {
      case GenKind::gaussian_cube:
        for (int i = 0; i < K; ++i)
          for (int c = 0; c < d; ++c) mu(i, c) = 2.0 * rng.uniform() - 1.0;
        sigma = Eigen::MatrixXd::Identity(d, d) / 2.0;
        name = "gaussian_cube";
        break;
      case GenKind::bernoulli_box:
        for (int i = 0; i < K; ++i)
          for (int c = 0; c < d; ++c) mu(i, c) = 0.2 + 0.7 * rng.uniform();
        sigma = Eigen::MatrixXd::Identity(d, d) / 4.0;
        noise = NoiseKind::bernoulli_marginals;
        name = "bernoulli_box";
        break;
      case GenKind::rotation:
        if (d != 2) throw std::invalid_argument("gen_random_instance: rotation requires d = 2");
        mu = rotation_means(K);
        sigma = Eigen::MatrixXd::Identity(2, 2) / 2.0;
        name = "rotation";
        break;
    }
    Instance inst = make_unstructured(mu, sigma, noise, name);
    if (!complexity_cap) return inst;
    const GapSummary g = gaps(inst);
    if (g.complexity_H <= *complexity_cap) return inst;
  }
  throw std::runtime_error("gen_random_instance: complexity cap unattainable after 10000 tries");
}

namespace {

// Empirical arithmetic means of the log-transformed immune responses
// (anti-spike IgG, NT50, cellular response); first ten rows are the
// BNT/BNT prime group, last ten the ChAd/ChAd group.
constexpr double kCovboostMeans[20][3] = {
    {9.50, 6.86, 4.56},  {9.29, 6.64, 4.04},  {9.05, 6.41, 3.56},  {10.21, 7.49, 4.43},
    {10.05, 7.20, 4.36}, {8.34, 5.67, 3.51},  {8.22, 5.46, 3.64},  {9.75, 7.27, 4.71},
    {10.43, 7.61, 4.72}, {8.94, 6.19, 3.84},  {7.81, 5.26, 3.97},  {8.85, 6.59, 4.73},
    {8.44, 6.15, 4.59},  {9.93, 7.39, 4.75},  {8.71, 7.20, 4.91},  {7.51, 5.31, 3.96},
    {7.27, 4.99, 4.02},  {8.62, 6.33, 4.66},  {10.35, 7.77, 5.00}, {8.29, 5.92, 3.87}};

constexpr double kCovboostVariances[3] = {0.70, 0.83, 1.54};

const std::vector<std::string> kCovboostLabels = {
    "BNT/BNT ChAd",  "BNT/BNT NVX",       "BNT/BNT NVX Half",   "BNT/BNT BNT",
    "BNT/BNT BNT Half", "BNT/BNT VLA",    "BNT/BNT VLA Half",   "BNT/BNT Ad26",
    "BNT/BNT m1273", "BNT/BNT CVn",       "ChAd/ChAd ChAd",     "ChAd/ChAd NVX",
    "ChAd/ChAd NVX Half", "ChAd/ChAd BNT", "ChAd/ChAd BNT Half", "ChAd/ChAd VLA",
    "ChAd/ChAd VLA Half", "ChAd/ChAd Ad26", "ChAd/ChAd m1273",   "ChAd/ChAd CVn"};

// Regression matrix of the normalized network-on-chip design instance.
constexpr double kNocTheta[4][2] = {{-3.08665453, -3.35487744},
                                    {-3.66027623, 0.19333635},
                                    {-2.68963781, -1.39779755},
                                    {-7.90670356, -4.44360318}};

}  // namespace

const std::vector<std::string>& covboost_labels() { return kCovboostLabels; }

Instance load_covboost() {
  Eigen::MatrixXd mu(20, 3);
  for (int i = 0; i < 20; ++i)
    for (int c = 0; c < 3; ++c) mu(i, c) = kCovboostMeans[i][c];
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 3);
  for (int c = 0; c < 3; ++c) sigma(c, c) = kCovboostVariances[c];
  return make_unstructured(mu, sigma, NoiseKind::gaussian, "covboost");
}

Instance load_noc(const std::optional<std::string>& features_path) {
  Instance inst;
  inst.name = "noc";
  inst.d = 2;
  inst.h = 4;
  inst.theta.resize(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) inst.theta(r, c) = kNocTheta[r][c];
  inst.sigma = Eigen::MatrixXd::Identity(2, 2);
  // Theta ball at twice the largest column norm of the regression matrix;
  // the structured learners need a bounded parameter set
  double max_col = 0.0;
  for (int c = 0; c < 2; ++c) max_col = std::max(max_col, inst.theta.col(c).norm());
  inst.theta_ball = 2.0 * max_col;
  if (!features_path) {
    inst.K = 0;
    inst.A.resize(0, 4);
    inst.Z.resize(0, 4);
    inst.validate();
    return inst;
  }
  std::ifstream in(*features_path);
  if (!in) throw std::runtime_error("load_noc: cannot open " + *features_path);
  std::vector<std::array<double, 4>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 4> row{};
    std::stringstream ss(line);
    std::string field;
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("load_noc: malformed row");
      row[c] = std::stod(field);
    }
    rows.push_back(row);
  }
  if (rows.size() != 259)
    throw std::runtime_error("load_noc: expected 259 design rows, got " +
                             std::to_string(rows.size()));
  inst.K = 259;
  inst.A.resize(259, 4);
  for (int i = 0; i < 259; ++i)
    for (int c = 0; c < 4; ++c) inst.A(i, c) = rows[i][c];
  inst.Z = inst.A;
  inst.validate();
  return inst;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("instance json: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

}  // namespace

std::string instance_to_json_string(const Instance& inst) {
  nlohmann::json j;
  j["K"] = inst.K;
  j["d"] = inst.d;
  j["h"] = inst.h;
  j["A"] = matrix_to_json(inst.A);
  if (!inst.Z.isApprox(inst.A)) j["Z"] = matrix_to_json(inst.Z);
  j["theta"] = matrix_to_json(inst.theta);
  j["sigma"] = matrix_to_json(inst.sigma);
  j["noise"] = inst.noise == NoiseKind::gaussian ? "gaussian" : "bernoulli";
  if (std::isfinite(inst.theta_ball)) j["theta_ball"] = inst.theta_ball;
  return j.dump(2);
}

Instance instance_from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Instance inst;
  inst.K = j.at("K").get<int>();
  inst.d = j.at("d").get<int>();
  inst.h = j.at("h").get<int>();
  inst.A = matrix_from_json(j.at("A"));
  inst.Z = j.contains("Z") ? matrix_from_json(j.at("Z")) : inst.A;
  inst.theta = matrix_from_json(j.at("theta"));
  inst.sigma = matrix_from_json(j.at("sigma"));
  const std::string noise = j.at("noise").get<std::string>();
  if (noise == "gaussian")
    inst.noise = NoiseKind::gaussian;
  else if (noise == "bernoulli")
    inst.noise = NoiseKind::bernoulli_marginals;
  else
    throw std::invalid_argument("instance json: unknown noise kind " + noise);
  if (j.contains("theta_ball")) inst.theta_ball = j.at("theta_ball").get<double>();
  if (j.contains("name")) inst.name = j.at("name").get<std::string>();
  inst.validate();
  return inst;
}

Instance load_instance_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance_json: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Instance inst = instance_from_json_string(ss.str());
  if (inst.name == "custom") inst.name = path;
  return inst;
}

void save_instance_json(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance_json: cannot open " + path);
  out << instance_to_json_string(inst) << "\n";
}

}  // namespace psips
