#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psips/algorithms.hpp"
#include "psips/calibration.hpp"
#include "psips/harness.hpp"
#include "psips/instance.hpp"
#include "psips/oracle.hpp"
#include "psips/pareto.hpp"

namespace py = pybind11;
using namespace psips;

namespace {

RunOptions options_from_kwargs(double delta, const std::string& calibration, double alpha,
                               double xi, long long max_rounds, const std::string& stopping) {
  RunOptions opt;
  opt.delta = delta;
  opt.calibration =
      calibration == "lemma2" ? CalibrationKind::lemma2 : CalibrationKind::heuristic;
  opt.alpha = alpha;
  opt.xi = xi;
  opt.max_rounds = max_rounds;
  opt.stopping = stopping == "glr" ? StoppingKind::glr : StoppingKind::ps;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_psips, m) {
  m.doc() = "Pareto set identification with posterior sampling";

  py::class_<Instance>(m, "Instance")
      .def_readonly("name", &Instance::name)
      .def_readonly("K", &Instance::K)
      .def_readonly("d", &Instance::d)
      .def_readonly("h", &Instance::h)
      .def_readonly("A", &Instance::A)
      .def_readonly("Z", &Instance::Z)
      .def_readonly("theta", &Instance::theta)
      .def_readonly("sigma", &Instance::sigma)
      .def_property_readonly("unstructured", &Instance::unstructured)
      .def("answer_means", &Instance::answer_means)
      .def("mean_of", &Instance::mean_of, py::arg("answer_index"));

  m.def("make_unstructured",
        [](const Eigen::MatrixXd& means, const Eigen::MatrixXd& sigma, bool bernoulli,
           const std::string& name) {
          return make_unstructured(
              means, sigma,
              bernoulli ? NoiseKind::bernoulli_marginals : NoiseKind::gaussian, name);
        },
        py::arg("means"), py::arg("sigma"), py::arg("bernoulli") = false,
        py::arg("name") = "custom");
  m.def("load_covboost", &load_covboost);
  m.def("load_noc", &load_noc, py::arg("features_path") = std::nullopt);
  m.def("load_instance_json", &load_instance_json, py::arg("path"));
  m.def(
      "gen_random_instance",
      [](const std::string& kind, int K, int d, std::uint64_t seed,
         std::optional<double> cap) {
        GenKind g = kind == "rotation"        ? GenKind::rotation
                    : kind == "bernoulli_box" ? GenKind::bernoulli_box
                                              : GenKind::gaussian_cube;
        Rng rng(seed);
        return gen_random_instance(g, K, d, rng, cap);
      },
      py::arg("kind"), py::arg("K"), py::arg("d"), py::arg("seed") = 0,
      py::arg("complexity_cap") = std::nullopt);

  m.def("dominates", &dominates, py::arg("u"), py::arg("v"));
  m.def("pareto_set", &pareto_set, py::arg("means"));
  m.def("in_alt", &in_alt, py::arg("lam"), py::arg("S"), py::arg("Z"));
  m.def("gaps", [](const Eigen::MatrixXd& means) {
    const GapSummary g = gaps(means);
    py::dict out;
    out["pareto"] = g.pareto;
    out["delta1"] = g.delta1;
    out["delta2"] = g.delta2;
    out["delta_min"] = g.delta_min;
    out["H"] = g.complexity_H;
    return out;
  });

  m.def("mills_ratio", &mills_ratio, py::arg("x"));
  m.def("lambert_wbar", &lambert_wbar, py::arg("x"));
  m.def("r_small", &r_small, py::arg("delta"), py::arg("n"));
  m.def("mvn_orthant_lower_bound", &mvn_orthant_lower_bound, py::arg("sigma"), py::arg("x"));

  m.def(
      "characteristic_time",
      [](const Instance& inst, int max_iters, double tol) {
        const CharacteristicTime ct = characteristic_time(inst, max_iters, tol);
        py::dict out;
        out["t_star"] = ct.t_star;
        out["w_star"] = ct.w_star;
        out["iterations"] = ct.iterations;
        out["duality_gap_estimate"] = ct.duality_gap_estimate;
        return out;
      },
      py::arg("instance"), py::arg("max_iters") = 5000, py::arg("tol") = 1e-3);

  auto record_to_dict = [](const RunRecord& r) {
    py::dict out;
    out["algo"] = r.algo;
    out["delta"] = r.delta;
    out["tau"] = r.tau;
    out["stopped"] = r.stopped;
    out["recommended"] = r.recommended;
    out["correct"] = r.correct;
    out["avg_m_t"] = r.avg_m_t;
    out["avg_m_t_delta"] = r.avg_m_t_delta;
    out["fallback_count"] = r.fallback_count;
    out["wall_ms"] = r.wall_ms;
    out["seed"] = r.seed;
    return out;
  };

  m.def(
      "run_psips",
      [=](const Instance& inst, double delta, std::uint64_t seed, const std::string& cal,
          double alpha, double xi, long long max_rounds) {
        return record_to_dict(run_psips(
            inst, options_from_kwargs(delta, cal, alpha, xi, max_rounds, "ps"), seed));
      },
      py::arg("instance"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("calibration") = "heuristic", py::arg("alpha") = 0.25, py::arg("xi") = 1.0,
      py::arg("max_rounds") = 10000000);
  m.def(
      "run_uniform",
      [=](const Instance& inst, double delta, std::uint64_t seed, const std::string& cal,
          const std::string& stopping, long long max_rounds) {
        return record_to_dict(run_uniform(
            inst, options_from_kwargs(delta, cal, 0.25, 1.0, max_rounds, stopping), seed));
      },
      py::arg("instance"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("calibration") = "heuristic", py::arg("stopping") = "ps",
      py::arg("max_rounds") = 10000000);
  m.def(
      "run_oracle",
      [=](const Instance& inst, double delta, std::uint64_t seed, const std::string& cal,
          long long max_rounds) {
        return record_to_dict(run_oracle(
            inst, options_from_kwargs(delta, cal, 0.25, 1.0, max_rounds, "ps"), seed));
      },
      py::arg("instance"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("calibration") = "heuristic", py::arg("max_rounds") = 10000000);
  m.def(
      "run_ape",
      [=](const Instance& inst, double delta, std::uint64_t seed, long long max_rounds) {
        return record_to_dict(
            run_ape(inst, options_from_kwargs(delta, "heuristic", 0.25, 1.0, max_rounds, "ps"),
                    seed));
      },
      py::arg("instance"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("max_rounds") = 10000000);
  m.def(
      "run_profile",
      [](const Instance& inst, long long horizon, double delta, std::uint64_t seed,
         bool record_glr) {
        RunOptions opt;
        opt.delta = delta;
        ProfileOptions prof;
        prof.horizon = horizon;
        prof.record_glr = record_glr;
        const auto trace = run_profile(inst, opt, prof, seed).rows;
        py::list rows;
        for (const auto& r : trace) {
          py::dict row;
          row["round"] = r.round;
          row["m_t"] = r.m_t;
          row["m_t_delta"] = r.m_t_delta;
          row["error"] = r.error;
          if (record_glr) row["glr"] = r.glr;
          rows.append(row);
        }
        return rows;
      },
      py::arg("instance"), py::arg("horizon") = 1000, py::arg("delta") = 0.1,
      py::arg("seed") = 0, py::arg("record_glr") = false);
}
