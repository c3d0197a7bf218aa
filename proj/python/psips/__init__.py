"""Pareto set identification with posterior sampling.

Thin wrapper over the C++ core. The heavy lifting (sampling rules, stopping
rules, the characteristic-time oracle and the experiment harness) lives in
the `_psips` extension module.
"""

try:
    from . import _psips as _core  # installed layout
except ImportError:  # pragma: no cover - build-tree layout
    import _psips as _core

Instance = _core.Instance
characteristic_time = _core.characteristic_time
dominates = _core.dominates
gaps = _core.gaps
gen_random_instance = _core.gen_random_instance
in_alt = _core.in_alt
lambert_wbar = _core.lambert_wbar
load_covboost = _core.load_covboost
load_instance_json = _core.load_instance_json
load_noc = _core.load_noc
make_unstructured = _core.make_unstructured
mills_ratio = _core.mills_ratio
mvn_orthant_lower_bound = _core.mvn_orthant_lower_bound
pareto_set = _core.pareto_set
r_small = _core.r_small
run_ape = _core.run_ape
run_oracle = _core.run_oracle
run_profile = _core.run_profile
run_psips = _core.run_psips
run_uniform = _core.run_uniform

__all__ = [
    "Instance",
    "characteristic_time",
    "dominates",
    "gaps",
    "gen_random_instance",
    "in_alt",
    "lambert_wbar",
    "load_covboost",
    "load_instance_json",
    "load_noc",
    "make_unstructured",
    "mills_ratio",
    "mvn_orthant_lower_bound",
    "pareto_set",
    "r_small",
    "run_ape",
    "run_oracle",
    "run_profile",
    "run_psips",
    "run_uniform",
]
