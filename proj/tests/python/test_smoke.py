import math
import os
import sys

import numpy as np
import pytest

for var in ("PSIPS_MODULE_DIR", "PSIPS_PACKAGE_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)

psips = pytest.importorskip("psips")


def test_covboost_pareto_set():
    inst = psips.load_covboost()
    assert inst.K == 20 and inst.d == 3
    front = psips.pareto_set(inst.answer_means())
    assert front == [8, 18]


def test_dominance_and_gaps():
    assert psips.dominates(np.array([1.0, 1.0]), np.array([0.0, 1.0]))
    assert not psips.dominates(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    g = psips.gaps(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert g["pareto"] == [1]
    assert g["delta2"] == pytest.approx(1.0)


def test_mills_and_lambert():
    assert psips.mills_ratio(0.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)
    w = psips.lambert_wbar(5.0)
    assert w - math.log(w) == pytest.approx(5.0, abs=1e-12)


def test_characteristic_time_bai():
    inst = psips.make_unstructured(
        np.array([[0.0], [1.0]]), np.array([[1.0]]), name="bai"
    )
    ct = psips.characteristic_time(inst)
    assert ct["t_star"] == pytest.approx(8.0, rel=0.02)
    assert ct["w_star"][0] == pytest.approx(0.5, abs=0.01)


def test_run_psips_smoke():
    inst = psips.gen_random_instance("rotation", K=5, d=2, seed=0)
    rec = psips.run_psips(inst, delta=0.2, seed=3)
    assert rec["stopped"]
    assert rec["recommended"] == [0, 1]
    again = psips.run_psips(inst, delta=0.2, seed=3)
    assert again["tau"] == rec["tau"]


def test_in_alt_matches_pareto():
    rng = np.random.default_rng(0)
    Z = np.eye(4)
    base = rng.normal(size=(4, 2))
    S = psips.pareto_set(base)
    assert not psips.in_alt(base, S, Z)
    for _ in range(100):
        lam = rng.normal(size=(4, 2))
        assert psips.in_alt(lam, S, Z) == (psips.pareto_set(lam) != S)
