import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conepf import kernels
from conepf.cone import PolyhedralCone, sample_points
from conepf.counterexample import build_example1
from conepf.maps import ComposedMap, LinearMap, MaxLinearMap, MinLinearMap, ScaledMap

K2 = PolyhedralCone.orthant(2)
MAPS = {
    "linear": LinearMap([[2, 1], [1, 2]]),
    "sector": build_example1(),
    "min3": MinLinearMap([[[3, 1, 0], [1, 3, 1], [0, 1, 3]], [[2, 2, 1], [2, 2, 1], [1, 1, 2]]]),
    "max2": MaxLinearMap([[[2, 1], [1, 1]], [[1, 2], [1, 1]]]),
    "compose": ComposedMap([build_example1(), ScaledMap(2, LinearMap([[1, 1], [0, 1]]))]),
}


def _both():
    try:
        return kernels.backend_module("python"), kernels.backend_module("cython")
    except ImportError:
        pytest.skip("compiled backend not built")


@pytest.mark.parametrize("name", sorted(MAPS))
def test_backends_agree_on_apply(name):
    py, cy = _both()
    T = MAPS[name]
    X = sample_points(T.cone, np.random.default_rng(0), 500)
    a = kernels.apply_batch(T.plan, X, 1e-9, impl=py)
    b = kernels.apply_batch(T.plan, X, 1e-9, impl=cy)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("name", sorted(MAPS))
def test_float_path_matches_exact_path(name, backend):
    T = MAPS[name]
    rng = np.random.default_rng(1)
    for x in rng.integers(0, 40, size=(50, T.dim)):
        x = tuple(int(v) for v in x)
        np.testing.assert_allclose(T.apply(np.array(x, float)), np.array(T.apply_exact(x), float), rtol=1e-12)


@pytest.mark.parametrize("name", sorted(MAPS))
def test_backends_agree_on_orbits(name):
    py, cy = _both()
    T = MAPS[name]
    X = sample_points(T.cone, np.random.default_rng(2), 64)
    La, Xa = kernels.orbit_lognorms(T.plan, X, 32, 1e-9, impl=py)
    Lb, Xb = kernels.orbit_lognorms(T.plan, X, 32, 1e-9, impl=cy)
    np.testing.assert_allclose(La, Lb, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(Xa, Xb, rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("name", ["linear", "sector", "min3"])
def test_backends_agree_on_power_iteration(name):
    py, cy = _both()
    T = MAPS[name]
    X = sample_points(T.cone, np.random.default_rng(3), 32)
    sa, xa, la, ia = kernels.power_iterate(T.plan, X, 5000, 1e-12, 1e-9, impl=py)
    sb, xb, lb, ib = kernels.power_iterate(T.plan, X, 5000, 1e-12, 1e-9, impl=cy)
    np.testing.assert_array_equal(sa, sb)
    np.testing.assert_allclose(la, lb, rtol=1e-10)
    np.testing.assert_allclose(xa, xb, atol=1e-9)


def test_zero_orbit_gives_minus_infinity(backend):
    T = LinearMap([[0, 1], [0, 0]])
    L, _ = kernels.orbit_lognorms(T.plan, np.array([[0.0, 1.0]]), 4, 1e-9)
    assert np.isfinite(L[0, 0]) and np.all(np.isneginf(L[0, 1:]))


def test_pure_python_selected_by_environment():
    env = dict(os.environ, CONEPF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from conepf import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_benchmark_runs():
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--starts", "50", "--steps", "8", "--repeat", "1"],
                         capture_output=True, text=True, timeout=300)
    assert out.returncode == 0, out.stderr
    assert "linear 3x3" in out.stdout
