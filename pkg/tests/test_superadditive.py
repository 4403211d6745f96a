import numpy as np
import pytest

from conepf.counterexample import build_example1
from conepf.maps import LinearMap, MapError, MaxLinearMap, MinLinearMap
from conepf.spectral import EigenPair, SpaceEigen
from conepf.superadditive import analyze_superadditive, eigenvalue_bound_check, uniqueness_via_boundary_ray

from oracles import perron_root

SYM = LinearMap([[2, 1], [1, 2]])
IDENT = LinearMap([[1, 0], [0, 1]])
MIN_DEMO = MinLinearMap([[[3, 1], [1, 3]], [[2, 2], [2, 2]]])
MIN_B1_FAIL = MinLinearMap([[[2, 1], [0, 1]], [[1, 2], [0, 2]]])
R2 = 1 / np.sqrt(2)


def _pair(lam, x):
    return EigenPair(lam, np.asarray(x, float), "interior", "given", 0.0)


def test_linear_example():
    a = analyze_superadditive(SYM)
    assert a.pair_plus.lam == pytest.approx(3, abs=1e-9)
    assert a.pair_minus.lam == pytest.approx(3, abs=1e-9)
    np.testing.assert_allclose(a.pair_plus.x, [R2, R2], atol=1e-8)
    np.testing.assert_allclose(a.pair_minus.x, [-R2, -R2], atol=1e-8)
    assert [round(e.lam, 9) for e in a.other_eigs] == [1.0]
    assert a.ok and all(a.bound_checks)


def test_min_linear_demo():
    a = analyze_superadditive(MIN_DEMO)
    assert a.ordering_ok and a.pair_minus.lam >= a.pair_plus.lam - 1e-9
    assert a.b1.passed and a.uniqueness["agree"]
    assert a.ok
    # lam_plus against the piece that is active on the Perron ray
    assert a.pair_plus.lam == pytest.approx(min(perron_root([[3, 1], [1, 3]]), perron_root([[2, 2], [2, 2]])))


def test_b1_failure_skips_uniqueness():
    a = analyze_superadditive(MIN_B1_FAIL)
    assert not a.b1.passed
    assert "skipped" in a.uniqueness
    assert any("B1 fails" in n for n in a.notes)


def test_errors():
    with pytest.raises(MapError):
        analyze_superadditive(MaxLinearMap([[[2, 1], [1, 1]], [[1, 2], [1, 1]]]))
    with pytest.raises(MapError):
        analyze_superadditive(build_example1())
    with pytest.raises(ValueError, match="no positive eigenvalue"):
        analyze_superadditive(LinearMap([[0, 0], [0, 0]]))


def test_bound_check_examples():
    assert eigenvalue_bound_check(SYM, _pair(3, [R2, R2]), _pair(1, [R2, -R2]))
    swap = LinearMap([[0, 1], [1, 0]])
    b = eigenvalue_bound_check(swap, _pair(1, [R2, R2]), _pair(-1, [R2, -R2]))
    assert b.holds and b.lam == -1


def test_bound_check_errors():
    with pytest.raises(ValueError, match="wrong stratum"):
        eigenvalue_bound_check(SYM, _pair(3, [R2, R2]), _pair(3, [R2, R2]))
    with pytest.raises(ValueError, match="not an eigenpair"):
        eigenvalue_bound_check(SYM, _pair(3, [R2, R2]), _pair(2, [R2, -R2]))


def test_uniqueness_examples():
    c = uniqueness_via_boundary_ray(SYM, [R2, R2], [R2, R2])
    assert c.status == "duplicate" and c.alpha == pytest.approx(1)
    c = uniqueness_via_boundary_ray(IDENT, (0.8, 0.6), (0.6, 0.8))
    assert c.alpha == pytest.approx(0.75)
    np.testing.assert_allclose(c.z, [0.35, 0], atol=1e-12)
    c = uniqueness_via_boundary_ray(IDENT, (0.6, 0.8), (1, 0))
    assert c.alpha == pytest.approx(0.6)
    np.testing.assert_allclose(c.z, [0, 0.8], atol=1e-12)
    c = uniqueness_via_boundary_ray(IDENT, (1, 0), (0.6, 0.8))
    assert c.status == "degenerate" and c.alpha == 0


def test_uniqueness_contradiction_for_distinct_eigenvectors():
    # identity: every vector is an eigenvector for 1, and B1 fails, so the
    # argument's premise is exactly what breaks; the certificate still finds
    # z on the boundary with z - T(z) in the cone
    c = uniqueness_via_boundary_ray(IDENT, (0.8, 0.6), (0.6, 0.8), lam=1.0)
    assert c.status == "contradiction"


@pytest.mark.parametrize("seed", range(3))
def test_off_cone_eigs_bounded_on_random_min_maps(seed):
    rng = np.random.default_rng(seed)
    T = MinLinearMap([rng.integers(1, 6, size=(2, 2)).tolist() for _ in range(2)])
    a = analyze_superadditive(T, seed=seed)
    for e in a.other_eigs:
        assert isinstance(e, SpaceEigen)
        assert abs(e.lam) <= a.pair_plus.lam + 1e-9
    assert a.ordering_ok
