from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conepf.cone import PolyhedralCone, contains, on_boundary
from conepf.counterexample import build_example1
from conepf.hypotheses import (
    BETA_GRID, ReductionMismatch, _decide, GridAudit, beta_grid, beta_reduction,
    boundary_face_points, check_A1, check_A2_orbit, check_B1, check_B2, check_SSI, check_SSP,
    implication_audit,
)
from conepf.maps import LinearMap, MapError, MinLinearMap
from conepf.verdicts import Verdict

from oracles import orthant_beta_brute, orthant_support_rule

K2 = PolyhedralCone.orthant(2)
K3 = PolyhedralCone.orthant(3)
SECTOR = PolyhedralCone.from_normals([(2, -1), (-1, 2)])
T1 = build_example1()
IDENT = LinearMap([[1, 0], [0, 1]])
SYM = LinearMap([[2, 1], [1, 2]])

ints = st.integers(-6, 6)


def _sub(a, b):
    return tuple(p - q for p, q in zip(a, b))


def _recheck_b1_witness(T, x, beta):
    assert on_boundary(T.cone, x)
    assert contains(T.cone, _sub(x, tuple(beta * c for c in T.apply_exact(x))), 0)


# beta quantifier ------------------------------------------------------------------

@given(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)), st.tuples(ints, ints, ints))
def test_reduction_matches_support_rule_on_orthant(x, v):
    feasible, beta_max = beta_reduction(K3, x, v)
    assert feasible is orthant_support_rule(x, v)
    brute = orthant_beta_brute(x, v)
    if feasible and (beta_max is None or beta_max >= BETA_GRID[0]):
        assert brute and max(brute) == beta_grid(K3, x, v)
    if not feasible:
        assert not brute


@given(st.integers(0, 1), st.integers(1, 8), st.tuples(ints, ints))
def test_reduction_matches_grid_on_sector(which, scale, v):
    x = ((2, 1), (1, 2))[which]
    x = (scale * x[0], scale * x[1])
    feasible, beta_max = beta_reduction(SECTOR, x, v)
    grid = beta_grid(SECTOR, x, v)
    if not feasible:
        assert grid is None
    elif beta_max is None:
        assert grid == BETA_GRID[-1]
    elif beta_max >= BETA_GRID[0]:
        assert grid is not None and grid <= beta_max
        assert contains(SECTOR, _sub(x, tuple(beta_max * c for c in v)), 0)


def test_beta_max_is_sharp():
    feasible, beta_max = beta_reduction(K2, (3, 0), (2, 0))
    assert feasible and beta_max == Fraction(3, 2)
    assert beta_reduction(K2, (3, 0), (-1, 0)) == (True, None)
    assert beta_reduction(K2, (3, 0), (1, 1)) == (False, None)


def test_grid_disagreement_is_reported(monkeypatch):
    audit = GridAudit()
    assert _decide(K2, (1, 0), (1, 0), audit) == (True, 1)
    assert audit.checks == audit.agree == 1
    # a grid hit where the reduction says infeasible must be reported
    monkeypatch.setattr("conepf.hypotheses.beta_reduction", lambda cone, x, v: (False, None))
    with pytest.raises(ReductionMismatch):
        _decide(K2, (1, 0), (1, 0), GridAudit())


# growth hypotheses ----------------------------------------------------------------

def test_A1_examples():
    assert check_A1(T1, (1, 1), (1, 1), (0, 0), 1, 1).verdict is Verdict.PASS_CERTIFIED
    v = check_A1(LinearMap([[0, 1], [0, 0]]), (0, 1), (0, 1), (0, 0), 1, 2)
    assert v.failed and "M T^p(u) >= u" in v.detail
    v = check_A1(T1, (0, 0), (0, 0), (0, 0), 1, 1)
    assert v.failed and "u != 0" in v.detail


def test_A1_other_clauses():
    assert "u = v - w" in check_A1(SYM, (1, 1), (2, 2), (0, 0), 1, 1).detail
    assert "-u not in K" in check_A1(SYM, (-1, -1), (0, 0), (1, 1), 1, 1).detail
    # (1, -1) is an eigenvector for 1, so M T(u) - u = 0 lies in K
    assert check_A1(SYM, (1, -1), (1, 0), (0, 1), 1, 1).verdict is Verdict.PASS_CERTIFIED
    assert "M T^p(u) >= u" in check_A1(SYM, (1, -1), (1, 0), (0, 1), Fraction(1, 2), 1).detail
    with pytest.raises(ValueError):
        check_A1(SYM, (1, 1), (1, 1), (0, 0), 1, 0)
    with pytest.raises(ValueError):
        check_A1(SYM, (1, 1), (1, 1), (0, 0), 0, 1)


def test_A1_outside_domain_of_cone_map_is_unknown():
    v = check_A1(T1, (1, -1), (1, 0), (0, 1), 1, 1)
    assert v.verdict is Verdict.UNKNOWN


def test_A2_examples():
    assert check_A2_orbit(LinearMap([[2, 0], [0, 2]]), (1, 1), 1e6, 64).verdict is Verdict.PASS_SAMPLED
    assert check_A2_orbit(LinearMap([[Fraction(1, 2), 0], [0, Fraction(1, 2)]]), (1, 1)).failed
    assert check_A2_orbit(T1, (1, 0), 1e6).verdict is Verdict.PASS_SAMPLED
    assert check_A2_orbit(IDENT, (1, 1)).failed
    rot = LinearMap([[0, 1], [1, 0]])
    assert check_A2_orbit(rot, (1, 0)).verdict is Verdict.UNKNOWN


# boundary hypotheses ----------------------------------------------------------------

def test_B1_examples():
    v = check_B1(T1)
    assert v.verdict is Verdict.PASS_CERTIFIED
    for T in (IDENT, LinearMap([[1, 1], [0, 1]])):
        v = check_B1(T)
        assert v.failed
        _recheck_b1_witness(T, v.witness, v.beta)
    v = check_B1(LinearMap([[1, 1], [0, 1]]))
    assert v.witness == (1, 0)


def test_B1_requires_positive_map():
    with pytest.raises(MapError):
        check_B1(LinearMap([[1, -1], [0, 1]]))


def test_B2_examples():
    assert check_B2(SYM).verdict is Verdict.PASS_CERTIFIED
    for T in (IDENT, T1):
        v = check_B2(T)
        assert v.failed
        x, y = v.witness
        d = _sub(x, y)
        assert on_boundary(T.cone, d)
        assert contains(T.cone, _sub(d, tuple(v.beta * c for c in _sub(T.apply_exact(x), T.apply_exact(y)))), 0)


def test_semi_strong_examples():
    assert check_SSP(T1).passed
    v = check_SSI(T1)
    assert v.failed
    assert check_SSP(IDENT).failed


def test_face_points_cover_sector_boundaries():
    pts = {x for x, _ in boundary_face_points(T1)}
    assert {(1, 0), (0, 1)} <= pts
    assert all(on_boundary(K2, x) for x in pts)


@pytest.mark.parametrize("T, want", [
    (T1, {"SSP": True, "B1": True, "B2": False, "SSI": False}),
    (SYM, {"SSP": True, "B1": True, "B2": True, "SSI": True}),
    (IDENT, {"SSP": False, "B1": False, "B2": False, "SSI": False}),
])
def test_implication_audit_examples(T, want):
    audit = implication_audit(T)
    assert audit.consistent, audit.violations
    assert {k: v.passed for k, v in audit.verdicts.items()} == want


@pytest.mark.parametrize("seed", range(4))
def test_implication_audit_random_min_maps(seed):
    rng = np.random.default_rng(seed)
    mats = [rng.integers(0, 4, size=(2, 2)).tolist() for _ in range(2)]
    T = MinLinearMap(mats)
    audit = implication_audit(T, budget=200, seed=seed)
    assert audit.consistent, audit.violations
