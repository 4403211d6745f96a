"""Acceptance gate: one test per criterion, each reported as a PASS/FAIL
line in the terminal summary (see conftest)."""

import time
from fractions import Fraction

import numpy as np
import pytest

from conepf import _rational as Q
from conepf.cone import PolyhedralCone, contains, interior_contains, on_boundary, sample_boundary_exact, sample_points_exact
from conepf.counterexample import build_example1, refutation_report
from conepf.hypotheses import BETA_GRID, beta_grid, beta_reduction, check_B1, check_B2
from conepf.maps import LinearMap, MinLinearMap, check_superadditive
from conepf.spectral import (
    bonsall_radius, enumerate_eigenpairs_pwl, orbit_growth_check, power_iteration, spectral_report,
)
from conepf.superadditive import analyze_superadditive
from conepf.verdicts import Verdict

from cli_suite import run_suite
from oracles import orthant_support_rule, perron_root

T1 = build_example1()


def _positive(rng, n, lo=1, hi=9):
    return rng.integers(lo, hi + 1, size=(n, n)).tolist()


def suite_maps():
    """Random positive linear maps, the sector map and min-of-linear maps."""
    rng = np.random.default_rng(2024)
    maps = []
    for n in (2, 3):
        for k in range(6):
            maps.append((f"linear{n}d-{k}", LinearMap(_positive(rng, n))))
    maps.append(("sector map", T1))
    for n, m in ((2, 2), (2, 3), (3, 2), (3, 2), (2, 2), (3, 3), (2, 4), (3, 2)):
        maps.append((f"min{m}x{n}d-{len(maps)}", MinLinearMap([_positive(rng, n) for _ in range(m)])))
    return maps


SUITE = suite_maps()


@pytest.mark.criterion("counterexample refutation")
def test_counterexample_refutation(record_property):
    t0 = time.perf_counter()
    rep = refutation_report()
    seconds = time.perf_counter() - t0
    order = rep.hypotheses[0].data
    strong = [c for c in rep.hypotheses if c.claim.startswith("strongly positive")][0].data
    eig = [c for c in rep.eigenvectors if c.claim.startswith("T(")]
    dim = [c for c in rep.eigencone if "oracle" in c.claim][0].data["dimension"]
    # independent exact re-check of the three eigenvectors
    rays = [(2, 1), (1, 1), (1, 2)]
    exact = all(T1.apply_exact(r) == (3 * r[0], 3 * r[1]) for r in rays)
    distinct = all(not Q.same_ray(a, b) for i, a in enumerate(rays) for b in rays[i + 1:])
    record_property("detail", f"{order['pairs']} pairs, {order['violations']} violations, "
                              f"{strong['boundary_samples']} boundary samples, eigencone dim {dim}, {seconds:.2f}s")
    assert rep.ok
    assert order["pairs"] >= 100_000 and order["violations"] == 0 and len(order["per_case"]) == 9
    assert strong["boundary_samples"] >= 1000 and not strong["violations"]
    assert all(interior_contains(T1.cone, T1.apply_exact(r)) for r in [(1, 0), (0, 1)])
    assert len(eig) == 3 and all(c.holds for c in eig) and exact and distinct
    assert dim == 2
    assert seconds <= 10


@pytest.mark.criterion("spectral chain")
def test_spectral_chain(record_property):
    t0 = time.perf_counter()
    bad, perron_err = [], 0.0
    for name, T in SUITE:
        rep = spectral_report(T, n_max=64, chain_tol=1e-2)
        c = rep.chain
        if not (c["r_hat"] <= c["mu_max"] + 1e-2 and c["mu_max"] <= c["bonsall"] + 1e-2):
            bad.append((name, c))
        if isinstance(T, LinearMap):
            p = power_iteration(T, np.ones(T.dim))
            err = abs(p.lam - perron_root(T.matrix))
            perron_err = max(perron_err, err)
            if err > 1e-8:
                bad.append((name, "perron", err))
    seconds = time.perf_counter() - t0
    kinds = [type(T).__name__ for _, T in SUITE]
    record_property("detail", f"{len(SUITE)} maps, max power-iteration vs Perron error {perron_err:.1e}, "
                              f"{seconds:.1f}s")
    assert len(SUITE) >= 20 and kinds.count("MinLinearMap") >= 5 and "SectorMap" in kinds
    assert not bad, bad
    assert seconds <= 60


@pytest.mark.criterion("counterexample spectral values")
def test_counterexample_spectral_values(record_property):
    bon = bonsall_radius(T1, n_max=64).value
    oracle = enumerate_eigenpairs_pwl(T1)
    p1 = power_iteration(T1, (1, 0))
    p2 = power_iteration(T1, (0, 1))
    e1 = np.linalg.norm(p1.x - np.array([2, 1]) / np.sqrt(5))
    e2 = np.linalg.norm(p2.x - np.array([1, 2]) / np.sqrt(5))
    record_property("detail", f"Bonsall {bon:.12g}, r_hat {oracle.r_hat.extra.get('exact_value')}, "
                              f"ray errors {e1:.1e}/{e2:.1e}")
    assert abs(bon - 3) <= 1e-3
    assert oracle.r_hat.extra.get("exact_value") == "3"
    assert {str(p.exact_lambda) for p in oracle.pairs} == {"3"}
    assert e1 <= 1e-10 and e2 <= 1e-10
    assert abs(p1.lam - 3) <= 1e-10 and abs(p2.lam - 3) <= 1e-10


def _reduction_maps():
    sector = PolyhedralCone.from_normals([(2, -1), (-1, 2)])
    wedge3 = PolyhedralCone.from_normals([(1, 0, 0), (0, 1, 0), (1, 1, -1), (0, 0, 1)])
    return [
        LinearMap([[1, 0], [0, 1]]), LinearMap([[1, 1], [0, 1]]), LinearMap([[2, 1], [1, 2]]),
        LinearMap([[1, 0, 0], [1, 1, 0], [0, 0, 2]]), T1,
        MinLinearMap([[[2, 1], [0, 1]], [[1, 2], [0, 2]]]),
        MinLinearMap([[[3, 1, 0], [1, 3, 1], [0, 1, 3]], [[2, 2, 1], [2, 2, 1], [1, 1, 2]]]),
        LinearMap([[1, 0], [0, 1]], sector), LinearMap([[3, 1], [1, 3]], sector),
        LinearMap([[1, 0, 0], [0, 1, 0], [0, 0, 1]], wedge3), LinearMap([[1, 1, 0], [0, 1, 1], [0, 0, 1]], wedge3),
    ]


@pytest.mark.criterion("boundary reduction vs beta grid")
def test_reduction_vs_grid(record_property):
    checked = agree = 0
    maps = _reduction_maps()
    for k, T in enumerate(maps):
        rng = np.random.default_rng([k, 11])
        pts = list(T.cone.generators) + sample_boundary_exact(T.cone, rng, 100)
        ys = sample_points_exact(T.cone, rng, 100)
        cases = [(x, T._eval_exact(x)) for x in pts]
        cases += [(x, Q.sub(T._eval_exact(Q.add(y, x)), T._eval_exact(y))) for x, y in zip(pts, ys)]
        for x, v in cases:
            assert on_boundary(T.cone, x)
            feasible, beta_max = beta_reduction(T.cone, x, v)
            grid = beta_grid(T.cone, x, v)
            brute = [b for b in BETA_GRID if contains(T.cone, Q.sub(x, Q.scale(b, v)), 0)]
            ok = (grid is not None) == feasible == bool(brute)
            if feasible and beta_max is not None:
                ok = ok and max(brute) <= beta_max and contains(T.cone, Q.sub(x, Q.scale(beta_max, v)), 0)
            if all(a == PolyhedralCone.orthant(T.dim).facet_normals[i] for i, a in enumerate(T.cone.facet_normals)):
                ok = ok and feasible == orthant_support_rule(x, v)
            checked += 1
            agree += ok
    record_property("detail", f"{agree}/{checked} agree over {len(maps)} maps")
    assert checked >= 1000 and len(maps) >= 10
    assert agree == checked


@pytest.mark.criterion("uniqueness properties under the boundary conditions")
def test_theorem_properties(record_property):
    maps = SUITE + [("identity", LinearMap([[1, 0], [0, 1]])), ("shear", LinearMap([[1, 1], [0, 1]]))]
    b1_maps = b2_maps = 0
    bad = []
    for name, T in maps:
        oracle = enumerate_eigenpairs_pwl(T)
        lams = [p.lam for p in oracle.pairs if p.lam > 0]
        b1 = check_B1(T, budget=300)
        b2 = check_B2(T, budget=300)
        if b1.passed and oracle.pairs:
            b1_maps += 1
            if lams and max(lams) - min(lams) > 1e-12:
                bad.append((name, "several cone eigenvalues", lams))
            if not all(interior_contains(T.cone, p.x) for p in oracle.pairs):
                bad.append((name, "boundary eigenvector"))
        if b2.passed:
            b2_maps += 1
            if not all(oracle.is_single_ray(lam) for lam in set(lams)):
                bad.append((name, "eigencone not a single ray"))
    b2_t1 = check_B2(T1)
    dim_t1 = enumerate_eigenpairs_pwl(T1).eigencone_dimension(3.0)
    record_property("detail", f"{b1_maps} maps with B1 pass, {b2_maps} with B2 pass; "
                              f"sector map B2 {b2_t1.verdict.value}, eigencone dim {dim_t1}")
    assert not bad, bad
    assert b1_maps >= 10 and b2_maps >= 10
    assert b2_t1.failed and dim_t1 == 2


@pytest.mark.criterion("superadditive eigenvalue ordering and bounds")
def test_superadditive_eigen_bounds(record_property):
    rng = np.random.default_rng(77)
    # entries from 1 up make every instance strongly positive, hence B1 holds
    instances = [MinLinearMap([_positive(rng, n, 1, 6) for _ in range(m)]) for n, m in
                 ((2, 2), (2, 3), (3, 2), (2, 2), (3, 3), (2, 4))]
    t0 = time.perf_counter()
    used, bad, off = 0, [], 0
    for k, T in enumerate(instances):
        if check_superadditive(T, "on_space").verdict is not Verdict.PASS_CERTIFIED:
            continue
        if not check_B1(T).passed or bonsall_radius(T).value <= 0:
            continue
        used += 1
        a = analyze_superadditive(T, budget=64, seed=k)
        u = a.uniqueness
        off += len(a.other_eigs)
        if a.pair_minus.lam < a.pair_plus.lam - 1e-9:
            bad.append((k, "ordering", a.pair_minus.lam, a.pair_plus.lam))
        if any(abs(e.lam) > a.pair_plus.lam + 1e-9 for e in a.other_eigs) or not all(a.bound_checks):
            bad.append((k, "off-cone bound"))
        if len(a.bound_checks) != len(a.other_eigs):
            bad.append((k, "off-cone eigenpair not certified"))
        if u["starts"] < 50 or u["converged"] < 50 or not u.get("agree") or u["max_distance"] > 1e-8:
            bad.append((k, "multistart", u))
    seconds = time.perf_counter() - t0
    record_property("detail", f"{used} instances, {off} off-cone eigenvalues checked, {seconds:.1f}s")
    assert used >= 5
    assert not bad, bad
    assert seconds <= 60


def _growth_holds_every_k(T, u, v, M, p, eps, k_max):
    """Independent exact re-check of (M+eps)^k T^(kp) v - (1+eps/M)^k u in K."""
    M, eps = Fraction(M), Fraction(eps)
    x = tuple(Fraction(c) for c in v)
    for k in range(1, k_max + 1):
        for _ in range(p):
            x = T._eval_exact(x)
        lhs = tuple((M + eps) ** k * c for c in x)
        rhs = tuple((1 + eps / M) ** k * c for c in u)
        if not contains(T.cone, tuple(a - b for a, b in zip(lhs, rhs)), 0):
            return False
    return True


@pytest.mark.criterion("orbit growth bound")
def test_orbit_growth(record_property):
    instances = [
        ("linear", LinearMap([[2, 1], [1, 2]]), (1, 1), (1, 1), (0, 0), 1, 1, Fraction(1, 2)),
        ("sector map", T1, (1, 1), (1, 1), (0, 0), 1, 1, 1),
        ("min of linear", MinLinearMap([[[3, 1], [1, 3]], [[2, 2], [2, 2]]]), (1, 1), (1, 1), (0, 0), 1, 1,
         Fraction(1, 2)),
        # u outside the cone: (1, -1) is an eigenvector for 1
        ("linear, u = v - w", LinearMap([[2, 1], [1, 2]]), (1, -1), (1, 0), (0, 1), 1, 1, Fraction(1, 2)),
        ("min of linear, p=2", MinLinearMap([[[1, 2], [1, 1]], [[2, 1], [1, 2]]]), (1, 1), (2, 1), (1, 0), 1, 2,
         Fraction(1, 4)),
    ]
    results = []
    for name, T, u, v, w, M, p, eps in instances:
        verdict = orbit_growth_check(T, u, v, w, M, p, eps, k_max=20)
        indep = True if not T.on_space and not contains(T.cone, u) else _growth_holds_every_k(T, u, v, M, p, eps, 20)
        results.append((name, verdict.verdict is Verdict.PASS_CERTIFIED and verdict.samples == 20, indep))
    record_property("detail", ", ".join(f"{n}: {'ok' if a and b else 'FAIL'}" for n, a, b in results))
    assert len(results) >= 3
    assert all(a and b for _, a, b in results), results


@pytest.mark.criterion("CLI determinism")
def test_cli_determinism(tmp_path, record_property):
    a = run_suite(tmp_path / "a", seed=7, budget=500)
    b = run_suite(tmp_path / "b", seed=7, budget=500)
    same = a == b
    record_property("detail", f"{len(a)} report files, byte-identical: {same}")
    assert a.keys() == b.keys() and len(a) >= 9
    assert same
