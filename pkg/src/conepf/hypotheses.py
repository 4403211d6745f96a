"""Checkers for the growth, boundary and semi-strong hypotheses.

The boundary conditions quantify over every ``beta > 0``. On a polyhedral
cone that quantifier is eliminated exactly: for ``x`` in the cone,

    exists beta > 0 with x - beta v in K  <=>  <a, v> <= 0 for every facet
                                               normal a with <a, x> = 0,

and the feasible betas form the interval ``(0, beta_max]`` with
``beta_max = min <a, x> / <a, v>`` over facets with ``<a, v> > 0``. On the
orthant this is the support condition ``supp(v) <= supp(x)``. Every reduced
decision is cross-checked against a brute geometric grid of betas.

The semi-strong properties are decided on a separate route: by searching
the facet normals (the extreme rays of the dual cone) for a separating
functional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _rational as Q
from . import kernels
from .cone import (
    DEFAULT_TOL, contains, polyhedral_faces, sample_boundary_exact,
    sample_points_exact, semi_strong_witness,
)
from .maps import (
    ConeMap, LinearMap, MapError, Positivity, _structurally_superadditive, as_piecewise,
    classify_positivity,
)
from .verdicts import HypothesisVerdict, Verdict

BETA_GRID = tuple(Fraction(2) ** k for k in range(-20, 5))


class ReductionMismatch(AssertionError):
    """The facet reduction and the beta grid disagree (an artifact bug)."""


# beta quantifier -----------------------------------------------------------------

def beta_reduction(cone, x, v) -> tuple[bool, Optional[Fraction]]:
    """``(feasible, beta_max)`` for ``x - beta v in K`` with ``beta > 0``.

    ``beta_max`` is None when every ``beta > 0`` works.
    """
    feasible = True
    beta_max = None
    for a in cone.facet_normals:
        ax, av = Q.dot(a, x), Q.dot(a, v)
        if ax == 0:
            if av > 0:
                feasible = False
        elif av > 0:
            r = Fraction(ax) / av
            beta_max = r if beta_max is None else min(beta_max, r)
    return feasible, (beta_max if feasible else None)


def beta_grid(cone, x, v) -> Optional[Fraction]:
    """Largest grid beta with ``x - beta v`` in the cone (exact membership)."""
    for beta in reversed(BETA_GRID):
        if contains(cone, Q.sub(x, Q.scale(beta, v))):
            return beta
    return None


@dataclass
class GridAudit:
    checks: int = 0
    agree: int = 0

    def to_dict(self):
        return {"grid_checks": self.checks, "grid_agree": self.agree}


def _decide(cone, x, v, audit: GridAudit):
    """Reduced decision with the grid as a second oracle; returns
    ``(feasible, beta)`` where beta is a feasible step when one exists."""
    feasible, beta_max = beta_reduction(cone, x, v)
    grid = beta_grid(cone, x, v)
    audit.checks += 1
    if feasible:
        consistent = (grid is not None) == (beta_max is None or beta_max >= BETA_GRID[0])
        if grid is not None and beta_max is not None and grid > beta_max:
            consistent = False
    else:
        consistent = grid is None
    if not consistent:
        raise ReductionMismatch(
            f"x={Q.fmt_vector(x)} v={Q.fmt_vector(v)}: reduction {feasible}/{beta_max}, grid {grid}"
        )
    audit.agree += 1
    beta = None
    if feasible:
        beta = 1 if beta_max is None else Q.normalize(beta_max)
    return feasible, beta


# growth hypotheses ---------------------------------------------------------------

def _power_exact(T: ConeMap, x, p: int):
    for _ in range(p):
        x = T._eval_exact(x)
    return x


def check_A1(T: ConeMap, u, v, w, M, p: int) -> HypothesisVerdict:
    """Check ``u = v - w`` with ``v, w`` in K, ``u != 0``, ``-u`` not in K and
    ``M T^p(u) >= u``, exactly. Each failing clause is named in ``detail``."""
    cone = T.cone
    u, v, w = Q.vector(u), Q.vector(v), Q.vector(w)
    Me = Q.to_exact(M)

    def fail(clause, witness):
        return HypothesisVerdict("A1", Verdict.FAIL, witness=witness, detail=f"clause fails: {clause}")

    if not (len(u) == len(v) == len(w) == cone.dim):
        raise ValueError("dimension mismatch")
    if int(p) != p or p < 1:
        raise ValueError("p must be a positive integer")
    if Me <= 0:
        raise ValueError("M must be positive")
    if Q.sub(v, w) != u:
        return fail("u = v - w", (u, v, w))
    if not contains(cone, v):
        return fail("v in K", v)
    if not contains(cone, w):
        return fail("w in K", w)
    if Q.is_zero(u):
        return fail("u != 0", u)
    if contains(cone, Q.neg(u)):
        return fail("-u not in K", u)
    if not T.on_space and not contains(cone, u):
        return HypothesisVerdict("A1", Verdict.UNKNOWN, detail="u lies outside the domain of T")
    Tu = _power_exact(T, u, int(p))
    gap = Q.sub(Q.scale(Me, Tu), u)
    if not contains(cone, gap):
        return fail("M T^p(u) >= u", u)
    return HypothesisVerdict(
        "A1", Verdict.PASS_CERTIFIED,
        detail=f"M T^p(u) - u = {Q.fmt_vector(gap)} in K", extra={"T^p(u)": [str(c) for c in Tu]},
    )


def check_A2_orbit(
    T: ConeMap, x, bound_threshold: float = 1e6, k_max: int = 64, tol: float = DEFAULT_TOL
) -> HypothesisVerdict:
    """Finite-horizon test for an unbounded orbit of ``x``.

    Passes (sampled) when ``|T^k x|`` exceeds ``bound_threshold`` for some
    ``k <= k_max``; fails when the orbit settles at a fixed point below the
    threshold (including reaching 0); otherwise the verdict is unknown.
    """
    xf = np.asarray(x, dtype=float)
    nx = float(np.linalg.norm(xf))
    if nx == 0:
        return HypothesisVerdict("A2", Verdict.FAIL, witness=tuple(x), detail="orbit of 0 is bounded")
    if not contains(T.cone, xf, tol * max(1.0, nx)):
        raise MapError("outside cone")
    L, _ = kernels.orbit_lognorms(T.plan, xf[None, :], k_max, tol)
    L = L[0] + np.log(nx)
    if np.any(L > np.log(bound_threshold)):
        k = int(np.argmax(L > np.log(bound_threshold))) + 1
        return HypothesisVerdict(
            "A2", Verdict.PASS_SAMPLED, samples=k,
            detail=f"|T^{k} x| exceeds {bound_threshold:g} (finite-horizon surrogate for unboundedness)",
        )
    if not np.isfinite(L[-1]):
        return HypothesisVerdict("A2", Verdict.FAIL, witness=tuple(x), samples=k_max,
                                 detail="orbit reaches 0")
    # the orbit stayed below the threshold, so plain iteration cannot overflow
    cur = xf[None, :]
    prev = None
    for k in range(k_max):
        prev, cur = cur, T.apply_many(cur, tol)
    step = float(np.linalg.norm(cur - prev))
    if step <= 1e-12 * max(1.0, float(np.linalg.norm(cur))):
        return HypothesisVerdict(
            "A2", Verdict.FAIL, witness=tuple(x), samples=k_max,
            detail=f"orbit converges to a fixed point of norm {np.linalg.norm(cur):.6g}",
        )
    return HypothesisVerdict("A2", Verdict.UNKNOWN, samples=k_max,
                             detail="orbit bounded on the horizon without settling")


# boundary hypotheses ---------------------------------------------------------------

def _require_positive(T: ConeMap, name: str):
    pos = classify_positivity(T)
    if pos.grade < Positivity.POSITIVE:
        raise MapError(f"{name} presumes a positive map; T({Q.fmt_vector(pos.witness)}) leaves the cone")
    return pos


def boundary_face_points(T: ConeMap) -> Optional[list]:
    """``(x, region)`` for the barycenter of every face of every region
    closure that lies in the cone boundary; None without a piecewise form.

    A condition linear on a region and nonnegative on its rays holds on the
    relative interior of a face exactly when it holds at the face's ray
    sum, so these points decide the boundary conditions exactly.
    """
    try:
        P = as_piecewise(T)
    except MapError:
        return None
    cone = T.cone
    out = []
    seen = set()
    for i, r in enumerate(P.regions):
        rows = list(r.rows) + list(cone.facet_normals)
        for face in sorted(polyhedral_faces(rows, cone.dim), key=len):
            active = [a for a in cone.facet_normals if all(Q.dot(a, g) == 0 for g in face)]
            if not active:
                continue
            x = (0,) * cone.dim
            for g in face:
                x = Q.add(x, g)
            x = Q.primitive(x)
            if x not in seen:
                seen.add(x)
                out.append((x, i))
    return out


def _boundary_samples(T: ConeMap, budget: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    pts = list(T.cone.generators)
    faces = boundary_face_points(T)
    if faces:
        pts += [x for x, _ in faces]
    pts += sample_boundary_exact(T.cone, rng, budget)
    return pts


def check_B1(T: ConeMap, budget: int = 1000, seed: int = 0) -> HypothesisVerdict:
    """``x - beta T(x)`` is outside the cone for every nonzero boundary ``x``
    and ``beta > 0``.

    Certified for maps with a piecewise-linear form via the boundary faces
    of the region closures; sampled otherwise. The grid audit runs on every
    point either way.
    """
    _require_positive(T, "B1")
    cone = T.cone
    audit = GridAudit()
    faces = boundary_face_points(T)
    pts = _boundary_samples(T, budget, seed)
    for x in pts:
        feasible, beta = _decide(cone, x, T._eval_exact(x), audit)
        if feasible:
            return HypothesisVerdict(
                "B1", Verdict.FAIL, witness=x, beta=beta, samples=audit.checks,
                detail=f"x - beta T(x) in K for beta in (0, {Q.fmt(beta)}]" if beta is not None else "",
                extra=audit.to_dict(),
            )
    verdict = Verdict.PASS_CERTIFIED if faces is not None else Verdict.PASS_SAMPLED
    detail = "boundary faces of every region" if faces is not None else "sampled boundary points"
    return HypothesisVerdict("B1", verdict, samples=audit.checks, detail=detail, extra=audit.to_dict())


def boundary_pairs(T: ConeMap, budget: int, seed: int) -> list:
    """Exact pairs ``(x, y)`` with ``x - y`` a nonzero boundary vector.

    The difference is fixed first (face barycenters, generators and random
    boundary points), then ``y`` is drawn from the cone; the pairs
    ``(d, 0)`` are always included.
    """
    rng = np.random.default_rng([seed, 7])
    n = T.dim
    diffs = _boundary_samples(T, budget, seed)
    pairs = [(d, (0,) * n) for d in diffs]
    ys = sample_points_exact(T.cone, rng, budget, max_den=100)
    for y in ys:
        d = diffs[int(rng.integers(len(diffs)))]
        pairs.append((Q.add(y, Q.scale(int(rng.integers(1, 11)), d)), y))
    return pairs


def check_B2(T: ConeMap, budget: int = 1000, seed: int = 0) -> HypothesisVerdict:
    """``x - y - beta (T(x) - T(y))`` is outside the cone whenever ``x - y``
    is a nonzero boundary vector and ``beta > 0``.

    Certified for linear maps (where it coincides with the first boundary
    condition); sampled otherwise.
    """
    cone = T.cone
    audit = GridAudit()
    pairs = boundary_pairs(T, budget, seed)
    for x, y in pairs:
        d = Q.sub(x, y)
        feasible, beta = _decide(cone, d, Q.sub(T._eval_exact(x), T._eval_exact(y)), audit)
        if feasible:
            return HypothesisVerdict(
                "B2", Verdict.FAIL, witness=(x, y), beta=beta, samples=audit.checks,
                detail=f"x - y - beta (T(x) - T(y)) in K for beta in (0, {Q.fmt(beta)}]",
                extra=audit.to_dict(),
            )
    if isinstance(T, LinearMap):
        b1 = check_B1(T, 0, seed)
        if b1.verdict is Verdict.PASS_CERTIFIED:
            return HypothesisVerdict("B2", Verdict.PASS_CERTIFIED, samples=audit.checks,
                                     detail="linear: reduces to the boundary faces", extra=audit.to_dict())
    return HypothesisVerdict("B2", Verdict.PASS_SAMPLED, samples=audit.checks, extra=audit.to_dict())


def check_SSP(T: ConeMap, budget: int = 1000, seed: int = 0) -> HypothesisVerdict:
    """Every nonzero boundary ``x`` has a dual functional vanishing on ``x``
    and positive on ``T(x)``."""
    faces = boundary_face_points(T)
    pts = _boundary_samples(T, budget, seed)
    for x in pts:
        if semi_strong_witness(T.cone, x, T._eval_exact(x)) is None:
            return HypothesisVerdict("SSP", Verdict.FAIL, witness=x, samples=len(pts),
                                     detail="no facet normal separates T(x) from the face of x")
    verdict = Verdict.PASS_CERTIFIED if faces is not None else Verdict.PASS_SAMPLED
    return HypothesisVerdict("SSP", verdict, samples=len(pts))


def check_SSI(T: ConeMap, budget: int = 1000, seed: int = 0) -> HypothesisVerdict:
    """Every pair with ``x - y`` a nonzero boundary vector has a dual
    functional vanishing on ``x - y`` and positive on ``T(x) - T(y)``."""
    pairs = boundary_pairs(T, budget, seed)
    for x, y in pairs:
        d = Q.sub(x, y)
        if semi_strong_witness(T.cone, d, Q.sub(T._eval_exact(x), T._eval_exact(y))) is None:
            return HypothesisVerdict("SSI", Verdict.FAIL, witness=(x, y), samples=len(pairs),
                                     detail="no facet normal separates T(x) - T(y) from the face of x - y")
    return HypothesisVerdict("SSI", Verdict.PASS_SAMPLED, samples=len(pairs))


# implication lattice ----------------------------------------------------------------

@dataclass
class ImplicationAudit:
    verdicts: dict
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "consistent": self.consistent,
            "violations": self.violations,
            "notes": self.notes,
        }


def implication_audit(T: ConeMap, budget: int = 1000, seed: int = 0) -> ImplicationAudit:
    """Run every boundary checker and check the implications among them.

    SSP => B1, B2 => B1, SSI => B2, and B1 => B2 for structurally
    superadditive maps. With facet normals as the dual candidates, SSP and
    B1 (and SSI and B2) decide the same condition by different routes, so
    they must agree outright. A violation is an artifact bug.
    """
    v = {}
    notes = []
    try:
        v["B1"] = check_B1(T, budget, seed)
    except MapError as exc:
        notes.append(f"B1 not applicable: {exc}")
    v["B2"] = check_B2(T, budget, seed)
    v["SSP"] = check_SSP(T, budget, seed)
    v["SSI"] = check_SSI(T, budget, seed)
    bad = []

    def implies(a, b, label):
        if a in v and b in v and v[a].passed and v[b].failed:
            bad.append(f"{label}: {a} passes but {b} fails")

    implies("SSP", "B1", "SSP => B1")
    implies("B2", "B1", "B2 => B1")
    implies("SSI", "B2", "SSI => B2")
    if T.on_space and _structurally_superadditive(T):
        implies("B1", "B2", "B1 => B2 (superadditive)")
    for a, b in (("SSP", "B1"), ("SSI", "B2")):
        if a in v and b in v and v[a].passed != v[b].passed:
            bad.append(f"{a} and {b} disagree on a polyhedral cone")
    return ImplicationAudit(v, bad, notes)
