"""Eigenpairs of superadditive maps in the cone and its negative.

For a positive superadditive map ``T`` on all of ``R^n`` the conjugate
``S(x) = -T(-x)`` dominates ``T`` on the cone. The eigenpair of ``T`` in
``K`` and that of ``S`` in ``K`` (mapped to ``-K``) give ``lam_plus`` and
``lam_minus``. Under the first boundary condition we check
``lam_minus >= lam_plus``, ``|lam| <= lam_plus`` for every real eigenvalue
with an eigenvector outside both cones, and uniqueness of the cone
eigenvector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cone import contains, sample_boundary, sample_points
from .hypotheses import check_B1, check_B2
from .maps import (
    ConeMap, MapError, Positivity, _structurally_superadditive, classify_positivity,
    negate_conjugate,
)
from .spectral import (
    EigenPair, bonsall_radius, enumerate_eigenpairs_pwl,
    power_iteration_multistart, real_eigenvalues_on_space,
)
from .verdicts import HypothesisVerdict


@dataclass
class BoundCheck:
    holds: bool
    lam: float
    lam_plus: float
    x: np.ndarray

    def __bool__(self):
        return self.holds

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({"holds": self.holds, "lambda": self.lam, "lambda_plus": self.lam_plus, "x": self.x})


def _in_cone(cone, x, tol) -> bool:
    return contains(cone, x, tol * max(1.0, float(np.linalg.norm(x))))


def eigenvalue_bound_check(
    T: ConeMap, pair_plus: EigenPair, eig, tol: float = 1e-9, residual_tol: float = 1e-8,
) -> BoundCheck:
    """``|lam| <= lam_plus`` for an eigenpair ``eig`` outside both cones."""
    x = np.asarray(eig.x, dtype=float)
    if _in_cone(T.cone, x, tol) or _in_cone(T.cone, -x, tol):
        raise ValueError("wrong stratum: eigenvector lies in the cone or its negative")
    res = float(np.linalg.norm(T.apply_many(x[None, :])[0] - eig.lam * x))
    if res > residual_tol * max(1.0, abs(eig.lam)) * np.linalg.norm(x):
        raise ValueError(f"not an eigenpair: residual {res:.3g}")
    return BoundCheck(bool(abs(eig.lam) <= pair_plus.lam + tol), float(eig.lam), float(pair_plus.lam), x)


@dataclass
class UniquenessCertificate:
    alpha: float
    z: np.ndarray
    status: str             # duplicate | degenerate | contradiction | inconclusive
    detail: str = ""

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({"alpha": self.alpha, "z": self.z, "status": self.status, "detail": self.detail})


def uniqueness_via_boundary_ray(
    T: ConeMap, x0, y0, lam: Optional[float] = None, tol: float = 1e-8,
) -> UniquenessCertificate:
    """Push ``x0`` back along ``y0`` to the boundary and test the result.

    ``alpha = max{a : x0 - a y0 in K}`` (on the orthant the smallest
    coordinate ratio). If ``z = x0 - alpha y0`` vanishes the two vectors are
    the same ray. Otherwise superadditivity gives ``T(z) <= T(x0) - alpha
    T(y0) = lam z`` for eigenvectors with a common eigenvalue ``lam``, so
    ``z - T(z)/lam`` lies in the cone, which the first boundary condition
    forbids: two genuinely distinct eigenvectors would be a contradiction.
    """
    cone = T.cone
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    F = cone.normals_f
    fy, fx = F @ y0, F @ x0
    pos = fy > 1e-15
    if not np.any(pos):
        raise ValueError("y0 must be a nonzero cone vector")
    alpha = float(np.min(fx[pos] / fy[pos]))
    z = x0 - alpha * y0
    if alpha <= 0:
        return UniquenessCertificate(alpha, z, "degenerate", "x0 lies on a face that y0 leaves")
    if np.linalg.norm(z) <= tol:
        return UniquenessCertificate(alpha, z, "duplicate", "x0 and y0 span the same ray")
    if lam is None:
        return UniquenessCertificate(alpha, z, "inconclusive", "z on the boundary; no eigenvalue given")
    Tz = T.apply_many(z[None, :])[0]
    bound = T.apply_many(x0[None, :])[0] - alpha * T.apply_many(y0[None, :])[0]
    sup_ok = _in_cone(cone, bound - Tz, tol)
    eig_ok = np.linalg.norm(bound - lam * z) <= tol * max(1.0, lam)
    if sup_ok and eig_ok and lam > 0:
        return UniquenessCertificate(
            alpha, z, "contradiction",
            "z - T(z)/lam lies in the cone with z on the boundary, violating the boundary condition",
        )
    return UniquenessCertificate(alpha, z, "inconclusive", "superadditive or eigen relation not confirmed")


@dataclass
class SuperadditiveAnalysis:
    map: ConeMap
    pair_plus: EigenPair
    pair_minus: EigenPair
    other_eigs: list
    b1: HypothesisVerdict
    b1_conjugate: HypothesisVerdict
    b2: HypothesisVerdict
    bonsall: float
    bound_checks: list
    ordering_ok: bool
    uniqueness: dict
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.ordering_ok and all(self.bound_checks)
            and (not self.b1.passed or self.uniqueness.get("agree", False))
        )

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({
            "map": self.map.to_dict(),
            "lambda_plus": self.pair_plus.lam,
            "x_plus": self.pair_plus.x,
            "lambda_minus": self.pair_minus.lam,
            "x_minus": self.pair_minus.x,
            "ordering_ok": self.ordering_ok,
            "bonsall": self.bonsall,
            "off_cone_eigenvalues": [e.to_dict() for e in self.other_eigs],
            "bound_checks": [b.to_dict() for b in self.bound_checks],
            "B1": self.b1.to_dict(),
            "B1_conjugate": self.b1_conjugate.to_dict(),
            "B2": self.b2.to_dict(),
            "uniqueness": self.uniqueness,
            "notes": self.notes,
        })


def _starts(cone, budget: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    k = max(budget - len(cone.generators) - 1, 0)
    return np.vstack([
        cone.generators_f,
        np.array(cone.center, dtype=float)[None, :] / np.linalg.norm(np.array(cone.center, dtype=float)),
        sample_points(cone, rng, k - k // 4),
        sample_boundary(cone, rng, k // 4),
    ])


def _cone_pair(T: ConeMap, starts: np.ndarray, max_iter: int) -> tuple[Optional[EigenPair], list]:
    found = [p for p in power_iteration_multistart(T, starts, max_iter) if p is not None]
    if found:
        return max(found, key=lambda p: p.lam), found
    if T.dim <= 3:
        pairs = enumerate_eigenpairs_pwl(T).pairs
        if pairs:
            return max(pairs, key=lambda p: p.lam), []
    return None, []


def _dedupe_off(eigs: list, T: ConeMap) -> list:
    out = []
    for e in eigs:
        if e.stratum != "off":
            continue
        if any(abs(o.lam - e.lam) <= 1e-12 and np.linalg.norm(o.x - e.x) <= 1e-9 for o in out):
            continue
        out.append(e)
    return out


def analyze_superadditive(
    T: ConeMap, budget: int = 64, seed: int = 0, threshold: float = 1e-9,
    max_iter: int = 10_000, tol: float = 1e-9,
) -> SuperadditiveAnalysis:
    if not (T.on_space and _structurally_superadditive(T)):
        raise MapError("superadditivity is not certified for this map")
    if classify_positivity(T).grade < Positivity.POSITIVE:
        raise MapError("map is not positive")
    bon = float(bonsall_radius(T, seed=seed))
    if bon <= threshold:
        raise ValueError("no positive eigenvalue guaranteed")
    S = negate_conjugate(T)
    starts = _starts(T.cone, budget, seed)
    plus, found = _cone_pair(T, starts, max_iter)
    sminus, _ = _cone_pair(S, starts, max_iter)
    if plus is None or sminus is None:
        raise ValueError("no cone eigenpair found")
    minus = EigenPair(sminus.lam, -sminus.x, sminus.location, sminus.method, sminus.residual,
                      iterations=sminus.iterations)
    notes = []
    b1 = check_B1(T, budget, seed)
    b1s = check_B1(S, budget, seed)
    b2 = check_B2(T, budget, seed)
    if b1.passed and not b1s.passed:
        notes.append("boundary condition does not transfer to the conjugate")
    other = []
    if T.dim <= 3:
        other = _dedupe_off(real_eigenvalues_on_space(T), T)
    else:
        notes.append("off-cone eigenvalue sweep skipped above dimension 3")
    checks = []
    for e in other:
        try:
            checks.append(eigenvalue_bound_check(T, plus, e, tol))
        except ValueError as exc:
            notes.append(f"off-cone eigenpair at lambda={e.lam:.6g} set aside: {exc}")
    uniq = {"starts": int(len(starts)), "converged": len(found)}
    if b1.passed:
        units = np.array([p.x for p in found])
        spread = float(np.max(np.linalg.norm(units - plus.x, axis=1))) if len(units) else 0.0
        uniq.update(agree=bool(spread <= 1e-8), max_distance=spread)
        if spread > 1e-8:
            far = found[int(np.argmax(np.linalg.norm(units - plus.x, axis=1)))]
            cert = uniqueness_via_boundary_ray(T, far.x, plus.x, plus.lam)
            uniq["diagnostic"] = cert.to_dict()
    else:
        uniq["skipped"] = "boundary condition fails"
        notes.append("uniqueness check skipped: boundary condition B1 fails")
    ordering = bool(minus.lam >= plus.lam - tol)
    return SuperadditiveAnalysis(T, plus, minus, other, b1, b1s, b2, bon, checks, ordering, uniq, notes)
