"""Polyhedral cones in R^n and the partial order they induce.

A cone is stored by its inward facet normals (H-representation):
``K = {x : <a, x> >= 0 for every normal a}``. Extreme rays are derived
exactly from the normals on construction.

Inputs whose entries are all ``int``/``Fraction`` are decided in exact
arithmetic (tolerances are ignored on that path); float inputs use the
given tolerance, scaled by the norm of the argument where the test is a
strict one.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import _rational as Q

DEFAULT_TOL = 1e-9


class ConeError(ValueError):
    pass


class OrderRelation(enum.Enum):
    """Relation of ``x`` to ``y``; the strongest applicable one is reported."""

    INCOMPARABLE = "incomparable"
    EQUAL = "equal"
    LEQ = "leq"
    LT = "lt"
    STRICTLY_LT_INTERIOR = "strictly_lt_interior"
    GT = "gt"
    STRICTLY_GT_INTERIOR = "strictly_gt_interior"


def is_exact(x) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in x)


def extreme_rays(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """Extreme rays of the pointed cone ``{x : rows @ x >= 0}``, exactly.

    Rays are returned as primitive integer vectors. The cone may be lower
    dimensional; it must not contain a line.
    """
    rows = [tuple(r) for r in rows]
    if n == 1:
        cands = [(1,), (-1,)]
        return [c for c in cands if all(Q.dot(r, c) >= 0 for r in rows)]
    found: list[tuple] = []
    seen = set()
    for combo in itertools.combinations(range(len(rows)), n - 1):
        sub = [rows[i] for i in combo]
        basis = Q.nullspace(sub, n)
        if len(basis) != 1:
            continue
        r = basis[0]
        for cand in (r, Q.neg(r)):
            if all(Q.dot(row, cand) >= 0 for row in rows) and cand not in seen:
                seen.add(cand)
                found.append(cand)
    return sorted(found)


@dataclass(frozen=True)
class DualFunctional:
    """The linear functional ``x -> <vector, x>``."""

    vector: tuple

    def __call__(self, x):
        if is_exact(x):
            return Q.dot(self.vector, x)
        return float(np.dot(np.asarray(self.vector, dtype=float), x))

    def in_dual_cone(self, cone: "PolyhedralCone") -> bool:
        return all(Q.dot(self.vector, g) >= 0 for g in cone.generators)


@dataclass(frozen=True, eq=False)
class PolyhedralCone:
    dim: int
    facet_normals: tuple
    tag: str = "general"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ConeError("dimension must be positive")
        if not self.facet_normals:
            raise ConeError("a cone needs at least one facet normal")
        for a in self.facet_normals:
            if len(a) != self.dim:
                raise ConeError(f"facet normal {a} has wrong dimension")
            if Q.is_zero(a):
                raise ConeError("zero facet normal")
        if self.tag == "orthant":
            expected = Q.identity(self.dim)
            if tuple(self.facet_normals) != expected:
                raise ConeError("orthant facets must be the standard basis")
        if self.is_pointed and not self.generators:
            raise ConeError("cone is trivial ({0})")

    @classmethod
    def orthant(cls, n: int) -> "PolyhedralCone":
        return cls(n, Q.identity(n), "orthant")

    @classmethod
    def from_normals(cls, normals) -> "PolyhedralCone":
        rows = Q.matrix(normals)
        n = len(rows[0])
        if rows == Q.identity(n):
            return cls.orthant(n)
        return cls(n, rows, "general")

    def __eq__(self, other):
        return isinstance(other, PolyhedralCone) and self.facet_normals == other.facet_normals

    def __hash__(self):
        return hash(self.facet_normals)

    @cached_property
    def normals_f(self) -> np.ndarray:
        return np.array(self.facet_normals, dtype=float)

    @cached_property
    def is_pointed(self) -> bool:
        return Q.rank(self.facet_normals) == self.dim

    @cached_property
    def generators(self) -> tuple:
        if not self.is_pointed:
            raise ConeError("cone is not pointed (normals do not span R^n)")
        return tuple(extreme_rays(self.facet_normals, self.dim))

    @cached_property
    def generators_f(self) -> np.ndarray:
        g = np.array(self.generators, dtype=float)
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    @cached_property
    def is_solid(self) -> bool:
        if self.is_pointed:
            c = self.center
            return all(Q.dot(a, c) > 0 for a in self.facet_normals)
        res = linprog(
            c=np.r_[np.zeros(self.dim), -1.0],
            A_ub=np.c_[-self.normals_f, np.ones(len(self.facet_normals))],
            b_ub=np.zeros(len(self.facet_normals)),
            bounds=[(-1, 1)] * self.dim + [(None, 1)],
        )
        return bool(res.status == 0 and -res.fun > 1e-12)

    @property
    def is_generating(self) -> bool:
        return self.is_solid

    @cached_property
    def center(self) -> tuple:
        """Sum of the extreme rays; interior whenever the cone is solid."""
        total = (0,) * self.dim
        for g in self.generators:
            total = Q.add(total, g)
        return total

    def facets_through(self, x) -> list[int]:
        return [i for i, a in enumerate(self.facet_normals) if Q.dot(a, x) == 0]

    def generators_on(self, facet_indices) -> list[tuple]:
        return [
            g for g in self.generators
            if all(Q.dot(self.facet_normals[i], g) == 0 for i in facet_indices)
        ]

    @cached_property
    def faces(self) -> tuple:
        """Proper nonzero faces as (active facet indices, generators) pairs."""
        out = {}
        m = len(self.facet_normals)
        for size in range(1, m + 1):
            for subset in itertools.combinations(range(m), size):
                gens = self.generators_on(subset)
                if not gens:
                    continue
                key = tuple(gens)
                if key in out:
                    continue
                active = tuple(
                    i for i, a in enumerate(self.facet_normals)
                    if all(Q.dot(a, g) == 0 for g in gens)
                )
                out[key] = (active, key)
        return tuple(out.values())

    def to_dict(self) -> dict:
        if self.tag == "orthant":
            return {"orthant": self.dim}
        return {"dim": self.dim, "facets": [[str(v) for v in a] for a in self.facet_normals]}


def _check_dim(cone: PolyhedralCone, x) -> None:
    if len(x) != cone.dim:
        raise ConeError(f"dimension mismatch: expected {cone.dim}, got {len(x)}")


def contains(cone: PolyhedralCone, x, tol: float = DEFAULT_TOL) -> bool:
    """Membership: ``<a, x> >= -tol`` for every facet normal ``a``."""
    _check_dim(cone, x)
    if is_exact(x):
        return all(Q.dot(a, x) >= 0 for a in cone.facet_normals)
    return bool(np.all(cone.normals_f @ np.asarray(x, dtype=float) >= -tol))


def interior_contains(cone: PolyhedralCone, x, tol: float = DEFAULT_TOL) -> bool:
    _check_dim(cone, x)
    if not cone.is_solid:
        raise ConeError("cone has empty interior")
    if is_exact(x):
        return all(Q.dot(a, x) > 0 for a in cone.facet_normals)
    xf = np.asarray(x, dtype=float)
    return bool(np.all(cone.normals_f @ xf > tol * np.linalg.norm(xf)))


def on_boundary(cone: PolyhedralCone, x, tol: float = DEFAULT_TOL) -> bool:
    """Nonzero member of the cone that is not interior."""
    if is_exact(x):
        return contains(cone, x) and not Q.is_zero(x) and not interior_contains(cone, x)
    xf = np.asarray(x, dtype=float)
    nx = np.linalg.norm(xf)
    return (
        nx > 0
        and contains(cone, xf, tol * max(1.0, nx))
        and not interior_contains(cone, xf, tol)
    )


def compare(cone: PolyhedralCone, x, y, tol: float = DEFAULT_TOL) -> OrderRelation:
    """Classify ``y - x`` against the cone."""
    _check_dim(cone, x)
    _check_dim(cone, y)
    exact = is_exact(x) and is_exact(y)
    if exact:
        d = Q.sub(y, x)
        if Q.is_zero(d):
            return OrderRelation.EQUAL
    else:
        d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
        scale_ = max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(y)))
        if np.linalg.norm(d) <= tol * scale_:
            return OrderRelation.EQUAL
        tol = tol * scale_
    solid = cone.is_solid
    if contains(cone, d, tol):
        if solid and interior_contains(cone, d, tol):
            return OrderRelation.STRICTLY_LT_INTERIOR
        return OrderRelation.LT
    md = Q.neg(d) if exact else -d
    if contains(cone, md, tol):
        if solid and interior_contains(cone, md, tol):
            return OrderRelation.STRICTLY_GT_INTERIOR
        return OrderRelation.GT
    return OrderRelation.INCOMPARABLE


def leq(cone: PolyhedralCone, x, y, tol: float = DEFAULT_TOL) -> bool:
    return compare(cone, x, y, tol) in (
        OrderRelation.EQUAL, OrderRelation.LT, OrderRelation.STRICTLY_LT_INTERIOR,
    )


def semi_strong_witness(
    cone: PolyhedralCone, x, v, tol: float = DEFAULT_TOL
) -> Optional[DualFunctional]:
    """Facet normal vanishing on ``x`` and strictly positive on ``v``.

    Facet normals are the extreme rays of the dual cone, so on a polyhedral
    cone a separating dual functional exists iff one of them separates.
    """
    _check_dim(cone, x)
    _check_dim(cone, v)
    if not on_boundary(cone, x, tol):
        raise ConeError("x must be a nonzero boundary point of the cone")
    if is_exact(x) and is_exact(v):
        for a in cone.facet_normals:
            if Q.dot(a, x) == 0 and Q.dot(a, v) > 0:
                return DualFunctional(a)
        return None
    xf = np.asarray(x, dtype=float)
    vf = np.asarray(v, dtype=float)
    nx, nv = np.linalg.norm(xf), np.linalg.norm(vf)
    for a, af in zip(cone.facet_normals, cone.normals_f):
        if af @ xf <= tol * nx and af @ vf > tol * nv:
            return DualFunctional(a)
    return None


def _inf_ratio(c: np.ndarray) -> np.ndarray:
    # inf over t >= 0 of |x + t y| for unit x, y with <x, y> = c
    return np.where(c >= 0, 1.0, np.sqrt(np.clip(1.0 - c * c, 0.0, None)))


def normality_constant(cone: PolyhedralCone, samples: int = 20000, seed: int = 0) -> float:
    """Estimate the largest gamma with ``|x + y| >= gamma |x|`` on the cone.

    Reduces the inner infimum over the length of ``y`` in closed form and
    minimizes over all pairs of extreme rays plus ``samples`` random unit
    pairs. For cones whose rays meet at non-obtuse angles (the orthant) the
    value is exactly 1.
    """
    if not cone.is_pointed:
        raise ConeError("normality constant requires a pointed cone")
    G = cone.generators_f
    best = float(_inf_ratio(G @ G.T).min())
    if samples:
        rng = np.random.default_rng(seed)
        X = sample_points(cone, rng, samples)
        Y = sample_points(cone, rng, samples)
        best = min(best, float(_inf_ratio(np.sum(X * Y, axis=1)).min()))
    return best


# sampling -----------------------------------------------------------------

def sample_points(cone: PolyhedralCone, rng: np.random.Generator, count: int) -> np.ndarray:
    """Unit cone vectors: |gaussian| weights on the extreme rays."""
    W = np.abs(rng.standard_normal((count, len(cone.generators))))
    X = W @ cone.generators_f
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def sample_boundary(cone: PolyhedralCone, rng: np.random.Generator, count: int) -> np.ndarray:
    """Unit boundary vectors drawn from random faces of random facets."""
    out = np.empty((count, cone.dim))
    faces = _facet_generator_sets(cone)
    G = cone.generators_f
    for k in range(count):
        idx = faces[rng.integers(len(faces))]
        keep = [i for i in idx if rng.random() < 0.5] or [idx[rng.integers(len(idx))]]
        x = np.abs(rng.standard_normal(len(keep))) @ G[keep]
        out[k] = x / np.linalg.norm(x)
    return out


def _facet_generator_sets(cone: PolyhedralCone) -> list[list[int]]:
    key = "facet_gen_sets"
    if key not in cone._cache:
        sets = []
        for i in range(len(cone.facet_normals)):
            idx = [j for j, g in enumerate(cone.generators) if Q.dot(cone.facet_normals[i], g) == 0]
            if idx:
                sets.append(idx)
        cone._cache[key] = sets
    return cone._cache[key]


def _rational_weights(rng: np.random.Generator, k: int, max_den: int, max_num: int) -> list:
    q = int(rng.integers(1, max_den + 1))
    nums = rng.integers(1, max_num * q + 1, size=k)
    return [Q.normalize(Fraction(int(p), q)) for p in nums]


def sample_points_exact(
    cone: PolyhedralCone, rng: np.random.Generator, count: int,
    max_den: int = 10_000, max_num: int = 10,
) -> list[tuple]:
    """Rational cone points: positive rational weights (denominator <= max_den)
    on the integer extreme rays."""
    gens = cone.generators
    out = []
    for _ in range(count):
        w = _rational_weights(rng, len(gens), max_den, max_num)
        x = (0,) * cone.dim
        for wi, g in zip(w, gens):
            x = Q.add(x, Q.scale(wi, g))
        out.append(x)
    return out


def sample_boundary_exact(
    cone: PolyhedralCone, rng: np.random.Generator, count: int,
    max_den: int = 10_000, max_num: int = 10,
) -> list[tuple]:
    faces = _facet_generator_sets(cone)
    gens = cone.generators
    out = []
    for _ in range(count):
        idx = faces[rng.integers(len(faces))]
        keep = [i for i in idx if rng.random() < 0.5] or [idx[rng.integers(len(idx))]]
        w = _rational_weights(rng, len(keep), max_den, max_num)
        x = (0,) * cone.dim
        for wi, i in zip(w, keep):
            x = Q.add(x, Q.scale(wi, gens[i]))
        out.append(x)
    return out


def cone_from_dict(data: dict) -> PolyhedralCone:
    if "orthant" in data:
        return PolyhedralCone.orthant(int(data["orthant"]))
    cone = PolyhedralCone.from_normals(data["facets"])
    if "dim" in data and int(data["dim"]) != cone.dim:
        raise ConeError("declared dim does not match facet length")
    return cone


def polyhedral_faces(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """All nonzero faces of the pointed cone ``{x : rows @ x >= 0}``.

    Each face is returned as the tuple of its extreme rays; the cone itself
    is included. Faces are found as intersections of the active row sets of
    the extreme rays.
    """
    rays = extreme_rays(rows, n)
    if not rays:
        return []
    active = [frozenset(i for i, r in enumerate(rows) if Q.dot(r, g) == 0) for g in rays]
    sets = {frozenset()} | set(active)
    frontier = set(active)
    while frontier:
        new = set()
        for a in frontier:
            for b in active:
                c = a & b
                if c not in sets:
                    new.add(c)
        sets |= new
        frontier = new
    faces = set()
    for S in sets:
        face = tuple(g for g, act in zip(rays, active) if S <= act)
        if face:
            faces.add(face)
    return sorted(faces)
