"""Continuous 1-homogeneous maps on polyhedral cones.

Every map keeps its data as exact rationals and evaluates either exactly
(:meth:`ConeMap.apply_exact`) or in floating point through the compiled
kernels (:meth:`ConeMap.apply`). Homogeneity holds by construction for
every variant: regions are cones and each branch is linear.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import _rational as Q
from . import kernels
from .cone import (
    DEFAULT_TOL, ConeError, PolyhedralCone, _facet_generator_sets, contains, extreme_rays,
    interior_contains, sample_boundary_exact, sample_points_exact,
)
from .verdicts import HypothesisVerdict, Verdict


class MapError(ValueError):
    pass


def _square(m, n: Optional[int] = None):
    mat = Q.matrix(m)
    if len(mat) != len(mat[0]):
        raise MapError("matrix must be square")
    if n is not None and len(mat) != n:
        raise MapError(f"matrix must be {n}x{n}")
    return mat


class ConeMap:
    """Base class. Subclasses set ``cone`` and ``on_space``."""

    cone: PolyhedralCone
    on_space: bool = False

    @property
    def dim(self) -> int:
        return self.cone.dim

    # hooks -----------------------------------------------------------
    def _eval_exact(self, x: tuple) -> tuple:
        raise NotImplementedError

    def stages(self, factor=1) -> list:
        """Kernel stages, innermost first; ``factor`` is folded into the last."""
        raise NotImplementedError

    # evaluation -------------------------------------------------------
    @cached_property
    def plan(self) -> kernels.Plan:
        return kernels.compile_plan(self.dim, self.stages())

    def _check_domain(self, x, exact: bool, tol: float) -> None:
        if len(x) != self.dim:
            raise ConeError(f"dimension mismatch: expected {self.dim}, got {len(x)}")
        if self.on_space:
            return
        if exact:
            ok = contains(self.cone, x)
        else:
            ok = contains(self.cone, x, tol * max(1.0, float(np.linalg.norm(x))))
        if not ok:
            raise MapError("outside cone")

    def apply_exact(self, x) -> tuple:
        xe = Q.vector(x)
        self._check_domain(xe, True, 0.0)
        return self._eval_exact(xe)

    def apply(self, x, tol: float = DEFAULT_TOL) -> np.ndarray:
        xf = np.ascontiguousarray(x, dtype=float)
        self._check_domain(xf, False, tol)
        return kernels.apply_batch(self.plan, xf[None, :], tol)[0]

    def __call__(self, x, tol: float = DEFAULT_TOL):
        from .cone import is_exact
        if is_exact(x):
            return self.apply_exact(x)
        return self.apply(x, tol)

    def apply_many(self, X, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Float images of the rows of ``X`` (no domain check)."""
        return kernels.apply_batch(self.plan, np.ascontiguousarray(X, dtype=float), tol)

    def to_dict(self) -> dict:
        raise NotImplementedError


class LinearMap(ConeMap):
    def __init__(self, matrix, cone: Optional[PolyhedralCone] = None):
        self.matrix = _square(matrix)
        self.cone = cone or PolyhedralCone.orthant(len(self.matrix))
        if self.cone.dim != len(self.matrix):
            raise MapError("matrix and cone dimensions differ")
        self.on_space = True

    def _eval_exact(self, x):
        return Q.matvec(self.matrix, x)

    def stages(self, factor=1):
        return [("linear", [Q.scale_matrix(factor, self.matrix)], None)]

    def to_dict(self):
        return {"type": "linear", "matrix": _mat_json(self.matrix)}

    def __repr__(self):
        return f"LinearMap({_mat_json(self.matrix)})"


@dataclass(frozen=True)
class ConicRegion:
    """``{x : <a,x> > 0 for a in strict, <b,x> >= 0 for b in weak}`` with
    the linear branch ``matrix`` used there."""

    strict: tuple
    weak: tuple
    matrix: tuple

    @classmethod
    def make(cls, matrix, strict=(), weak=()) -> "ConicRegion":
        return cls(tuple(Q.vector(a) for a in strict), tuple(Q.vector(b) for b in weak), _square(matrix))

    @property
    def rows(self) -> tuple:
        return self.strict + self.weak

    def contains_exact(self, x, closure: bool = False) -> bool:
        if closure:
            return all(Q.dot(a, x) >= 0 for a in self.rows)
        return all(Q.dot(a, x) > 0 for a in self.strict) and all(Q.dot(b, x) >= 0 for b in self.weak)

    def contains(self, x, tol: float = DEFAULT_TOL, closure: bool = False) -> bool:
        xf = np.asarray(x, dtype=float)
        t = tol * np.linalg.norm(xf)
        s_ok = all(np.dot(a, xf) >= -t if closure else np.dot(a, xf) > t for a in self.strict)
        return s_ok and all(np.dot(b, xf) >= -t for b in self.weak)


class PiecewiseLinearMap(ConeMap):
    """Piecewise-linear map over a finite partition into conic regions.

    Ties between regions resolve to the first listed region whose defining
    inequalities hold; closures are consulted only when no region matches
    with strict inequalities. Continuity across shared boundaries is
    verified exactly at construction (skip with ``validate=False`` only for
    partitions that are continuous by construction).
    """

    def __init__(
        self,
        regions: Sequence[ConicRegion],
        cone: Optional[PolyhedralCone] = None,
        on_space: bool = False,
        validate: bool = True,
    ):
        if not regions:
            raise MapError("at least one region required")
        self.regions = tuple(regions)
        n = len(self.regions[0].matrix)
        self.cone = cone or PolyhedralCone.orthant(n)
        self.on_space = on_space
        for r in self.regions:
            if len(r.matrix) != n or any(len(a) != n for a in r.rows):
                raise MapError("region data has inconsistent dimension")
        if self.cone.dim != n:
            raise MapError("region and cone dimensions differ")
        if validate:
            self._validate()

    # exact closures ---------------------------------------------------
    def _closure_rows(self, i: int) -> list:
        rows = list(self.regions[i].rows)
        if not self.on_space:
            rows += list(self.cone.facet_normals)
        return rows

    def region_rays(self, i: int) -> list:
        """Extreme rays of the closure of region ``i`` intersected with the cone."""
        rows = list(self.regions[i].rows) + list(self.cone.facet_normals)
        return extreme_rays(rows, self.dim)

    def _validate(self) -> None:
        if self.on_space:
            self._validate_space()
            return
        rays = [self.region_rays(i) for i in range(len(self.regions))]
        for i, rs in enumerate(rays):
            if not rs:
                raise MapError(f"region {i} is empty within the cone")
        for i, j in itertools.combinations(range(len(self.regions)), 2):
            shared = extreme_rays(self._closure_rows(i) + list(self.regions[j].rows), self.dim)
            for g in shared:
                if Q.matvec(self.regions[i].matrix, g) != Q.matvec(self.regions[j].matrix, g):
                    raise MapError(
                        f"discontinuous: regions {i} and {j} disagree on ray {Q.fmt_vector(g)}"
                    )
        for g in self.cone.generators:
            self._locate_exact(g)
        rng = np.random.default_rng(0)
        for x in sample_points_exact(self.cone, rng, 32, max_den=97):
            self._locate_exact(x)

    def _validate_space(self) -> None:
        n = self.dim
        for i in range(len(self.regions)):
            if not _implicit_span(self._closure_rows(i), n):
                raise MapError(f"region {i} is empty")
        for i, j in itertools.combinations(range(len(self.regions)), 2):
            basis = _implicit_span(self._closure_rows(i) + list(self.regions[j].rows), n)
            if not basis:
                continue
            diff = [Q.sub(a, b) for a, b in zip(self.regions[i].matrix, self.regions[j].matrix)]
            for v in basis:
                if not Q.is_zero(Q.matvec(diff, v)):
                    raise MapError(f"discontinuous: regions {i} and {j} disagree on their interface")
        rng = np.random.default_rng(0)
        for _ in range(64):
            self._locate_exact(Q.vector(rng.integers(-50, 51, size=n)))

    def _locate_exact(self, x) -> int:
        for i, r in enumerate(self.regions):
            if r.contains_exact(x):
                return i
        for i, r in enumerate(self.regions):
            if r.contains_exact(x, closure=True):
                return i
        raise MapError(f"partition gap at {Q.fmt_vector(x)}")

    def region_of(self, x) -> int:
        return self._locate_exact(Q.vector(x))

    def _eval_exact(self, x):
        return Q.matvec(self.regions[self._locate_exact(x)].matrix, x)

    def stages(self, factor=1):
        mats = [Q.scale_matrix(factor, r.matrix) for r in self.regions]
        regs = [(r.rows, [1] * len(r.strict) + [0] * len(r.weak)) for r in self.regions]
        return [("pwl", mats, regs)]

    def to_dict(self):
        return {
            "type": "pwl",
            "on_space": self.on_space,
            "regions": [
                {
                    "strict": [[str(v) for v in a] for a in r.strict],
                    "weak": [[str(v) for v in a] for a in r.weak],
                    "matrix": _mat_json(r.matrix),
                }
                for r in self.regions
            ],
        }


def _implicit_span(rows, n):
    """Basis of the linear span of ``{x : rows @ x >= 0}``.

    An empty list means the set is just the origin; None means an LP failed.
    """
    rows = list(rows)
    if not rows:
        return Q.nullspace([], n)
    A = np.array(rows, dtype=float)
    implicit = []
    for k, row in enumerate(rows):
        res = linprog(
            c=-A[k], A_ub=-A, b_ub=np.zeros(len(rows)), bounds=[(-1, 1)] * n, method="highs"
        )
        if res.status != 0:
            return None
        if -res.fun <= 1e-10:
            implicit.append(row)
    if not implicit:
        return Q.nullspace([], n)
    return Q.nullspace(implicit, n)


class _ComponentwiseMap(ConeMap):
    kind = ""

    def __init__(self, matrices, cone: Optional[PolyhedralCone] = None):
        mats = [_square(m) for m in matrices]
        if not mats:
            raise MapError("at least one matrix required")
        n = len(mats[0])
        if any(len(m) != n for m in mats):
            raise MapError("matrices must share a dimension")
        self.matrices = tuple(mats)
        self.cone = cone or PolyhedralCone.orthant(n)
        if self.cone.dim != n:
            raise MapError("matrix and cone dimensions differ")
        self.on_space = True

    def _pick(self, values):
        raise NotImplementedError

    def _eval_exact(self, x):
        images = [Q.matvec(m, x) for m in self.matrices]
        return tuple(self._pick(col) for col in zip(*images))

    def stages(self, factor=1):
        return [(self.kind, [Q.scale_matrix(factor, m) for m in self.matrices], None)]

    def to_dict(self):
        return {"type": f"{self.kind}_linear", "matrices": [_mat_json(m) for m in self.matrices]}

    def to_piecewise(self, on_space: bool = False) -> PiecewiseLinearMap:
        """Regions indexed by which matrix attains each output coordinate.

        Ties go to the lowest matrix index, so regions are disjoint and their
        closures cover the domain.
        """
        n, m = self.dim, len(self.matrices)
        sign = 1 if self.kind == "min" else -1
        regions = []
        for pattern in itertools.product(range(m), repeat=n):
            strict, weak, rows = [], [], []
            feasible = True
            for i, k in enumerate(pattern):
                rows.append(self.matrices[k][i])
                for k2 in range(m):
                    if k2 == k:
                        continue
                    d = Q.scale(sign, Q.sub(self.matrices[k2][i], self.matrices[k][i]))
                    if Q.is_zero(d):
                        if k2 < k:
                            feasible = False
                        continue
                    (strict if k2 < k else weak).append(d)
            if not feasible or any(Q.neg(a) in strict for a in strict):
                continue
            weak = [b for b in weak if b not in strict]
            region = ConicRegion(tuple(dict.fromkeys(strict)), tuple(dict.fromkeys(weak)), tuple(rows))
            if on_space:
                if region.rows and not _has_nonzero(list(region.rows), n):
                    continue
            elif not extreme_rays(list(region.rows) + list(self.cone.facet_normals), n):
                continue
            regions.append(region)
        return PiecewiseLinearMap(regions, self.cone, on_space=on_space, validate=False)


def _has_nonzero(rows, n) -> bool:
    basis = _implicit_span(rows, n)
    return bool(basis)


class MinLinearMap(_ComponentwiseMap):
    """Componentwise minimum ``T(x)_i = min_k (A_k x)_i``."""

    kind = "min"

    def _pick(self, values):
        return min(values)


class MaxLinearMap(_ComponentwiseMap):
    """Componentwise maximum ``T(x)_i = max_k (A_k x)_i``."""

    kind = "max"

    def _pick(self, values):
        return max(values)


class ScaledMap(ConeMap):
    def __init__(self, factor, inner: ConeMap):
        self.factor = Q.to_exact(factor)
        if self.factor < 0:
            raise MapError("scale factor must be nonnegative")
        self.inner = inner
        self.cone = inner.cone
        self.on_space = inner.on_space

    def _eval_exact(self, x):
        return Q.scale(self.factor, self.inner._eval_exact(x))

    def stages(self, factor=1):
        return self.inner.stages(Q.normalize(factor * self.factor))

    def to_dict(self):
        return {"type": "scaled", "factor": str(self.factor), "map": self.inner.to_dict()}


class ComposedMap(ConeMap):
    """``maps[0] o maps[1] o ... o maps[-1]``; nested compositions are flattened."""

    def __init__(self, maps: Sequence[ConeMap]):
        flat: list[ConeMap] = []
        for m in maps:
            flat.extend(m.maps if isinstance(m, ComposedMap) else [m])
        if not flat:
            raise MapError("empty composition")
        if len({m.dim for m in flat}) != 1:
            raise MapError("composed maps must share a dimension")
        self.maps = tuple(flat)
        self.cone = flat[-1].cone
        self.on_space = all(m.on_space for m in flat)

    def _eval_exact(self, x):
        for m in reversed(self.maps):
            x = m._eval_exact(x)
        return x

    def stages(self, factor=1):
        out = []
        for m in reversed(self.maps[1:]):
            out += m.stages()
        return out + self.maps[0].stages(factor)

    def to_dict(self):
        return {"type": "compose", "maps": [m.to_dict() for m in self.maps]}


def _mat_json(m):
    return [[str(v) for v in row] for row in m]


# structure ------------------------------------------------------------------

def as_piecewise(T: ConeMap, on_space: bool = False) -> PiecewiseLinearMap:
    """Piecewise-linear form of ``T`` (linear, pwl, min/max, scaled)."""
    if isinstance(T, PiecewiseLinearMap):
        if on_space and not T.on_space:
            raise MapError("map is only defined on the cone")
        return T
    if isinstance(T, LinearMap):
        return PiecewiseLinearMap([ConicRegion((), (), T.matrix)], T.cone, on_space=on_space, validate=False)
    if isinstance(T, _ComponentwiseMap):
        return T.to_piecewise(on_space=on_space)
    if isinstance(T, ScaledMap):
        inner = as_piecewise(T.inner, on_space)
        regions = [
            ConicRegion(r.strict, r.weak, Q.scale_matrix(T.factor, r.matrix)) for r in inner.regions
        ]
        return PiecewiseLinearMap(regions, inner.cone, on_space=inner.on_space, validate=False)
    raise MapError(f"no piecewise-linear form for {type(T).__name__}")


def negate_conjugate(T: ConeMap) -> ConeMap:
    """``S(x) = -T(-x)``."""
    if not T.on_space:
        raise MapError("conjugate needs a map defined on all of R^n")
    if isinstance(T, LinearMap):
        return LinearMap(T.matrix, T.cone)
    if isinstance(T, MinLinearMap):
        return MaxLinearMap(T.matrices, T.cone)
    if isinstance(T, MaxLinearMap):
        return MinLinearMap(T.matrices, T.cone)
    if isinstance(T, ScaledMap):
        return ScaledMap(T.factor, negate_conjugate(T.inner))
    if isinstance(T, ComposedMap):
        return ComposedMap([negate_conjugate(m) for m in T.maps])
    if isinstance(T, PiecewiseLinearMap):
        regions = [
            ConicRegion(
                tuple(Q.neg(a) for a in r.strict), tuple(Q.neg(b) for b in r.weak), r.matrix
            )
            for r in T.regions
        ]
        return PiecewiseLinearMap(regions, T.cone, on_space=True, validate=False)
    raise MapError(f"cannot conjugate {type(T).__name__}")


# positivity -----------------------------------------------------------------

class Positivity(enum.IntEnum):
    NOT_POSITIVE = 0
    POSITIVE = 1
    STRICTLY_POSITIVE = 2
    STRONGLY_POSITIVE = 3


@dataclass(frozen=True)
class PositivityVerdict:
    grade: Positivity
    certified: bool
    witness: Optional[tuple] = None

    @property
    def method(self) -> str:
        return "certified" if self.certified else "sampled"

    def to_dict(self):
        out = {"grade": self.grade.name.lower(), "method": self.method}
        if self.witness is not None:
            out["witness"] = [str(v) for v in self.witness]
        return out


def _grade_image(cone: PolyhedralCone, y) -> Positivity:
    if not contains(cone, y):
        return Positivity.NOT_POSITIVE
    if Q.is_zero(y):
        return Positivity.POSITIVE
    if cone.is_solid and interior_contains(cone, y):
        return Positivity.STRONGLY_POSITIVE
    return Positivity.STRICTLY_POSITIVE


def _ray_images(T: ConeMap):
    """(ray, image) pairs over every region ray; None if T has no such form."""
    try:
        P = as_piecewise(T)
    except MapError:
        return None
    out = []
    for i, r in enumerate(P.regions):
        for g in P.region_rays(i):
            out.append((g, Q.matvec(r.matrix, g)))
    return out


def classify_positivity(T: ConeMap, budget: int = 1000, seed: int = 0) -> PositivityVerdict:
    """Strongest positivity grade of ``T`` on its cone.

    Maps with a piecewise-linear form are certified from the images of the
    extreme rays of each region: every cone point is a nonnegative
    combination of rays of one region, on which ``T`` is linear. Other maps
    get a sampled verdict.
    """
    pairs = _ray_images(T)
    certified = pairs is not None
    if pairs is None:
        rng = np.random.default_rng(seed)
        pts = list(T.cone.generators) + sample_points_exact(T.cone, rng, budget)
        pts += sample_boundary_exact(T.cone, rng, budget)
        pairs = [(x, T.apply_exact(x)) for x in pts]
    grade, witness = Positivity.STRONGLY_POSITIVE, None
    for x, y in pairs:
        g = _grade_image(T.cone, y)
        if g < grade:
            grade, witness = g, x
            if g == Positivity.NOT_POSITIVE:
                break
    return PositivityVerdict(grade, certified, witness)


# order preservation ---------------------------------------------------------

_MODE_GRADE = {
    "weak": Positivity.POSITIVE,
    "strict": Positivity.STRICTLY_POSITIVE,
    "strong": Positivity.STRONGLY_POSITIVE,
}


def _pair_ok(cone, dy, mode) -> bool:
    if mode == "weak":
        return contains(cone, dy)
    if mode == "strict":
        return contains(cone, dy) and not Q.is_zero(dy)
    return interior_contains(cone, dy)


def comparable_pairs(cone: PolyhedralCone, rng: np.random.Generator, count: int, max_den: int = 10_000):
    """Exact pairs ``x < y``: ``y = x + d`` with ``d`` a nonzero cone vector,
    drawn from a boundary face half of the time. Each pair shares one
    denominator ``q <= max_den``."""
    gens = cone.generators
    faces = _facet_generator_sets(cone)
    out = []
    for k in range(count):
        q = int(rng.integers(1, max_den + 1))
        wx = rng.integers(0, 10 * q + 1, size=len(gens))
        if k % 2:
            idx = faces[rng.integers(len(faces))]
            keep = [i for i in idx if rng.random() < 0.5] or [idx[rng.integers(len(idx))]]
        else:
            keep = range(len(gens))
        wd = np.zeros(len(gens), dtype=np.int64)
        for i in keep:
            wd[i] = rng.integers(1, 10 * q + 1)
        x = _combine(gens, wx, q)
        out.append((x, Q.add(x, _combine(gens, wd, q))))
    return out


def _combine(gens, weights, q):
    x = [0] * len(gens[0])
    for w, g in zip(weights, gens):
        if w:
            for j, gj in enumerate(g):
                x[j] += int(w) * gj
    return tuple(Q.to_exact(Fraction(v, q)) for v in x)


def check_order_preserving(
    T: ConeMap, mode: str = "weak", budget: int = 2000, seed: int = 0
) -> HypothesisVerdict:
    """Check ``x < y => T(x) R T(y)`` with R the relation of ``mode``.

    Linear maps are certified through their positivity grade; so are
    certified-superadditive maps (``T(y) - T(x) >= T(y - x)``). Everything
    else is sampled over exact comparable pairs.
    """
    if mode not in _MODE_GRADE:
        raise ValueError(f"unknown mode {mode!r}")
    name = f"order_preserving({mode})"
    cone = T.cone
    need = _MODE_GRADE[mode]
    if mode == "strong" and not cone.is_solid:
        raise ConeError("cone has empty interior")
    sup = check_superadditive(T, "on_cone", budget=0) if T.on_space else None
    structural = isinstance(T, LinearMap) or (sup is not None and sup.verdict is Verdict.PASS_CERTIFIED)
    if structural:
        pos = classify_positivity(T)
        if pos.certified:
            if pos.grade >= need:
                return HypothesisVerdict(name, Verdict.PASS_CERTIFIED, detail="positivity grade of a superadditive map")
            if isinstance(T, LinearMap):
                x = cone.center
                return HypothesisVerdict(
                    name, Verdict.FAIL, witness=(x, Q.add(x, pos.witness)),
                    detail=f"linear map with positivity grade {pos.grade.name.lower()}",
                )
    rng = np.random.default_rng(seed)
    pairs = [(g, Q.scale(2, g)) for g in cone.generators]
    pairs += [((0,) * cone.dim, g) for g in cone.generators]
    pairs += comparable_pairs(cone, rng, budget)
    for x, y in pairs:
        dy = Q.sub(T.apply_exact(y), T.apply_exact(x))
        if not _pair_ok(cone, dy, mode):
            return HypothesisVerdict(
                name, Verdict.FAIL, witness=(x, y), samples=len(pairs),
                detail=f"T(y) - T(x) = {Q.fmt_vector(dy)}",
            )
    return HypothesisVerdict(name, Verdict.PASS_SAMPLED, samples=len(pairs))


# superadditivity ------------------------------------------------------------

def _contains_orthant(cone: PolyhedralCone) -> bool:
    return all(v >= 0 for a in cone.facet_normals for v in a)


def _structurally_superadditive(T: ConeMap) -> bool:
    if isinstance(T, LinearMap):
        return True
    if isinstance(T, MinLinearMap):
        return _contains_orthant(T.cone)
    if isinstance(T, ScaledMap):
        return _structurally_superadditive(T.inner)
    return False


def check_superadditive(
    T: ConeMap, scope: str = "on_cone", budget: int = 2000, seed: int = 0
) -> HypothesisVerdict:
    """Check ``T(x + y) >= T(x) + T(y)``.

    Linear maps are additive; a componentwise minimum of linear maps is
    superadditive in the coordinate order, hence in the order of any cone
    containing the orthant. Other maps are sampled.
    """
    if scope not in ("on_cone", "on_space"):
        raise ValueError(f"unknown scope {scope!r}")
    if scope == "on_space" and not T.on_space:
        raise MapError("map is only defined on the cone")
    name = "superadditive" if scope == "on_space" else "superadditive(on_cone)"
    if _structurally_superadditive(T):
        return HypothesisVerdict(name, Verdict.PASS_CERTIFIED, detail="structural")
    rng = np.random.default_rng(seed)
    n = T.dim
    if scope == "on_cone":
        xs = sample_points_exact(T.cone, rng, budget) + list(T.cone.generators)
        ys = sample_points_exact(T.cone, rng, budget) + list(T.cone.generators[::-1])
    else:
        xs = [Q.vector(rng.integers(-1000, 1001, size=n)) for _ in range(budget)]
        ys = [Q.vector(rng.integers(-1000, 1001, size=n)) for _ in range(budget)]
    for x, y in zip(xs, ys):
        gap = Q.sub(T._eval_exact(Q.add(x, y)), Q.add(T._eval_exact(x), T._eval_exact(y)))
        if not contains(T.cone, gap):
            return HypothesisVerdict(
                name, Verdict.FAIL, witness=(x, y), samples=len(xs),
                detail=f"T(x+y) - T(x) - T(y) = {Q.fmt_vector(gap)}",
            )
    return HypothesisVerdict(name, Verdict.PASS_SAMPLED, samples=len(xs))


def map_from_dict(data: dict, cone: Optional[PolyhedralCone] = None) -> ConeMap:
    """Build a map from its JSON description (see :mod:`conepf.schema`)."""
    kind = data["type"]
    if kind == "linear":
        m = _square(data["matrix"])
        return LinearMap(m, cone or PolyhedralCone.orthant(len(m)))
    if kind == "pwl":
        regions = [ConicRegion.make(r["matrix"], r.get("strict", ()), r.get("weak", ())) for r in data["regions"]]
        n = len(regions[0].matrix)
        return PiecewiseLinearMap(regions, cone or PolyhedralCone.orthant(n), on_space=bool(data.get("on_space", False)))
    if kind in ("min_linear", "max_linear"):
        cls = MinLinearMap if kind == "min_linear" else MaxLinearMap
        mats = [_square(m) for m in data["matrices"]]
        return cls(mats, cone or PolyhedralCone.orthant(len(mats[0])))
    if kind == "compose":
        return ComposedMap([map_from_dict(d, cone) for d in data["maps"]])
    if kind == "scaled":
        return ScaledMap(data["factor"], map_from_dict(data["map"], cone))
    if kind == "builtin":
        from .counterexample import BUILTINS
        name = data["name"]
        if name not in BUILTINS:
            raise MapError(f"unknown builtin {name!r}")
        return BUILTINS[name]()
    raise MapError(f"unknown map type {kind!r}")
