"""Cone spectral quantities and eigenpairs of 1-homogeneous maps.

Orbits are iterated with renormalization and accumulated log-norms, so
``T^n`` is never formed explicitly and nothing overflows. The
piecewise-linear eigen oracle solves each region's linear eigenproblem
and keeps the eigenvectors that fall in the region, exactly when the
eigenvalue is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from . import _rational as Q
from . import kernels
from .cone import (
    DEFAULT_TOL, contains, extreme_rays, interior_contains, is_exact,
    polyhedral_faces, sample_boundary, sample_points,
)
from .maps import ConeMap, MapError, as_piecewise
from .verdicts import HypothesisVerdict, Verdict


@dataclass
class Estimate:
    value: float
    method: str                 # exact | sampled | iterative | oracle
    n: int = 0
    residual: float = 0.0
    extra: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        from ._jsonable import jsonable
        out = {"value": self.value, "method": self.method, "n": self.n, "residual": self.residual}
        out.update(jsonable(self.extra))
        return jsonable(out)


@dataclass
class EigenPair:
    lam: float
    x: np.ndarray
    location: str               # interior | boundary
    method: str                 # power_iteration | region_oracle
    residual: float
    exact_lambda: Optional[object] = None
    exact_ray: Optional[tuple] = None
    region: Optional[int] = None
    iterations: int = 0

    def residual_ok(self, T: ConeMap, residual_tol: float = 1e-8) -> bool:
        r = np.linalg.norm(T.apply(self.x) - self.lam * self.x)
        return bool(r <= residual_tol * max(abs(self.lam), 1.0) * np.linalg.norm(self.x))

    def to_dict(self):
        from ._jsonable import jsonable
        out = {
            "lambda": self.lam, "x": self.x, "location": self.location,
            "method": self.method, "residual": self.residual,
        }
        if self.exact_ray is not None:
            out["exact_ray"] = [str(v) for v in self.exact_ray]
            out["exact_lambda"] = str(self.exact_lambda)
        if self.region is not None:
            out["region"] = self.region
        if self.iterations:
            out["iterations"] = self.iterations
        return jsonable(out)


def _location(cone, x) -> str:
    if cone.is_solid and interior_contains(cone, x):
        return "interior"
    return "boundary"


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# cone norm -------------------------------------------------------------------

def _face_critical_norms(A: np.ndarray, rows_f: np.ndarray, face_rays) -> float:
    """Max of |A x| over unit x in a face, from the critical points of the
    Rayleigh quotient restricted to the face's span."""
    R = np.array(face_rays, dtype=float)
    U, s, _ = np.linalg.svd(R.T, full_matrices=False)
    B = U[:, s > 1e-12 * s[0]]
    AB = A @ B
    _, vecs = np.linalg.eigh(AB.T @ AB)
    best = 0.0
    for k in range(vecs.shape[1]):
        for sign in (1.0, -1.0):
            x = sign * (B @ vecs[:, k])
            if rows_f.size == 0 or np.all(rows_f @ x >= -1e-12):
                best = max(best, float(np.linalg.norm(A @ x)))
    return best


def cone_norm(T: ConeMap, budget: int = 2000, seed: int = 0) -> Estimate:
    """Estimate of sup |T x| over unit vectors x of the cone.

    Maps with a piecewise-linear form are handled face by face: on every face
    of every region the supremum of |A x| / |x| is attained at a critical
    point of the restricted quotient, so the maximum over all faces is the
    exact value (up to rounding). Other maps are sampled.
    """
    cone = T.cone
    try:
        P = as_piecewise(T)
    except MapError:
        P = None
    if P is not None:
        best = 0.0
        for i, region in enumerate(P.regions):
            rows = list(region.rows) + list(cone.facet_normals)
            A = np.array(region.matrix, dtype=float)
            rows_f = np.array(rows, dtype=float)
            for face in polyhedral_faces(rows, cone.dim):
                best = max(best, _face_critical_norms(A, rows_f, face))
        return Estimate(best, "exact", n=1)
    rng = np.random.default_rng(seed)
    X = np.vstack([cone.generators_f, sample_points(cone, rng, budget), sample_boundary(cone, rng, budget // 4)])
    vals = np.linalg.norm(T.apply_many(X), axis=1)
    return Estimate(float(vals.max()), "sampled", n=len(X))


# Bonsall radius and local growth -------------------------------------------

def _start_vectors(T: ConeMap, budget: int, seed: int) -> np.ndarray:
    cone = T.cone
    rays = [cone.generators_f]
    try:
        P = as_piecewise(T)
        for i in range(len(P.regions)):
            rays.append(np.array([_unit(g) for g in P.region_rays(i)]).reshape(-1, cone.dim))
    except MapError:
        pass
    rng = np.random.default_rng(seed)
    rays.append(_unit(np.array(cone.center, dtype=float))[None, :])
    rays.append(sample_points(cone, rng, budget))
    rays.append(sample_boundary(cone, rng, max(1, budget // 4)))
    return np.vstack(rays)


def bonsall_radius(
    T: ConeMap, n_max: int = 64, budget: int = 256, seed: int = 0, tol: float = DEFAULT_TOL
) -> Estimate:
    """Estimate of lim |T^n|_+^(1/n) from renormalized orbits.

    ``|T^n|_+`` is estimated by the largest ``|T^n x|`` over unit start
    vectors: region rays, random cone points, and the end points of a first
    round of orbits (a warm restart that puts starts near the dominant
    rays). Every start is a cone vector, so each term is a lower estimate
    of the true cone norm of ``T^n``.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    X = _start_vectors(T, budget, seed)
    L1, Xf = kernels.orbit_lognorms(T.plan, X, n_max, tol)
    alive = np.linalg.norm(Xf, axis=1) > 0
    L = L1
    if alive.any():
        L2, _ = kernels.orbit_lognorms(T.plan, Xf[alive], n_max, tol)
        L = np.vstack([L1, L2])
    if np.isnan(L).any():
        raise FloatingPointError("NaN in orbit log-norms")
    best = L.max(axis=0)
    ks = np.arange(1, n_max + 1)
    seq = np.where(np.isfinite(best), np.exp(best / ks), 0.0)
    value = float(seq[-1])
    change = abs(seq[-1] - seq[-2]) / seq[-1] if n_max > 1 and seq[-1] > 0 else 0.0
    return Estimate(
        value, "iterative", n=n_max, residual=float(change),
        extra={"sequence": seq.tolist(), "starts": int(L.shape[0])},
    )


def local_mu(T: ConeMap, x, n_max: int = 64, tol: float = DEFAULT_TOL) -> Estimate:
    """Estimate of limsup |T^n x|^(1/n).

    The value is the geometric-mean growth factor of the orbit over the
    trailing half of the window, ``exp((L_n - L_(n/2)) / (n - n/2))``, which
    removes the ``log|x| / n`` transient that raw n-th roots carry. The
    trailing maximum of the raw n-th roots is kept in ``extra``.
    """
    xf = np.asarray(x, dtype=float)
    nx = np.linalg.norm(xf)
    if nx == 0:
        raise ValueError("local growth rate of the zero vector is undefined")
    if not T.on_space and not contains(T.cone, xf, tol * max(1.0, nx)):
        raise MapError("outside cone")
    L, _ = kernels.orbit_lognorms(T.plan, xf[None, :], n_max, tol)
    L = L[0] + math.log(nx)
    ks = np.arange(1, n_max + 1)
    h = n_max // 2
    if not np.isfinite(L[-1]):
        return Estimate(0.0, "iterative", n=n_max, extra={"orbit": "reaches zero"})
    base = L[h - 1] if h >= 1 else math.log(nx)
    rate = math.exp((L[-1] - base) / (n_max - h))
    roots = np.exp(L[h:] / ks[h:]) if h < n_max else np.exp(L / ks)
    return Estimate(rate, "iterative", n=n_max, extra={"root_trailing_max": float(roots.max())})


# power iteration --------------------------------------------------------------

class OrbitKernelError(ArithmeticError):
    pass


def power_iteration(
    T: ConeMap, x0, max_iter: int = 10_000, tol: float = 1e-12, region_tol: float = DEFAULT_TOL,
) -> Optional[EigenPair]:
    """Normalized power iteration ``x <- T(x) / |T(x)|`` from ``x0``.

    Converges when the displacement of the unit iterate is at most ``tol``;
    returns None otherwise. The residual ``|T(x) - lam x|`` is certified
    afterwards.
    """
    pairs = power_iteration_multistart(T, np.atleast_2d(np.asarray(x0, dtype=float)), max_iter, tol, region_tol)
    return pairs[0]


def power_iteration_multistart(
    T: ConeMap, X0, max_iter: int = 10_000, tol: float = 1e-12, region_tol: float = DEFAULT_TOL,
) -> list:
    X0 = np.ascontiguousarray(X0, dtype=float)
    for x in X0:
        if np.linalg.norm(x) == 0:
            raise ValueError("start vector must be nonzero")
        if not contains(T.cone, x, region_tol * max(1.0, np.linalg.norm(x))):
            raise MapError("outside cone")
    status, X, lam, iters = kernels.power_iterate(T.plan, X0, max_iter, tol, region_tol)
    if np.any(status == kernels.GAP):
        raise MapError("partition gap")
    if np.any(status == kernels.HIT_KERNEL):
        raise OrbitKernelError("orbit hits kernel")
    out = []
    images = T.apply_many(X, region_tol)
    for k in range(len(X0)):
        if status[k] != kernels.OK:
            out.append(None)
            continue
        x = X[k]
        res = float(np.linalg.norm(images[k] - lam[k] * x))
        out.append(EigenPair(float(lam[k]), x.copy(), _location(T.cone, x), "power_iteration", res, iterations=int(iters[k])))
    return out


# piecewise-linear eigen oracle -------------------------------------------------

@dataclass
class EigenCone:
    """Cone eigenvectors of one eigenvalue within one region (union over
    regions is kept as separate pieces)."""

    lam: float
    rays: tuple
    dimension: int
    regions: tuple
    exact_lambda: Optional[object] = None

    @property
    def exact(self) -> bool:
        return self.exact_lambda is not None

    def contains(self, x, tol: float = 1e-9) -> bool:
        R = np.array([_unit(r) for r in self.rays]).T
        xf = np.asarray(x, dtype=float)
        from scipy.optimize import nnls
        _, res = nnls(R, xf)
        return bool(res <= tol * max(1.0, np.linalg.norm(xf)))

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({
            "lambda": self.lam,
            "exact_lambda": None if self.exact_lambda is None else str(self.exact_lambda),
            "rays": [[str(v) if isinstance(v, (int, Fraction)) else float(v) for v in r] for r in self.rays],
            "dimension": self.dimension,
            "regions": list(self.regions),
        })


@dataclass
class EigenOracleResult:
    pairs: list
    cones: list
    r_hat: Estimate

    def eigenvalues(self) -> list:
        return sorted({round(p.lam, 12) for p in self.pairs})

    def positive_eigenvalues(self) -> list:
        return [v for v in self.eigenvalues() if v > 0]

    def eigencone_dimension(self, lam: float, tol: float = 1e-9) -> int:
        rays = [r for c in self.cones if abs(c.lam - lam) <= tol for r in c.rays]
        if not rays:
            return 0
        return int(np.linalg.matrix_rank(np.array([_unit(r) for r in rays]), tol=1e-9))

    def is_single_ray(self, lam: float, tol: float = 1e-9) -> bool:
        units = [_unit(p.x) for p in self.pairs if abs(p.lam - lam) <= tol]
        if not units:
            return False
        return all(np.linalg.norm(u - units[0]) <= 1e-8 for u in units) and self.eigencone_dimension(lam) == 1

    def to_dict(self):
        return {
            "pairs": [p.to_dict() for p in self.pairs],
            "eigencones": [c.to_dict() for c in self.cones],
            "r_hat": self.r_hat.to_dict(),
        }


def _real_eigenvalues(A: np.ndarray) -> list:
    w = np.linalg.eigvals(A)
    scale = max(1.0, float(np.abs(A).max()))
    real = sorted(float(v.real) for v in w if abs(v.imag) <= 1e-9 * scale)
    out = []
    for v in real:
        if not out or abs(v - out[-1]) > 1e-9 * scale:
            out.append(v)
    return out


def _exact_eigenvalue(M: tuple, lam: float):
    """Rational eigenvalue near ``lam`` if one exists (checked exactly)."""
    cand = Q.to_exact(Fraction(lam).limit_denominator(10**6))
    n = len(M)
    shifted = [[Q.normalize(M[i][j] - (cand if i == j else 0)) for j in range(n)] for i in range(n)]
    if Q.det(shifted) == 0:
        return cand, shifted
    return None, None


def _float_nullspace(A: np.ndarray, tol: float) -> np.ndarray:
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > tol))
    return vt[rank:].T


def _region_eigencones(M: tuple, rows: list, n: int):
    """(lam, exact_lam, rays) for each real eigenvalue of ``M`` with
    eigenvectors in ``{x : rows @ x >= 0}`` (a pointed cone)."""
    A = np.array(M, dtype=float)
    scale = max(1.0, float(np.abs(A).max()))
    out = []
    for lam in _real_eigenvalues(A):
        exact_lam, shifted = _exact_eigenvalue(M, lam)
        if exact_lam is not None:
            basis = Q.nullspace(shifted, n)
            d = len(basis)
            # rows restricted to the eigenspace, in coefficient space
            Mrows = [tuple(Q.dot(r, b) for b in basis) for r in rows]
            crays = extreme_rays(Mrows, d) if d > 1 else [c for c in [(1,), (-1,)] if all(Q.dot(r, c) >= 0 for r in Mrows)]
            rays = []
            for c in crays:
                x = (0,) * n
                for cj, b in zip(c, basis):
                    x = Q.add(x, Q.scale(cj, b))
                rays.append(Q.primitive(x))
            if rays:
                out.append((float(exact_lam), exact_lam, rays))
            continue
        B = _float_nullspace(A - lam * np.eye(n), 1e-9 * scale)
        if B.shape[1] != 1:
            continue
        v = B[:, 0]
        R = np.array(rows, dtype=float)
        for sign in (1.0, -1.0):
            x = sign * v
            if np.all(R @ x >= -1e-10):
                out.append((lam, None, [tuple(x)]))
    return out


def enumerate_eigenpairs_pwl(T: ConeMap) -> EigenOracleResult:
    """All cone eigenpairs of a piecewise-linear map (dimension <= 3).

    Eigenvectors on shared region boundaries are attributed to every
    incident region and deduplicated by ray equality. A region whose
    eigenspace meets it in more than a ray contributes its whole eigencone.
    """
    if T.dim > 3:
        raise ValueError("oracle restricted to low dimension")
    P = as_piecewise(T)
    cone = T.cone
    n = cone.dim
    pairs: list[EigenPair] = []
    cones: list[EigenCone] = []
    for i, region in enumerate(P.regions):
        rows = list(region.rows) + list(cone.facet_normals)
        for lam, exact_lam, rays in _region_eigencones(region.matrix, rows, n):
            units = [_unit(r) for r in rays]
            dim = int(np.linalg.matrix_rank(np.array(units), tol=1e-9))
            merged = False
            for c in cones:
                if abs(c.lam - lam) <= 1e-12 and _same_ray_sets(c.rays, rays):
                    c.regions = c.regions + (i,)
                    merged = True
                    break
            if not merged:
                cones.append(EigenCone(lam, tuple(rays), dim, (i,), exact_lam))
            for r, u in zip(rays, units):
                dup = next((p for p in pairs if abs(p.lam - lam) <= 1e-12 and _ray_equal(p, r, u)), None)
                if dup is not None:
                    continue
                res = float(np.linalg.norm(np.array(region.matrix, dtype=float) @ u - lam * u))
                pairs.append(EigenPair(
                    lam, u, _location(cone, u), "region_oracle", res,
                    exact_lambda=exact_lam, exact_ray=r if exact_lam is not None else None, region=i,
                ))
    cones = _drop_subsumed(cones)
    pairs.sort(key=lambda p: (-p.lam, tuple(-p.x)))
    nonneg = [p.lam for p in pairs if p.lam >= 0]
    exact = all(p.exact_lambda is not None for p in pairs)
    r_hat = Estimate(max(nonneg) if nonneg else 0.0, "exact" if exact else "oracle", n=len(pairs))
    if exact and nonneg:
        r_hat.extra["exact_value"] = str(max(p.exact_lambda for p in pairs if p.lam >= 0))
    return EigenOracleResult(pairs, cones, r_hat)


def _drop_subsumed(cones: list) -> list:
    keep = []
    for i, c in enumerate(cones):
        host = next((
            d for j, d in enumerate(cones)
            if j != i and abs(d.lam - c.lam) <= 1e-12 and len(d.rays) > len(c.rays)
            and all(d.contains(r) for r in c.rays)
        ), None)
        if host is None:
            keep.append(c)
        else:
            host.regions = tuple(sorted(set(host.regions) | set(c.regions)))
    return keep


def _ray_equal(p: EigenPair, r, u) -> bool:
    if p.exact_ray is not None and is_exact(r):
        return Q.same_ray(p.exact_ray, r)
    return bool(np.linalg.norm(p.x - u) <= 1e-9)


def _same_ray_sets(a, b) -> bool:
    ua = sorted(tuple(np.round(_unit(r), 12)) for r in a)
    ub = sorted(tuple(np.round(_unit(r), 12)) for r in b)
    return ua == ub


# off-cone real eigenvalues -------------------------------------------------------

@dataclass
class SpaceEigen:
    lam: float
    x: np.ndarray
    stratum: str        # plus | minus | off
    region: int
    residual: float
    on_region_boundary: bool = False

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({"lambda": self.lam, "x": self.x, "stratum": self.stratum,
                         "region": self.region, "residual": self.residual,
                         "on_region_boundary": self.on_region_boundary})


def _lp_point(A_ub, b_ub, A_eq=None, b_eq=None, d=1):
    res = linprog(np.zeros(d), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * d, method="highs")
    return res.x if res.status == 0 else None


def real_eigenvalues_on_space(T: ConeMap, tol: float = 1e-9) -> list:
    """Real eigenvalues of a piecewise-linear map on all of R^n, each with
    one eigenvector per stratum (in K, in -K, or in neither) and region.

    An eigenvector on an interface between regions carries
    ``on_region_boundary`` since its attribution to a region is ambiguous.
    """
    P = as_piecewise(T, on_space=True)
    cone = T.cone
    n = cone.dim
    F = cone.normals_f
    out: list[SpaceEigen] = []
    for i, region in enumerate(P.regions):
        A = np.array(region.matrix, dtype=float)
        R = np.array(region.rows, dtype=float).reshape(-1, n)
        scale = max(1.0, float(np.abs(A).max()))
        for lam in _real_eigenvalues(A):
            B = _float_nullspace(A - lam * np.eye(n), 1e-9 * scale)
            d = B.shape[1]
            if d == 0:
                continue
            RB = R @ B
            found = []
            # stratum K: F B c >= 0, sum F B c >= 1
            for stratum, sgn in (("plus", 1.0), ("minus", -1.0)):
                G = sgn * (F @ B)
                c = _lp_point(np.vstack([-RB, -G, -G.sum(axis=0, keepdims=True)]),
                              np.r_[np.zeros(len(RB) + len(G)), -1.0], d=d)
                if c is not None:
                    found.append((stratum, B @ c))
            # off both cones: some facet a with <a,x> <= -1 and some b with <b,x> >= 1
            off = None
            for a in range(len(F)):
                for b in range(len(F)):
                    c = _lp_point(np.vstack([-RB, (F[a] @ B)[None, :], -(F[b] @ B)[None, :]]),
                                  np.r_[np.zeros(len(RB)), -1.0, -1.0], d=d)
                    if c is not None:
                        off = B @ c
                        break
                if off is not None:
                    break
            if off is not None:
                found.append(("off", off))
            for stratum, x in found:
                x = _unit(x)
                res = float(np.linalg.norm(T.apply_many(x[None, :])[0] - lam * x))
                edge = bool(R.size and np.any(np.abs(R @ x) <= 1e-9))
                out.append(SpaceEigen(lam, x, stratum, i, res, edge))
    return out


# orbit growth ------------------------------------------------------

def _pow_apply_exact(T: ConeMap, x, p: int):
    for _ in range(p):
        x = T._eval_exact(x)
    return x


def orbit_growth_check(
    T: ConeMap, u, v, w, M, p: int, eps, k_max: int = 20,
) -> HypothesisVerdict:
    """Check ``S^(kp)(v) >= (1 + eps/M)^k u`` for ``S = (M + eps)^(1/p) T``.

    By homogeneity ``S^(kp) = (M + eps)^k T^(kp)``, so the whole check runs
    in exact rational arithmetic. Raises ValueError naming the clause when
    the data fail the growth hypothesis ``M T^p(u) >= u``.
    """
    from .hypotheses import check_A1
    pre = check_A1(T, u, v, w, M, p)
    if not pre.passed:
        raise ValueError(f"precondition fails: {pre.detail}")
    ue, ve = Q.vector(u), Q.vector(v)
    Me, ee = Q.to_exact(M), Q.to_exact(eps)
    if ee <= 0:
        raise ValueError("eps must be positive")
    growth = Q.normalize(1 + Fraction(ee) / Me)
    x = ve
    for k in range(1, k_max + 1):
        x = _pow_apply_exact(T, x, p)
        lhs = Q.scale(Q.normalize(Fraction(Me + ee) ** k), x)
        rhs = Q.scale(Q.normalize(Fraction(growth) ** k), ue)
        if not contains(T.cone, Q.sub(lhs, rhs)):
            return HypothesisVerdict(
                "orbit_growth", Verdict.FAIL, witness=(k, v),
                detail=f"bound fails at k={k}",
            )
    return HypothesisVerdict(
        "orbit_growth", Verdict.PASS_CERTIFIED, samples=k_max,
        detail=f"S^(kp) v >= (1+eps/M)^k u for k=1..{k_max}, exact",
    )


# report ------------------------------------------------------------------------

@dataclass
class SpectralReport:
    cone_norm: Estimate
    bonsall: Estimate
    local_mu: dict
    eigen_radius: Estimate
    eigenpairs: list
    chain: dict
    iterations: dict

    def to_dict(self):
        from ._jsonable import jsonable
        return jsonable({
            "cone_norm": self.cone_norm.to_dict(),
            "bonsall": self.bonsall.to_dict(),
            "local_mu": {k: v.to_dict() for k, v in self.local_mu.items()},
            "eigen_radius": self.eigen_radius.to_dict(),
            "eigenpairs": [p.to_dict() for p in self.eigenpairs],
            "chain": self.chain,
            "iterations": self.iterations,
        })


def probe_vectors(T: ConeMap) -> dict:
    cone = T.cone
    probes = {f"ray{i}": np.array(g, dtype=float) for i, g in enumerate(cone.generators)}
    probes["center"] = np.array(cone.center, dtype=float)
    return probes


def spectral_report(
    T: ConeMap, n_max: int = 64, budget: int = 256, seed: int = 0, chain_tol: float = 1e-2,
) -> SpectralReport:
    norm = cone_norm(T, budget=budget, seed=seed)
    bon = bonsall_radius(T, n_max=n_max, budget=budget, seed=seed)
    mus = {}
    for name, x in probe_vectors(T).items():
        try:
            mus[name] = local_mu(T, x, n_max)
        except MapError:
            continue
    pairs = []
    oracle = None
    if T.dim <= 3:
        try:
            oracle = enumerate_eigenpairs_pwl(T)
        except MapError:
            oracle = None
    if oracle is not None:
        r_hat = oracle.r_hat
        pairs = oracle.pairs
    else:
        starts = np.vstack([T.cone.generators_f, _unit(np.array(T.cone.center, dtype=float))[None, :]])
        found = [p for p in power_iteration_multistart(T, starts) if p is not None]
        pairs = found
        r_hat = Estimate(max((p.lam for p in found), default=0.0), "iterative", n=len(found))
    mu_max = max((float(m) for m in mus.values()), default=0.0)
    chain = {
        "r_hat": float(r_hat), "mu_max": mu_max, "bonsall": float(bon), "chain_tol": chain_tol,
        "holds": bool(float(r_hat) <= mu_max + chain_tol and mu_max <= float(bon) + chain_tol),
    }
    return SpectralReport(norm, bon, mus, r_hat, pairs, chain,
                          {"n_max": n_max, "budget": budget, "seed": seed, "backend": kernels.BACKEND})
