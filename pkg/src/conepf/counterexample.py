"""The three-sector map on the quarter plane with a two-dimensional
eigencone, and a machine-checked report of its properties.

The map is ``[[2,2],[1,1]] x`` on ``x1 > 2 x2``, ``3 x`` on the closed middle
sector ``x1 <= 2 x2, x2 <= 2 x1``, and ``[[1,1],[2,2]] x`` on ``x2 > 2 x1``.
It is continuous, 1-homogeneous, strongly positive and strictly
order-preserving, yet every vector of the middle sector is an eigenvector
for the eigenvalue 3.

Everything here is exact. Sampled pairs are integer vectors ``X, Y`` read
as ``x = X/q, y = Y/q`` for a random ``q <= 10**4``. Every property checked
is invariant under positive scaling, so the checks run on the integer
numerators.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _rational as Q
from .cone import PolyhedralCone, contains, interior_contains, sample_boundary_exact
from .maps import ConicRegion, PiecewiseLinearMap, classify_positivity

NAME = "mahadevan_counterexample"
A1 = ((2, 2), (1, 1))
A3 = ((1, 1), (2, 2))
THREE = ((3, 0), (0, 3))
SECTORS = ("K1", "K2", "K3")
MAX_DEN = 10_000


class CertificateError(AssertionError):
    """A sub-assertion of the report failed; carries the exact data."""

    def __init__(self, claim: str, data):
        super().__init__(f"{claim}: {data}")
        self.claim = claim
        self.data = data


class SectorMap(PiecewiseLinearMap):
    """The builtin three-sector map (serializes by name)."""

    def to_dict(self):
        return {"type": "builtin", "name": NAME}

    def sector(self, x) -> str:
        return SECTORS[self.region_of(x)]

    def __repr__(self):
        return "SectorMap()"


def build_example1() -> SectorMap:
    """The exact map; continuity and cover are validated at construction."""
    regions = [
        ConicRegion.make(A1, strict=[(1, -2)]),
        ConicRegion.make(THREE, weak=[(-1, 2), (2, -1)]),
        ConicRegion.make(A3, strict=[(-2, 1)]),
    ]
    T = SectorMap(regions, PolyhedralCone.orthant(2))
    for ray in ((2, 1), (1, 2)):
        left = Q.matvec(A1 if ray == (2, 1) else A3, ray)
        if left != Q.matvec(THREE, ray):
            raise CertificateError("continuity on shared ray", (ray, left))
    return T


BUILTINS = {NAME: build_example1}


# exact integer helpers ---------------------------------------------------------

def _sector(x) -> int:
    if x[0] > 2 * x[1]:
        return 1
    if x[1] > 2 * x[0]:
        return 3
    return 2


def _T(x):
    s = _sector(x)
    if s == 1:
        t = x[0] + x[1]
        return (2 * t, t)
    if s == 3:
        t = x[0] + x[1]
        return (t, 2 * t)
    return (3 * x[0], 3 * x[1])


def _prec(a, b) -> bool:
    """``a < b`` in the orthant order: ``b - a`` nonnegative and nonzero."""
    d0, d1 = b[0] - a[0], b[1] - a[1]
    return d0 >= 0 and d1 >= 0 and (d0 or d1)


def _swap(x):
    return (x[1], x[0])


# sampling -----------------------------------------------------------------------

def _draw_in_sector(rng, s: int, M: int):
    r = rng.random()
    if s == 2:
        if r < 0.125:
            k = int(rng.integers(1, M // 2))
            return (2 * k, k) if rng.random() < 0.5 else (k, 2 * k)
        a = int(rng.integers(1, M + 1))
        b = int(rng.integers(-(-a // 2), 2 * a + 1))
        return (a, b) if rng.random() < 0.5 else (b, a)
    x2 = 0 if r < 0.125 else int(rng.integers(0, M + 1))
    x1 = int(rng.integers(2 * x2 + 1, 2 * x2 + M + 1))
    return (x1, x2) if s == 1 else (x2, x1)


def _draw_step(rng, L: int):
    r = rng.random()
    if r < 0.25:
        return (int(rng.integers(1, L + 1)), 0)
    if r < 0.5:
        return (0, int(rng.integers(1, L + 1)))
    while True:
        d = (int(rng.integers(0, L + 1)), int(rng.integers(0, L + 1)))
        if d != (0, 0):
            return d


def _sample_pairs(rng, lo: int, hi: int, count: int, M: int = MAX_DEN):
    """``count`` pairs ``X < Y`` with ``X`` in sector ``lo`` and ``Y`` in ``hi``."""
    L = M if lo == hi else 6 * M
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 200 * count + 1000:
            raise RuntimeError(f"pair sampler for sectors {lo}->{hi} is starved")
        X = _draw_in_sector(rng, lo, M)
        if lo != hi and rng.random() < 0.5:
            # aim the step at the target sector so acceptance stays high
            Y = _draw_in_sector(rng, hi, 6 * M)
            if not _prec(X, Y):
                continue
        else:
            d = _draw_step(rng, L)
            Y = (X[0] + d[0], X[1] + d[1])
        if _sector(Y) == hi:
            out.append((X, Y, int(rng.integers(1, MAX_DEN + 1))))
    return out


# case analysis --------------------------------------------------------------------

CASES = (
    ("i", 1, 1), ("i", 2, 2), ("i", 3, 3),
    ("ii", 1, 3), ("ii", 3, 1),
    ("iii", 1, 2), ("iii", 2, 1), ("iii", 3, 2), ("iii", 2, 3),
)


def _chain_lt(vals, rels) -> bool:
    for a, b, r in zip(vals, vals[1:], rels):
        if not (a < b if r == "<" else a <= b):
            return False
    return True


def _derive(case: str, lo: int, hi: int, X, Y) -> list:
    """Re-check the displayed inequalities for the pair ``X < Y``; returns
    the names of the ones that fail."""
    bad = []
    if case == "i":
        A = (A1, THREE, A3)[lo - 1]
        if not _prec((0, 0), Q.matvec(A, (Y[0] - X[0], Y[1] - X[1]))):
            bad.append("linear-branch")
        return bad
    # reduce the K3-side configurations to the K1-side ones by the coordinate swap
    if (lo, hi) in ((3, 1), (3, 2), (2, 3)):
        X, Y = _swap(X), _swap(Y)
        lo, hi = {3: 1, 1: 3, 2: 2}[lo], {3: 1, 1: 3, 2: 2}[hi]
    x1, x2 = X
    y1, y2 = Y
    if (lo, hi) == (1, 3):
        # 2x2 < x1 <= y1 < y2/2, scaled by 2
        if not _chain_lt((4 * x2, 2 * x1, 2 * y1, y2), ("<", "<=", "<")):
            bad.append("sector-1-to-3 coordinate chain")
        # x1+x2 < 3x1/2 <= 3y1/2 < (y1+y2)/2, scaled by 2
        if not _chain_lt((2 * (x1 + x2), 3 * x1, 3 * y1, y1 + y2), ("<", "<=", "<")):
            bad.append("sector-1-to-3 image chain")
    elif (lo, hi) == (1, 2):
        if not _chain_lt((2 * x2, x1, y1, 2 * y2), ("<", "<=", "<=")):
            bad.append("sector-1-to-2 coordinate chain")
        if not (2 * (x1 + x2) < 3 * y1 and x1 + x2 < 3 * y2):
            bad.append("sector-1-to-2 image bound")
    elif (lo, hi) == (2, 1):
        # here the larger vector Y lies in K1: the roles of the display are (x, y) = (Y, X)
        x1, x2, y1, y2 = Y[0], Y[1], X[0], X[1]
        if not (x1 > 2 * x2 and 2 * x2 >= 2 * y2 and 2 * y2 >= y1):
            bad.append("sector-2-to-1 coordinate chain")
        if not (2 * (x1 + x2) > 3 * y1 and x1 + x2 > 3 * y2):
            bad.append("sector-2-to-1 image bound")
    return bad


@dataclass
class CaseResult:
    case: str
    smaller: str
    larger: str
    pairs: int
    violations: list
    example: tuple

    def to_dict(self):
        X, Y, q = self.example
        return {
            "case": self.case, "smaller_in": self.smaller, "larger_in": self.larger,
            "pairs": self.pairs, "violations": [_witness(v) for v in self.violations],
            "example": _witness((X, Y, q, [])),
        }


def _witness(v):
    X, Y, q, what = v
    x = [str(Fraction(c, q)) for c in X]
    y = [str(Fraction(c, q)) for c in Y]
    return {"x": x, "y": y, "Tx": [str(Fraction(c, q)) for c in _T(X)],
            "Ty": [str(Fraction(c, q)) for c in _T(Y)], "failed": list(what)}


@dataclass
class CaseReport:
    cases: list
    seed: int

    @property
    def total_pairs(self) -> int:
        return sum(c.pairs for c in self.cases)

    @property
    def violations(self) -> int:
        return sum(len(c.violations) for c in self.cases)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self):
        return {"seed": self.seed, "total_pairs": self.total_pairs, "violations": self.violations,
                "cases": [c.to_dict() for c in self.cases]}


def verify_case_analysis(samples_per_case: int = 11_112, seed: int = 0, T=None) -> CaseReport:
    """Sample comparable pairs in every sector configuration and check
    ``T(x) < T(y)`` and the intermediate inequalities exactly.

    ``T`` defaults to the builtin map; its exact evaluation is compared
    against an independent integer evaluation on every sample.
    """
    T = T or build_example1()
    results = []
    for k, (case, lo, hi) in enumerate(CASES):
        rng = np.random.default_rng([seed, k])
        pairs = _sample_pairs(rng, lo, hi, samples_per_case)
        bad = []
        for X, Y, q in pairs:
            tx, ty = T._eval_exact(X), T._eval_exact(Y)
            what = []
            if tx != _T(X) or ty != _T(Y):
                what.append("evaluation mismatch")
            if not _prec(tx, ty):
                what.append("T(x) < T(y)")
            what += _derive(case, lo, hi, X, Y)
            if what:
                bad.append((X, Y, q, what))
        results.append(CaseResult(case, SECTORS[lo - 1], SECTORS[hi - 1], len(pairs), bad, pairs[0]))
    return CaseReport(results, seed)


# refutation report ------------------------------------------------------------------

@dataclass
class Certificate:
    claim: str
    holds: bool
    data: dict = field(default_factory=dict)

    def to_dict(self):
        from ._jsonable import jsonable
        return {"claim": self.claim, "holds": self.holds, "data": jsonable(self.data)}


@dataclass
class RefutationReport:
    hypotheses: list
    eigenvectors: list
    eigencone: list
    conclusions: dict
    seconds: float

    def certificates(self) -> list:
        return self.hypotheses + self.eigenvectors + self.eigencone

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.certificates())

    def to_dict(self):
        return {
            "map": {"type": "builtin", "name": NAME},
            "theorem_hypotheses": [c.to_dict() for c in self.hypotheses],
            "eigenvectors": [c.to_dict() for c in self.eigenvectors],
            "eigencone": [c.to_dict() for c in self.eigencone],
            "conclusions": self.conclusions,
        }

    def to_text(self) -> str:
        lines = ["Three-sector map on the quarter plane: refutation certificates", ""]
        for title, group in (("Hypotheses satisfied", self.hypotheses),
                             ("Eigenvectors (exact)", self.eigenvectors),
                             ("Eigencone", self.eigencone)):
            lines.append(title)
            for c in group:
                lines.append(f"  [{'ok' if c.holds else 'FAILED'}] {c.claim}")
                for k, v in c.to_dict()["data"].items():
                    lines.append(f"      {k}: {v}")
            lines.append("")
        lines.append("Conclusions")
        for k, v in self.conclusions.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines) + "\n"


def _require(cert: Certificate) -> Certificate:
    if not cert.holds:
        raise CertificateError(cert.claim, cert.data)
    return cert


def _hypothesis_certificates(T, pairs_per_case: int, boundary_samples: int, seed: int) -> list:
    from .hypotheses import check_A1

    certs = []
    cases = verify_case_analysis(pairs_per_case, seed, T)
    certs.append(_require(Certificate(
        "strictly order-preserving: x < y implies T(x) < T(y) on every sector configuration",
        cases.ok and cases.total_pairs >= 9 * pairs_per_case,
        {"pairs": cases.total_pairs, "violations": cases.violations,
         "per_case": {f"{c.case}:{c.smaller}<{c.larger}": c.pairs for c in cases.cases}},
    )))

    rng = np.random.default_rng([seed, 101])
    hom_bad = []
    for _ in range(200):
        X = (int(rng.integers(0, 1000)), int(rng.integers(0, 1000)))
        t = Fraction(int(rng.integers(1, 1000)), int(rng.integers(1, 1000)))
        if T._eval_exact(Q.scale(t, X)) != Q.scale(t, T._eval_exact(X)):
            hom_bad.append((X, t))
    certs.append(_require(Certificate(
        "1-homogeneous: conic sectors with linear branches; T(t x) = t T(x) on 200 exact samples",
        not hom_bad, {"violations": hom_bad},
    )))

    cont = {str(r): (Q.matvec(A1 if r == (2, 1) else A3, r), Q.matvec(THREE, r)) for r in ((2, 1), (1, 2))}
    certs.append(_require(Certificate(
        "continuous (hence completely continuous in finite dimension): branches agree on shared rays",
        all(a == b for a, b in cont.values()),
        {ray: [list(a), list(b)] for ray, (a, b) in cont.items()},
    )))

    a1 = check_A1(T, (1, 1), (1, 1), (0, 0), 1, 1)
    certs.append(_require(Certificate(
        "growth condition M T(u) >= u with u = v = (1,1), w = 0, M = 1, p = 1",
        a1.passed, {"T(u)": list(T._eval_exact((1, 1))), "verdict": a1.verdict.value},
    )))

    certs.append(_require(Certificate(
        "cone has nonempty interior", T.cone.is_solid and interior_contains(T.cone, (1, 1)),
        {"interior_point": [1, 1]},
    )))

    pos = classify_positivity(T)
    rays = {str(r): T._eval_exact(r) for r in ((1, 0), (0, 1))}
    brng = np.random.default_rng([seed, 102])
    bpts = sample_boundary_exact(T.cone, brng, boundary_samples, max_den=MAX_DEN)
    bad = [x for x in bpts if not interior_contains(T.cone, T._eval_exact(x))]
    certs.append(_require(Certificate(
        "strongly positive: T maps nonzero cone vectors into the interior",
        pos.grade.name == "STRONGLY_POSITIVE" and pos.certified and not bad
        and all(interior_contains(T.cone, y) for y in rays.values()),
        {"sector_ray_certificate": pos.grade.name.lower(),
         "boundary_ray_images": {k: list(v) for k, v in rays.items()},
         "boundary_samples": len(bpts), "violations": bad},
    )))
    return certs


def _eigen_certificates(T) -> list:
    certs = []
    for x, norm in (((2, 1), "sqrt(5)"), ((1, 1), "sqrt(2)"), ((1, 2), "sqrt(5)")):
        y = T._eval_exact(x)
        certs.append(_require(Certificate(
            f"T({x[0]},{x[1]}) = 3 ({x[0]},{x[1]}); unit eigenvector ({x[0]},{x[1]})/{norm} with eigenvalue 3",
            y == Q.scale(3, x), {"x": list(x), "T(x)": list(y), "sector": T.sector(x)},
        )))
    rays = [(2, 1), (1, 1), (1, 2)]
    distinct = all(not Q.same_ray(a, b) for i, a in enumerate(rays) for b in rays[i + 1:])
    certs.append(_require(Certificate("the three eigenvectors lie on distinct rays", distinct, {})))
    y = T._eval_exact((1, 0))
    certs.append(_require(Certificate(
        "(1,0) is not an eigenvector: T(1,0) = (2,1) is not a multiple of (1,0)",
        not Q.same_ray(y, (1, 0)) and not Q.is_zero(y), {"T(x)": list(y)},
    )))
    return certs


def _eigencone_certificates(T, seed: int, samples: int = 2000) -> list:
    from .spectral import enumerate_eigenpairs_pwl

    certs = []
    basis = [(2, 1), (1, 2)]
    certs.append(_require(Certificate(
        "eigencone for 3 contains (2,1) and (1,2), which are linearly independent: dimension 2",
        Q.rank(basis) == 2 and all(T._eval_exact(b) == Q.scale(3, b) for b in basis),
        {"rays": basis, "rank": Q.rank(basis)},
    )))
    rng = np.random.default_rng([seed, 103])
    wrong = []
    counts = {"K1": 0, "K2": 0, "K3": 0}
    for s in (1, 2, 3):
        for _ in range(samples):
            X = _draw_in_sector(rng, s, MAX_DEN)
            y = T._eval_exact(X)
            eig = Q.same_ray(X, y)
            counts[SECTORS[s - 1]] += 1
            if s == 2 and y != Q.scale(3, X):
                wrong.append((X, "expected eigenvector"))
            if s != 2 and X[0] * X[1] != 0 and eig:
                wrong.append((X, "unexpected eigenvector"))
            if s != 2 and X[0] * X[1] == 0 and eig:
                wrong.append((X, "unexpected eigenvector on the cone boundary"))
    certs.append(_require(Certificate(
        "eigenvectors are exactly the middle sector {x1 <= 2 x2, x2 <= 2 x1}",
        not wrong, {"samples": counts, "violations": wrong},
    )))
    oracle = enumerate_eigenpairs_pwl(T)
    exact_lams = sorted({str(p.exact_lambda) for p in oracle.pairs})
    certs.append(_require(Certificate(
        "sector-by-sector eigen oracle: every cone eigenvalue is 3 and the eigencone has dimension 2",
        exact_lams == ["3"] and oracle.eigencone_dimension(3.0) == 2,
        {"eigenvalues": exact_lams, "rays": [list(p.exact_ray) for p in oracle.pairs],
         "dimension": oracle.eigencone_dimension(3.0)},
    )))
    x, y = (1, 1), (1, Fraction(3, 2))
    diff = Q.sub(T._eval_exact(y), T._eval_exact(x))
    certs.append(_require(Certificate(
        "not strongly order-preserving: x < y with T(y) - T(x) on the cone boundary",
        _prec(x, y) and contains(T.cone, diff) and not interior_contains(T.cone, diff),
        {"x": [str(v) for v in x], "y": [str(v) for v in y], "T(y)-T(x)": [str(v) for v in diff]},
    )))
    return certs


def refutation_report(
    pairs_per_case: int = 11_112, boundary_samples: int = 1000, seed: int = 0
) -> RefutationReport:
    """Certify that the map meets every hypothesis of the uniqueness claim
    while having several unit eigenvectors and a 2-dimensional eigencone.

    Raises CertificateError on the first failing certificate.
    """
    t0 = time.perf_counter()
    T = build_example1()
    hyp = _hypothesis_certificates(T, pairs_per_case, boundary_samples, seed)
    eig = _eigen_certificates(T)
    cone = _eigencone_certificates(T, seed)
    conclusions = {
        "unique_unit_eigenvector_in_cone": "refuted: (2,1)/sqrt(5), (1,1)/sqrt(2), (1,2)/sqrt(5) are all unit eigenvectors",
        "geometric_simplicity": "refuted: the eigencone for 3 has dimension 2",
        "existence": "unaffected: eigenvalue 3 has cone eigenvectors",
        "single_cone_eigenvalue": "unaffected: every cone eigenvalue equals 3",
    }
    return RefutationReport(hyp, eig, cone, conclusions, time.perf_counter() - t0)
