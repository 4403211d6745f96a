"""Small exact linear algebra over the rationals.

Scalars are kept as ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise, so integer data stays on the fast
path of Python's arbitrary precision integers.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]
ExactVector = tuple
ExactMatrix = tuple


def to_exact(value) -> Scalar:
    """Convert ``value`` to an exact scalar.

    Accepts ints, Fractions, floats (converted exactly, no rounding) and
    strings such as ``"3"``, ``"-2/7"`` or ``"0.25"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        frac = Fraction(value)
    elif isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        frac = Fraction(float(value))
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, str):
        frac = Fraction("".join(value.split()))
    else:
        raise TypeError(f"cannot interpret {value!r} as a rational number")
    return frac.numerator if frac.denominator == 1 else frac


def normalize(value: Scalar) -> Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def vector(values: Iterable) -> ExactVector:
    return tuple(to_exact(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> ExactMatrix:
    out = tuple(vector(r) for r in rows)
    if not out:
        raise ValueError("empty matrix")
    width = len(out[0])
    if any(len(r) != width for r in out):
        raise ValueError("ragged matrix rows")
    return out


def as_float(data) -> np.ndarray:
    return np.array(data, dtype=float)


def dot(a: Sequence, b: Sequence) -> Scalar:
    return normalize(sum(x * y for x, y in zip(a, b)))


def matvec(m: ExactMatrix, x: Sequence) -> ExactVector:
    return tuple(dot(row, x) for row in m)


def add(a: Sequence, b: Sequence) -> ExactVector:
    return tuple(normalize(x + y) for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> ExactVector:
    return tuple(normalize(x - y) for x, y in zip(a, b))


def scale(c, a: Sequence) -> ExactVector:
    return tuple(normalize(c * x) for x in a)


def neg(a: Sequence) -> ExactVector:
    return tuple(-x for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def sqnorm(a: Sequence) -> Scalar:
    return dot(a, a)


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def scale_matrix(c, m: ExactMatrix) -> ExactMatrix:
    return tuple(scale(c, row) for row in m)


def identity(n: int, c: Scalar = 1) -> ExactMatrix:
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def _row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(_row_reduce([list(r) for r in rows])[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[ExactVector]:
    """Basis of {x : rows @ x = 0}, scaled to integer entries."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    red, pivots = _row_reduce([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(primitive(v))
    return basis


def primitive(v: Sequence) -> ExactVector:
    """Scale a nonzero rational vector to coprime integers (sign kept)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def det(m: Sequence[Sequence]) -> Scalar:
    a = [[Fraction(v) for v in r] for r in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        result *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return normalize(sign * result)


def same_ray(a: Sequence, b: Sequence) -> bool:
    """True iff a = t*b for some t > 0 (both nonzero)."""
    if is_zero(a) or is_zero(b):
        return False
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return dot(a, b) > 0


def fmt(value: Scalar) -> str:
    return str(value)


def fmt_vector(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"
