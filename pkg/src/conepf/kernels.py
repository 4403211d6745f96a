"""Hot loops for floating-point map evaluation and orbit iteration.

A map is lowered to a :class:`Plan`: a flat list of stages (linear,
piecewise-linear, componentwise min, componentwise max) applied in order.
Two interchangeable backends run plans: the compiled ``_ckernels``
extension and the numpy fallback ``_pykernels``. The compiled one is used
when it imports, unless ``CONEPF_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

LINEAR, PWL, MIN, MAX = 0, 1, 2, 3
_KINDS = {"linear": LINEAR, "pwl": PWL, "min": MIN, "max": MAX}

# status codes shared by both backends
OK, NOT_CONVERGED, HIT_KERNEL, GAP = 0, 1, 2, 3


class MapError(ValueError):
    pass


class Plan(NamedTuple):
    n: int
    kinds: np.ndarray       # int32[S]
    mat_start: np.ndarray   # int32[S]
    mat_count: np.ndarray   # int32[S]
    mats: np.ndarray        # float64[M, n, n]
    row_start: np.ndarray   # int32[M]
    row_count: np.ndarray   # int32[M]
    rows: np.ndarray        # float64[R, n]
    strict: np.ndarray      # int32[R]


def compile_plan(n: int, stages) -> Plan:
    kinds, mstart, mcount = [], [], []
    mats, rstart, rcount, rows, strict = [], [], [], [], []
    for kind, matrices, regions in stages:
        kinds.append(_KINDS[kind])
        mstart.append(len(mats))
        mcount.append(len(matrices))
        for k, m in enumerate(matrices):
            mats.append(np.array(m, dtype=float))
            rstart.append(len(rows))
            if regions is None:
                rcount.append(0)
                continue
            region_rows, flags = regions[k]
            rcount.append(len(region_rows))
            rows.extend(np.array(r, dtype=float) for r in region_rows)
            strict.extend(flags)
    return Plan(
        n,
        np.array(kinds, dtype=np.int32),
        np.array(mstart, dtype=np.int32),
        np.array(mcount, dtype=np.int32),
        np.ascontiguousarray(np.array(mats, dtype=float).reshape(-1, n, n)),
        np.array(rstart, dtype=np.int32),
        np.array(rcount, dtype=np.int32),
        np.ascontiguousarray(np.array(rows, dtype=float).reshape(-1, n)),
        np.array(strict, dtype=np.int32),
    )


def _load_backend():
    if os.environ.get("CONEPF_PURE_PYTHON", "") not in ("", "0"):
        from . import _pykernels as impl
        return impl, "python"
    try:
        from . import _ckernels as impl
        return impl, "cython"
    except ImportError:
        from . import _pykernels as impl
        return impl, "python"


_impl, BACKEND = _load_backend()


def use_backend(name: str) -> None:
    """Switch backends at runtime (``"cython"`` or ``"python"``)."""
    global _impl, BACKEND
    if name == "python":
        from . import _pykernels as impl
    elif name == "cython":
        from . import _ckernels as impl
    else:
        raise ValueError(name)
    _impl, BACKEND = impl, name


def backend_module(name: str):
    if name == "python":
        from . import _pykernels as impl
    else:
        from . import _ckernels as impl
    return impl


def apply_batch(plan: Plan, X: np.ndarray, tol: float, impl=None) -> np.ndarray:
    impl = impl or _impl
    X = np.ascontiguousarray(X, dtype=float)
    Y, status = impl.apply_batch(plan, X, tol)
    if status != OK:
        raise MapError("partition gap")
    return Y


def orbit_lognorms(plan: Plan, X: np.ndarray, n_steps: int, tol: float, impl=None):
    """Renormalized orbits of the unit rows of ``X``.

    Returns ``(L, Xf)`` with ``L[i, k] = log |T^(k+1) x_i|`` for the unit
    start ``x_i`` (``-inf`` once the orbit hits zero) and ``Xf`` the final
    unit iterates.
    """
    impl = impl or _impl
    X = np.ascontiguousarray(X, dtype=float)
    L, Xf, status = impl.orbit_lognorms(plan, X, int(n_steps), tol)
    if status != OK:
        raise MapError("partition gap")
    return L, Xf


def power_iterate(plan: Plan, X0: np.ndarray, max_iter: int, tol: float, region_tol: float, impl=None):
    """Normalized power iteration from each row of ``X0``.

    Returns ``(status, X, lam, iters)``: per start, the iterate ``x_k`` at
    which ``|x_(k+1) - x_k| <= tol`` first held and ``lam = |T(x_k)|``.
    """
    impl = impl or _impl
    X0 = np.ascontiguousarray(X0, dtype=float)
    return impl.power_iterate(plan, X0, int(max_iter), tol, region_tol)
