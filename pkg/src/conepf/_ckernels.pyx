# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled plan kernels; same contract as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    LINEAR = 0
    PWL = 1
    MIN = 2
    MAX = 3

cdef enum:
    OK = 0
    NOT_CONVERGED = 1
    HIT_KERNEL = 2
    GAP = 3


cdef struct CPlan:
    int n
    int n_stages
    int* kinds
    int* mat_start
    int* mat_count
    double* mats
    int* row_start
    int* row_count
    double* rows
    int* strict


cdef class _Holder:
    """Keeps contiguous copies of the plan arrays alive."""
    cdef object arrays
    cdef CPlan p

    def __cinit__(self, plan):
        cdef cnp.ndarray[int, ndim=1, mode="c"] kinds = np.ascontiguousarray(plan.kinds, dtype=np.intc)
        cdef cnp.ndarray[int, ndim=1, mode="c"] mstart = np.ascontiguousarray(plan.mat_start, dtype=np.intc)
        cdef cnp.ndarray[int, ndim=1, mode="c"] mcount = np.ascontiguousarray(plan.mat_count, dtype=np.intc)
        cdef cnp.ndarray[double, ndim=1, mode="c"] mats = np.ascontiguousarray(plan.mats, dtype=np.float64).ravel()
        cdef cnp.ndarray[int, ndim=1, mode="c"] rstart = np.ascontiguousarray(plan.row_start, dtype=np.intc)
        cdef cnp.ndarray[int, ndim=1, mode="c"] rcount = np.ascontiguousarray(plan.row_count, dtype=np.intc)
        rows_arr = np.ascontiguousarray(plan.rows, dtype=np.float64).ravel()
        strict_arr = np.ascontiguousarray(plan.strict, dtype=np.intc)
        if rows_arr.size == 0:
            rows_arr = np.zeros(1)
            strict_arr = np.zeros(1, dtype=np.intc)
        cdef cnp.ndarray[double, ndim=1, mode="c"] rows = rows_arr
        cdef cnp.ndarray[int, ndim=1, mode="c"] strict = strict_arr
        self.arrays = (kinds, mstart, mcount, mats, rstart, rcount, rows, strict)
        self.p.n = plan.n
        self.p.n_stages = kinds.shape[0]
        self.p.kinds = &kinds[0]
        self.p.mat_start = &mstart[0]
        self.p.mat_count = &mcount[0]
        self.p.mats = &mats[0]
        self.p.row_start = &rstart[0]
        self.p.row_count = &rcount[0]
        self.p.rows = &rows[0]
        self.p.strict = &strict[0]


cdef inline double _norm(const double* x, int n) nogil:
    cdef double s = 0.0
    cdef int i
    for i in range(n):
        s += x[i] * x[i]
    return sqrt(s)


cdef inline void _matvec(const double* a, const double* x, double* y, int n) nogil:
    cdef int i, j
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += a[i * n + j] * x[j]
        y[i] = s


cdef int _pick_region(const CPlan* p, int a, int c, const double* x, double thr) nogil:
    cdef int k, r, j, closure, ok
    cdef double s
    cdef int n = p.n
    for closure in range(2):
        for k in range(c):
            ok = 1
            for r in range(p.row_start[a + k], p.row_start[a + k] + p.row_count[a + k]):
                s = 0.0
                for j in range(n):
                    s += p.rows[r * n + j] * x[j]
                if p.strict[r] and not closure:
                    if not (s > thr):
                        ok = 0
                        break
                elif s < -thr:
                    ok = 0
                    break
            if ok:
                return k
    return -1


cdef int _eval(const CPlan* p, const double* x, double* out, double* buf, double tol) nogil:
    """Evaluate the plan at x into out; buf needs 2n doubles."""
    cdef int n = p.n
    cdef int s, k, i, a, c, kind
    cdef double* cur = buf
    cdef double* nxt = buf + n
    cdef double* tmp
    for i in range(n):
        cur[i] = x[i]
    for s in range(p.n_stages):
        kind = p.kinds[s]
        a = p.mat_start[s]
        c = p.mat_count[s]
        if kind == LINEAR:
            _matvec(p.mats + a * n * n, cur, nxt, n)
        elif kind == PWL:
            k = _pick_region(p, a, c, cur, tol * _norm(cur, n))
            if k < 0:
                return GAP
            _matvec(p.mats + (a + k) * n * n, cur, nxt, n)
        else:
            _matvec(p.mats + a * n * n, cur, nxt, n)
            for k in range(1, c):
                _minmax_into(p.mats + (a + k) * n * n, cur, nxt, n, kind == MIN)
        tmp = cur
        cur = nxt
        nxt = tmp
    for i in range(n):
        out[i] = cur[i]
    return OK


cdef inline void _minmax_into(const double* a, const double* x, double* y, int n, bint take_min) nogil:
    cdef int i, j
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += a[i * n + j] * x[j]
        if take_min:
            if s < y[i]:
                y[i] = s
        elif s > y[i]:
            y[i] = s


def apply_batch(plan, double[:, ::1] X, double tol):
    cdef _Holder h = _Holder(plan)
    cdef Py_ssize_t m = X.shape[0], i
    cdef int n = h.p.n
    Y_arr = np.zeros((m, n))
    cdef double[:, ::1] Y = Y_arr
    cdef double* buf = <double*> malloc(2 * n * sizeof(double))
    cdef int status = OK
    with nogil:
        for i in range(m):
            if _eval(&h.p, &X[i, 0], &Y[i, 0], buf, tol) != OK:
                status = GAP
                break
    free(buf)
    return Y_arr, status


def orbit_lognorms(plan, double[:, ::1] X, int n_steps, double tol):
    cdef _Holder h = _Holder(plan)
    cdef Py_ssize_t m = X.shape[0], i
    cdef int n = h.p.n, k, j
    L_arr = np.full((m, n_steps), -np.inf)
    cur_arr = np.zeros((m, n))
    cdef double[:, ::1] L = L_arr
    cdef double[:, ::1] cur = cur_arr
    cdef double* buf = <double*> malloc(3 * n * sizeof(double))
    cdef double* y = buf + 2 * n
    cdef double nrm, acc
    cdef int status = OK
    with nogil:
        for i in range(m):
            nrm = _norm(&X[i, 0], n)
            if nrm == 0:
                continue
            for j in range(n):
                cur[i, j] = X[i, j] / nrm
            acc = 0.0
            for k in range(n_steps):
                if _eval(&h.p, &cur[i, 0], y, buf, tol) != OK:
                    status = GAP
                    break
                nrm = _norm(y, n)
                if nrm == 0:
                    for j in range(n):
                        cur[i, j] = 0.0
                    break
                acc += log(nrm)
                L[i, k] = acc
                for j in range(n):
                    cur[i, j] = y[j] / nrm
            if status != OK:
                break
    free(buf)
    return L_arr, cur_arr, status


def power_iterate(plan, double[:, ::1] X0, int max_iter, double tol, double region_tol):
    cdef _Holder h = _Holder(plan)
    cdef Py_ssize_t m = X0.shape[0], i
    cdef int n = h.p.n, k, j
    status_arr = np.full(m, NOT_CONVERGED, dtype=np.int32)
    lam_arr = np.zeros(m)
    iters_arr = np.zeros(m, dtype=np.int64)
    cur_arr = np.zeros((m, n))
    cdef int[::1] status = status_arr
    cdef double[::1] lam = lam_arr
    cdef long long[::1] iters = iters_arr
    cdef double[:, ::1] cur = cur_arr
    cdef double* buf = <double*> malloc(3 * n * sizeof(double))
    cdef double* y = buf + 2 * n
    cdef double nrm, d, diff
    with nogil:
        for i in range(m):
            nrm = _norm(&X0[i, 0], n)
            if nrm == 0:
                status[i] = HIT_KERNEL
                continue
            for j in range(n):
                cur[i, j] = X0[i, j] / nrm
            for k in range(max_iter):
                if _eval(&h.p, &cur[i, 0], y, buf, region_tol) != OK:
                    status[i] = GAP
                    break
                nrm = _norm(y, n)
                if nrm == 0:
                    status[i] = HIT_KERNEL
                    break
                lam[i] = nrm
                iters[i] = k + 1
                d = 0.0
                for j in range(n):
                    diff = y[j] / nrm - cur[i, j]
                    d += diff * diff
                if sqrt(d) <= tol:
                    status[i] = OK
                    break
                for j in range(n):
                    cur[i, j] = y[j] / nrm
    free(buf)
    return status_arr, cur_arr, lam_arr, iters_arr
