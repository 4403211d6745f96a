"""numpy implementation of the plan kernels, vectorized across rows."""

import numpy as np

LINEAR, PWL, MIN, MAX = 0, 1, 2, 3
OK, NOT_CONVERGED, HIT_KERNEL, GAP = 0, 1, 2, 3


def _stage(plan, s, X, tol):
    kind = plan.kinds[s]
    a, c = plan.mat_start[s], plan.mat_count[s]
    mats = plan.mats[a:a + c]
    if kind == LINEAR:
        return X @ mats[0].T, True
    if kind == MIN:
        return np.min(np.einsum("kij,mj->kmi", mats, X), axis=0), True
    if kind == MAX:
        return np.max(np.einsum("kij,mj->kmi", mats, X), axis=0), True
    m = X.shape[0]
    thr = tol * np.linalg.norm(X, axis=1)
    choice = np.full(m, -1)
    for closure in (False, True):
        for k in range(c):
            r0, rc = plan.row_start[a + k], plan.row_count[a + k]
            ok = choice < 0
            if rc:
                S = X @ plan.rows[r0:r0 + rc].T
                flags = plan.strict[r0:r0 + rc].astype(bool)
                if closure:
                    ok &= np.all(S >= -thr[:, None], axis=1)
                else:
                    ok &= np.all(np.where(flags, S > thr[:, None], S >= -thr[:, None]), axis=1)
            choice[ok] = k
        if np.all(choice >= 0):
            break
    if np.any(choice < 0):
        return None, False
    Y = np.einsum("mij,mj->mi", mats[choice], X)
    return Y, True


def _eval(plan, X, tol):
    for s in range(len(plan.kinds)):
        X, ok = _stage(plan, s, X, tol)
        if not ok:
            return None
    return X


def apply_batch(plan, X, tol):
    if X.shape[0] == 0:
        return X.copy(), OK
    Y = _eval(plan, X, tol)
    if Y is None:
        return np.zeros_like(X), GAP
    return Y, OK


def orbit_lognorms(plan, X, n_steps, tol):
    m = X.shape[0]
    L = np.full((m, n_steps), -np.inf)
    nrm = np.linalg.norm(X, axis=1)
    cur = np.zeros_like(X)
    alive = nrm > 0
    cur[alive] = X[alive] / nrm[alive, None]
    acc = np.zeros(m)
    for k in range(n_steps):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        Y = _eval(plan, cur[idx], tol)
        if Y is None:
            return L, cur, GAP
        ny = np.linalg.norm(Y, axis=1)
        dead = ny == 0
        live = ~dead
        acc[idx[live]] += np.log(ny[live])
        L[idx[live], k] = acc[idx[live]]
        cur[idx[live]] = Y[live] / ny[live, None]
        cur[idx[dead]] = 0.0
        alive[idx[dead]] = False
    return L, cur, OK


def power_iterate(plan, X0, max_iter, tol, region_tol):
    m, n = X0.shape
    status = np.full(m, NOT_CONVERGED, dtype=np.int32)
    lam = np.zeros(m)
    iters = np.zeros(m, dtype=np.int64)
    nrm = np.linalg.norm(X0, axis=1)
    cur = X0 / np.where(nrm > 0, nrm, 1.0)[:, None]
    status[nrm == 0] = HIT_KERNEL
    active = nrm > 0
    for k in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        Y = _eval(plan, cur[idx], region_tol)
        if Y is None:
            status[idx] = GAP
            break
        ny = np.linalg.norm(Y, axis=1)
        dead = ny == 0
        status[idx[dead]] = HIT_KERNEL
        active[idx[dead]] = False
        live = ~dead
        li = idx[live]
        nxt = Y[live] / ny[live, None]
        conv = np.linalg.norm(nxt - cur[li], axis=1) <= tol
        lam[li] = ny[live]
        iters[li] = k + 1
        done = li[conv]
        status[done] = OK
        active[done] = False
        still = li[~conv]
        cur[still] = nxt[~conv]
    return status, cur, lam, iters
