"""Pure-Python/numpy implementations of the numerical kernels.

These mirror ``_kernels.pyx`` routine for routine and are used whenever the
compiled extension is unavailable.  They are also the reference the compiled
versions are tested against.
"""

import numpy as np

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITERATION_LIMIT = 2


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi eigenvalue iteration for a symmetric matrix.

    Returns ``(eigenvalues, vectors, sweeps, off_norm)`` with unsorted
    eigenvalues and eigenvectors as columns of ``vectors``.  ``sweeps`` is
    ``-1`` when the sweep cap is hit before the off-diagonal norm falls
    below ``tol * ||a||_F``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.sqrt(np.sum(a * a)), 1e-300)
    off = _off_norm(a)
    sweeps = 0
    while off > tol * scale:
        if sweeps >= max_sweeps:
            return np.diag(a).copy(), v, -1, off
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p] - t * apq
                aqq = a[q, q] + t * apq
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        off = _off_norm(a)
    return np.diag(a).copy(), v, sweeps, off


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return np.sqrt(np.sum(off * off))


def hungarian(cost):
    """Minimum-cost perfect assignment by shortest augmenting paths.

    Returns an int64 array ``assign`` with row ``i`` matched to column
    ``assign[i]``.
    """
    c = np.asarray(cost, dtype=np.float64)
    n = c.shape[0]
    inf = np.inf
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cols = np.nonzero(free)[0]
            cur = c[i0 - 1, cols - 1] - u[i0] - v[cols]
            better = cur < minv[cols]
            minv[cols[better]] = cur[better]
            way[cols[better]] = j0
            k = int(np.argmin(minv[cols]))
            j1 = int(cols[k])
            delta = minv[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = np.empty(n, dtype=np.int64)
    assign[p[1:] - 1] = np.arange(n)
    return assign


def simplex_iterate(tableau, basis, n_enter, max_iter, tol, bland_after=50, stall=0):
    """Run primal simplex pivots on a tableau in place.

    ``tableau`` has one row per constraint followed by the reduced-cost row
    (minimisation); the last column is the right-hand side.  Only columns
    ``< n_enter`` may enter the basis.  Pricing is Dantzig's most negative
    reduced cost with the ratio-test tie broken towards the largest pivot;
    after ``bland_after`` consecutive degenerate pivots it switches to
    Bland's rule (lowest entering index, lowest leaving basis index) until
    the objective moves again, which rules out cycling.  ``bland_after=0``
    gives pure Bland.  ``stall`` carries the degenerate-pivot count across
    calls.  Returns ``(status, iterations, stall)``.
    """
    t = tableau
    m = t.shape[0] - 1
    it = 0
    while True:
        bland = stall >= bland_after
        rc = t[m, :n_enter]
        if bland:
            neg = np.nonzero(rc < -tol)[0]
            if neg.size == 0:
                return SIMPLEX_OPTIMAL, it, stall
            j = int(neg[0])
        else:
            j = int(np.argmin(rc)) if n_enter else 0
            if n_enter == 0 or rc[j] >= -tol:
                return SIMPLEX_OPTIMAL, it, stall
        if it >= max_iter:
            return SIMPLEX_ITERATION_LIMIT, it, stall
        col = t[:m, j]
        rows = np.nonzero(col > tol)[0]
        if rows.size == 0:
            return SIMPLEX_UNBOUNDED, it, stall
        rhs = np.maximum(t[rows, -1], 0.0)
        ratios = rhs / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, best)]
        if bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(col[ties])])
        stall = stall + 1 if best <= tol else 0
        _pivot(t, r, j)
        basis[r] = j
        it += 1


def _pivot(t, r, j):
    t[r] /= t[r, j]
    factors = t[:, j].copy()
    factors[r] = 0.0
    nz = np.nonzero(factors)[0]
    t[nz] -= np.outer(factors[nz], t[r])
    t[nz, j] = 0.0
    t[r, j] = 1.0


def pivot(tableau, r, j):
    """Single pivot on ``(r, j)`` in place."""
    _pivot(tableau, r, j)
