# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same algorithms and return conventions as ``_kernels_py``; see that module
for the contracts.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

cnp.import_array()

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITERATION_LIMIT = 2


cdef double _off_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return sqrt(s)


def jacobi_eigh(a_in, double tol=1e-14, int max_sweeps=100):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v_arr = np.eye(n)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef double apq, theta, t, c, s, app, aqq, xp, xq, scale, off
    cdef int sweeps = 0
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += a[p, q] * a[p, q]
    scale = sqrt(scale)
    if scale < 1e-300:
        scale = 1e-300
    with nogil:
        off = _off_norm(a, n)
        while off > tol * scale:
            if sweeps >= max_sweeps:
                sweeps = -1
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if theta >= 0.0:
                        t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                    else:
                        t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    app = a[p, p] - t * apq
                    aqq = a[q, q] + t * apq
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp - s * xq
                        a[k, q] = s * xp + c * xq
                    for k in range(n):
                        a[p, k] = a[k, p]
                        a[q, k] = a[k, q]
                    a[p, p] = app
                    a[q, q] = aqq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - s * xq
                        v[k, q] = s * xp + c * xq
            off = _off_norm(a, n)
    return np.diag(a_arr).copy(), v_arr, sweeps, off


def hungarian(cost):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c_arr = np.ascontiguousarray(cost, dtype=np.float64)
    cdef double[:, ::1] c = c_arr
    cdef Py_ssize_t n = c.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_arr = np.zeros(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.zeros(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] minv_arr = np.empty(n + 1)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] p_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] way_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used_arr = np.zeros(n + 1, dtype=np.uint8)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef double[::1] minv = minv_arr
    cdef cnp.int64_t[::1] p = p_arr
    cdef cnp.int64_t[::1] way = way_arr
    cdef cnp.uint8_t[::1] used = used_arr
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur
    with nogil:
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for j in range(n + 1):
                minv[j] = INFINITY
                used[j] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                delta = INFINITY
                j1 = 0
                for j in range(1, n + 1):
                    if not used[j]:
                        cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                        if cur < minv[j]:
                            minv[j] = cur
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(n + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
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
    assign[p_arr[1:] - 1] = np.arange(n)
    return assign


cdef void _pivot(double[:, ::1] t, Py_ssize_t r, Py_ssize_t j) nogil:
    cdef Py_ssize_t rows = t.shape[0], cols = t.shape[1], i, k
    cdef double piv = t[r, j], f
    for k in range(cols):
        t[r, k] /= piv
    for i in range(rows):
        if i == r:
            continue
        f = t[i, j]
        if f == 0.0:
            continue
        for k in range(cols):
            t[i, k] -= f * t[r, k]
        t[i, j] = 0.0
    t[r, j] = 1.0


def pivot(tableau, Py_ssize_t r, Py_ssize_t j):
    cdef double[:, ::1] t = tableau
    _pivot(t, r, j)


def simplex_iterate(tableau, basis, Py_ssize_t n_enter, long max_iter, double tol, long bland_after=50, long stall=0):
    cdef double[:, ::1] t = tableau
    cdef cnp.int64_t[::1] b = basis
    cdef Py_ssize_t m = t.shape[0] - 1
    cdef Py_ssize_t rhs = t.shape[1] - 1
    cdef Py_ssize_t i, j, r
    cdef long it = 0
    cdef double best, ratio, val, thr, most
    cdef int status
    cdef bint bland
    with nogil:
        while True:
            bland = stall >= bland_after
            j = -1
            if bland:
                for i in range(n_enter):
                    if t[m, i] < -tol:
                        j = i
                        break
            else:
                most = -tol
                for i in range(n_enter):
                    if t[m, i] < most:
                        most = t[m, i]
                        j = i
            if j < 0:
                status = 0
                break
            if it >= max_iter:
                status = 2
                break
            best = INFINITY
            for i in range(m):
                if t[i, j] > tol:
                    val = t[i, rhs]
                    if val < 0.0:
                        val = 0.0
                    ratio = val / t[i, j]
                    if ratio < best:
                        best = ratio
            if best == INFINITY:
                status = 1
                break
            thr = best + tol * (best if best > 1.0 else 1.0)
            r = -1
            for i in range(m):
                if t[i, j] > tol:
                    val = t[i, rhs]
                    if val < 0.0:
                        val = 0.0
                    if val / t[i, j] <= thr:
                        if r < 0:
                            r = i
                        elif bland:
                            if b[i] < b[r]:
                                r = i
                        elif t[i, j] > t[r, j]:
                            r = i
            if best <= tol:
                stall += 1
            else:
                stall = 0
            _pivot(t, r, j)
            b[r] = j
            it += 1
    return status, it, stall
