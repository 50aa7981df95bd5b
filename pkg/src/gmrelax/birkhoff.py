"""Optimisation over the Birkhoff polytope of doubly-stochastic matrices.

Contains the linear assignment oracle, a dense two-phase simplex solver and
Frank-Wolfe for the relaxed matching objective ``||AQ - QB||_F^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gmrelax import kernels
from gmrelax.graph import Permutation


def is_doubly_stochastic(m, delta: float = 0.0) -> bool:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.isfinite(m).all():
        return False
    return bool(
        (m >= -delta).all()
        and (np.abs(m.sum(axis=1) - 1.0) <= delta).all()
        and (np.abs(m.sum(axis=0) - 1.0) <= delta).all()
    )


def check_doubly_stochastic(m, delta: float = 1e-9) -> np.ndarray:
    """Return ``m`` as a float array, raising ``ValueError`` unless it is doubly stochastic."""
    m = np.asarray(m, dtype=np.float64)
    if not is_doubly_stochastic(m, delta):
        raise ValueError(f"matrix is not doubly stochastic within {delta:g}")
    return m


def hungarian(cost) -> tuple[Permutation, float]:
    """Minimum-cost assignment; returns ``(sigma, sum_i C[i, sigma[i]])``."""
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if not np.isfinite(c).all():
        raise ValueError("cost matrix has non-finite entries")
    assign = kernels.hungarian(c)
    return Permutation(tuple(int(j) for j in assign)), float(c[np.arange(len(assign)), assign].sum())


def round_to_permutation(q) -> Permutation:
    """Permutation maximising ``sum_i Q[i, sigma[i]]``."""
    return hungarian(-np.asarray(q, dtype=np.float64))[0]


# --- linear programming ----------------------------------------------------

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class LinearProgram:
    """``maximize c^T x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub`` and
    ``lower <= x <= upper`` (lower defaults to 0, upper to +inf; infinite
    lower bounds make a variable free below)."""

    c: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64).ravel()
        nv = self.c.size
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, nv, "equality")
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, nv, "inequality")
        self.lower = np.zeros(nv) if self.lower is None else np.asarray(self.lower, dtype=np.float64).ravel()
        self.upper = np.full(nv, np.inf) if self.upper is None else np.asarray(self.upper, dtype=np.float64).ravel()
        if self.lower.size != nv or self.upper.size != nv:
            raise ValueError("bounds must have one entry per variable")
        for name, arr in (("c", self.c), ("A_eq", self.A_eq), ("b_eq", self.b_eq), ("A_ub", self.A_ub), ("b_ub", self.b_ub)):
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} has non-finite entries")
        if np.isnan(self.lower).any() or np.isnan(self.upper).any() or (self.lower == np.inf).any():
            raise ValueError("invalid bounds")
        if (self.upper == -np.inf).any() or (self.lower > self.upper).any():
            raise ValueError("lower bound exceeds upper bound")

    @property
    def n_vars(self) -> int:
        return self.c.size


def _rows(a, b, nv, what):
    if a is None:
        return np.zeros((0, nv)), np.zeros(0)
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape[1] != nv or a.shape[0] != b.size:
        raise ValueError(f"{what} constraints have shape {a.shape} / {b.shape} for {nv} variables")
    return a, b


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None
    value: float | None
    iterations: int = 0


def simplex_lp(lp: LinearProgram, tol: float = 1e-9, max_iter: int = 200_000) -> LPResult:
    """Dense two-phase primal simplex.

    Dantzig pricing, switching to Bland's rule after a run of degenerate
    pivots so cycling cannot occur.  Dependent equality rows are dropped
    up front and the tableau is periodically rebuilt from the original
    data to stop round-off drift.
    """
    nv = lp.n_vars
    # x = offset + M y with y >= 0
    cols = []
    offset = np.zeros(nv)
    box_rows = []
    for j in range(nv):
        lo, hi = lp.lower[j], lp.upper[j]
        if np.isfinite(lo):
            offset[j] = lo
            cols.append((j, 1.0))
            if np.isfinite(hi):
                box_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            offset[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    ny = len(cols)
    M = np.zeros((nv, ny))
    for k, (j, s) in enumerate(cols):
        M[j, k] = s

    keep_eq = _independent_rows(lp.A_eq)
    a_eq = lp.A_eq[keep_eq] @ M
    b_eq = lp.b_eq[keep_eq] - lp.A_eq[keep_eq] @ offset
    a_ub = lp.A_ub @ M
    b_ub = lp.b_ub - lp.A_ub @ offset
    if box_rows:
        a_box = np.zeros((len(box_rows), ny))
        for r, (k, width) in enumerate(box_rows):
            a_box[r, k] = 1.0
        a_ub = np.vstack([a_ub, a_box])
        b_ub = np.concatenate([b_ub, [w for _, w in box_rows]])

    n_eq, n_ub = a_eq.shape[0], a_ub.shape[0]
    m = n_eq + n_ub
    n_struct = ny + n_ub
    a = np.zeros((m, n_struct))
    a[:n_eq, :ny] = a_eq
    a[n_eq:, :ny] = a_ub
    a[n_eq:, ny:] = np.eye(n_ub)
    b = np.concatenate([b_eq, b_ub])
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    basis = np.full(m, -1, dtype=np.int64)
    for r in range(n_eq, m):
        if not flip[r]:
            basis[r] = ny + (r - n_eq)
    art_rows = np.nonzero(basis < 0)[0]
    n_art = len(art_rows)
    t = np.zeros((m + 1, n_struct + n_art + 1))
    t[:m, :n_struct] = a
    t[:m, -1] = b
    for k, r in enumerate(art_rows):
        t[r, n_struct + k] = 1.0
        basis[r] = n_struct + k

    iterations = 0
    if n_art:
        a_full = t[:m, :-1].copy()
        cost1 = np.zeros(n_struct + n_art)
        cost1[n_struct:] = 1.0
        _price(t, basis, a_full, b, cost1)
        status, it = _run_phase(t, basis, a_full, b, cost1, n_struct, max_iter, tol)
        iterations += it
        if status == kernels.SIMPLEX_ITERATION_LIMIT:
            return LPResult(ITERATION_LIMIT, None, None, iterations)
        if -t[m, -1] > tol * max(1.0, float(np.abs(b).max(initial=0.0))) * 10:
            return LPResult(INFEASIBLE, None, None, iterations)
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= n_struct:
                row = np.abs(t[r, :n_struct])
                j = int(np.argmax(row)) if n_struct else -1
                if j >= 0 and row[j] > tol:
                    kernels.pivot(t, r, j)
                    basis[r] = j
                else:
                    keep[r] = False
        keep_rows = np.concatenate([np.nonzero(keep)[0], [m]])
        t = np.ascontiguousarray(np.delete(t[keep_rows], np.s_[n_struct:n_struct + n_art], axis=1))
        basis = np.ascontiguousarray(basis[keep])
        a = a[keep]
        b = b[keep]
        m = len(basis)

    cost = np.zeros(n_struct)
    cost[:ny] = -(lp.c @ M)
    _price(t, basis, a, b, cost, refactor=True)
    status, it = _run_phase(t, basis, a, b, cost, n_struct, max_iter, tol)
    iterations += it
    if status == kernels.SIMPLEX_ITERATION_LIMIT:
        return LPResult(ITERATION_LIMIT, None, None, iterations)
    if status == kernels.SIMPLEX_UNBOUNDED:
        return LPResult(UNBOUNDED, None, None, iterations)
    y = np.zeros(n_struct)
    y[basis] = np.maximum(t[:m, -1], 0.0)
    x = offset + M @ y[:ny]
    if lp.A_eq.shape[0]:
        resid = float(np.abs(lp.A_eq @ x - lp.b_eq).max())
        if resid > 1e-7 * max(1.0, float(np.abs(lp.b_eq).max())):
            # a dropped (dependent) row disagrees with the kept ones
            return LPResult(INFEASIBLE, None, None, iterations)
    return LPResult(OPTIMAL, x, float(lp.c @ x), iterations)


REFACTOR_EVERY = 64


def _price(t, basis, a_full, b, cost, refactor=False):
    """Recompute the tableau from the original data for the current basis.

    With ``refactor`` the constraint rows are rebuilt as ``B^-1 [A | b]``;
    the reduced-cost row is always rebuilt from ``cost``.  Rebuilding keeps
    round-off from accumulating over long runs of degenerate pivots.
    """
    m = len(basis)
    if refactor:
        bm = a_full[:, basis]
        sol = np.linalg.solve(bm, np.column_stack([a_full, b]))
        sol[np.abs(sol) < 1e-13] = 0.0
        t[:m, :] = sol
    cb = cost[basis]
    t[m, :-1] = cost - cb @ t[:m, :-1]
    t[m, -1] = -cb @ t[:m, -1]


def _run_phase(t, basis, a_full, b, cost, n_enter, max_iter, tol):
    total = 0
    stall = 0
    while True:
        chunk = min(REFACTOR_EVERY, max_iter - total)
        status, it, stall = kernels.simplex_iterate(t, basis, n_enter, chunk, tol, 50, stall)
        total += it
        if status != kernels.SIMPLEX_ITERATION_LIMIT or total >= max_iter:
            _price(t, basis, a_full, b, cost, refactor=True)
            if status == kernels.SIMPLEX_OPTIMAL:
                # confirm optimality on the refreshed tableau
                status, it, stall = kernels.simplex_iterate(t, basis, n_enter, 0, tol, 50, stall)
                if status == kernels.SIMPLEX_ITERATION_LIMIT and total < max_iter:
                    continue
            return status, total
        _price(t, basis, a_full, b, cost, refactor=True)


def _independent_rows(a, tol: float = 1e-9) -> np.ndarray:
    """Indices of a maximal linearly independent subset of the rows of ``a`` (greedy Gram-Schmidt)."""
    basis = np.zeros((0, a.shape[1]))
    keep = []
    for i, row in enumerate(a):
        norm = np.linalg.norm(row)
        if norm == 0.0:
            continue
        r = row - basis.T @ (basis @ row)
        r = r - basis.T @ (basis @ r)
        rn = np.linalg.norm(r)
        if rn > tol * norm:
            basis = np.vstack([basis, r / rn])
            keep.append(i)
    return np.asarray(keep, dtype=np.int64)


# --- Frank-Wolfe -----------------------------------------------------------


@dataclass
class FWResult:
    Q: np.ndarray
    objective: float
    dual_gap: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def relaxed_objective(a, b, q) -> float:
    r = a @ q - q @ b
    return float(np.sum(r * r))


def relaxed_gradient(a, b, q) -> np.ndarray:
    """Gradient of ``||AQ - QB||_F^2`` for symmetric ``A`` and ``B``."""
    r = a @ q - q @ b
    return 2.0 * (a @ r - r @ b)


def frank_wolfe(a, b, q0, tol: float = 1e-9, max_iter: int = 50_000, debug: bool = False) -> FWResult:
    """Minimise ``||AQ - QB||_F^2`` over doubly-stochastic ``Q`` from ``q0``.

    Each step moves towards the permutation returned by the assignment oracle
    on the gradient, with the exact minimising step length.  Stops when the
    Frank-Wolfe gap ``<grad, Q - S>`` drops to ``tol`` or after ``max_iter``
    steps.  With ``debug`` set, monotone decrease and feasibility are
    asserted at every step and the objective history is kept.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    q = np.array(q0, dtype=np.float64, copy=True)
    if a.shape != b.shape or a.shape != q.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"size mismatch: A {a.shape}, B {b.shape}, Q0 {q.shape}")
    check_doubly_stochastic(q, 1e-9)
    n = a.shape[0]
    rows = np.arange(n)
    history = []
    r = a @ q - q @ b
    f = float(np.sum(r * r))
    gap = np.inf
    it = 0
    converged = False
    while True:
        grad = 2.0 * (a @ r - r @ b)
        assign = kernels.hungarian(grad)
        d = -q
        d[rows, assign] += 1.0
        gap = -float(np.sum(grad * d))
        if debug:
            history.append(f)
        if gap <= tol:
            converged = True
            break
        if it >= max_iter:
            break
        e = a @ d - d @ b
        quad = float(np.sum(e * e))
        lin = 2.0 * float(np.sum(r * e))
        if quad <= 0.0:
            if lin >= 0.0:
                break
            gamma = 1.0
        else:
            gamma = min(1.0, max(0.0, -lin / (2.0 * quad)))
        if gamma == 0.0:
            break
        q += gamma * d
        r = r + gamma * e
        f_new = float(np.sum(r * r))
        if debug:
            assert f_new <= f + 1e-12 * max(1.0, f), (f, f_new)
            assert is_doubly_stochastic(q, 1e-9)
        f = f_new
        it += 1
    r = a @ q - q @ b
    return FWResult(Q=q, objective=float(np.sum(r * r)), dual_gap=gap, iterations=it, converged=converged, history=history)
