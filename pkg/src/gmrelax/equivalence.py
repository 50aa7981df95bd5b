"""Deciding whether graph matching and its doubly-stochastic relaxation agree.

For isomorphic inputs ``B = P0 A P0^T`` the relaxed minimisers are exactly
the doubly-stochastic ``P`` with ``AP = PB``; substituting ``Q = P P0``
turns this into ``AQ = QA`` with ``Q`` doubly stochastic.  The problems are
equivalent precisely when ``Q = I`` is the only such matrix.

Two linear programs decide this.  Both maximise the off-diagonal mass
``sum_{p != q} Q[p, q]``, which is zero only at the identity.

*General*: ``n^2`` variables, the commutation equations, row and column
sums, ``Q >= 0``.  Valid for any spectrum.

*Fast* (simple spectrum only): every commuting ``Q`` is diagonal in the
eigenbasis, and the row-sum condition pins the diagonal to 1 on every
eigenvector not orthogonal to ones.  What is left is

    Q(f) = I - L(f),   L(f) = sum_i (1 - f_i) u_i u_i^T

over the ``k`` eigenvectors ``u_i`` orthogonal to ones, with only the
entrywise condition ``Q(f) >= 0`` remaining.  Because ``L(f) 1 = 0`` the
entries of ``L`` sum to zero, so the off-diagonal mass of ``Q(f)`` is
``trace(L) = sum_i (1 - f_i)`` (unit eigenvectors).  The fast LP therefore
has ``k`` free variables ``g_i = 1 - f_i``, maximises ``sum g_i`` and has one
inequality per matrix entry.  The ``f_i`` are not boxed to [0, 1]; only
nonnegativity of ``Q(f)`` is imposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gmrelax import birkhoff
from gmrelax.birkhoff import FWResult, LinearProgram, frank_wolfe, round_to_permutation, simplex_lp
from gmrelax.graph import Graph, Permutation, apply_permutation, barycenter
from gmrelax.spectral import (
    SpectralClassification,
    SpectralDecomposition,
    SpectralError,
    SupportProfile,
    Tolerances,
    analyze,
    has_simple_spectrum,
)

UNIQUE = "unique"
NON_UNIQUE = "non_unique"

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"

MARGIN = 100.0


class CertificateError(RuntimeError):
    """The LP solver failed on a problem that always has a finite optimum."""


def change_of_variables(p, p0: Permutation) -> np.ndarray:
    """``Q = P P0`` with ``P0`` the matrix of ``p0``."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (p0.n, p0.n):
        raise ValueError(f"size mismatch: P is {p.shape}, permutation has n={p0.n}")
    return p @ p0.matrix()


@dataclass(frozen=True)
class CommutantPolytope:
    """The set ``{f : I - sum_i (1 - f_i) u_i u_i^T >= 0}``.

    ``weights[(p, q), i] = u_i[p] u_i[q]`` for the upper-triangular pairs
    listed in ``pairs``; ``Q(f)`` is symmetric so the lower half adds
    nothing.
    """

    k: int
    ortho_vectors: np.ndarray
    pairs: tuple[np.ndarray, np.ndarray]
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.ortho_vectors.shape[0]

    def L(self, f) -> np.ndarray:
        g = 1.0 - np.asarray(f, dtype=np.float64)
        u = self.ortho_vectors
        return (u * g) @ u.T

    def Q(self, f) -> np.ndarray:
        return np.eye(self.n) - self.L(f)

    def contains(self, f, tol: float = 1e-9) -> bool:
        f = np.asarray(f, dtype=np.float64)
        if f.shape != (self.k,):
            return False
        return bool((self.Q(f) >= -tol).all())


def commutant_polytope(dec: SpectralDecomposition, profile: SupportProfile, eps_eig: float = 1e-8) -> CommutantPolytope:
    if not has_simple_spectrum(dec, eps_eig):
        raise SpectralError("repeated eigenvalues: commutant is not diagonal in the eigenbasis; use the general certificate")
    u = dec.U[:, list(profile.ortho_indices)]
    iu = np.triu_indices(dec.n)
    weights = u[iu[0]] * u[iu[1]]
    return CommutantPolytope(k=profile.k, ortho_vectors=u, pairs=iu, weights=weights)


@dataclass
class UniquenessCertificate:
    verdict: str
    lp_optimum: float
    method: str
    witness: np.ndarray | None = None
    witness_f: np.ndarray | None = None
    marginal: bool = False
    iterations: int = 0

    @property
    def unique(self) -> bool:
        return self.verdict == UNIQUE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "lp_optimum": self.lp_optimum,
            "method": self.method,
            "marginal": self.marginal,
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def _is_marginal(opt: float, eps_cert: float) -> bool:
    return eps_cert / MARGIN <= abs(opt) <= eps_cert * MARGIN


def validate_witness(a, q, eps_cert: float) -> list[str]:
    """Problems with a non-uniqueness witness; empty when it is valid."""
    problems = []
    comm = float(np.max(np.abs(a @ q - q @ a)))
    if comm > 1e-7:
        problems.append(f"||AQ - QA||_max = {comm:.3g}")
    if not birkhoff.is_doubly_stochastic(q, 1e-7):
        problems.append("not doubly stochastic")
    dist = float(np.max(np.abs(q - np.eye(q.shape[0]))))
    if dist <= 10 * eps_cert:
        problems.append(f"||Q - I||_max = {dist:.3g} too close to identity")
    return problems


def certify_uniqueness_fast(
    dec: SpectralDecomposition, profile: SupportProfile, eps_cert: float = 1e-7, eps_eig: float = 1e-8
) -> UniquenessCertificate:
    poly = commutant_polytope(dec, profile, eps_eig)
    if poly.k == 0:
        return UniquenessCertificate(UNIQUE, 0.0, "fast_path")
    rhs = (poly.pairs[0] == poly.pairs[1]).astype(np.float64)
    lp = LinearProgram(c=np.ones(poly.k), A_ub=poly.weights, b_ub=rhs, lower=np.full(poly.k, -np.inf))
    res = simplex_lp(lp)
    if res.status != birkhoff.OPTIMAL:
        raise CertificateError(f"fast certificate LP ended with status {res.status}")
    opt = float(res.value)
    cert = UniquenessCertificate(UNIQUE, opt, "fast_path", marginal=_is_marginal(opt, eps_cert), iterations=res.iterations)
    if opt > eps_cert:
        f = 1.0 - res.x
        q = poly.Q(f)
        a = (dec.U * dec.eigenvalues) @ dec.U.T
        problems = validate_witness(a, q, eps_cert)
        if problems:
            raise CertificateError("fast certificate witness invalid: " + "; ".join(problems))
        cert.verdict = NON_UNIQUE
        cert.witness = q
        cert.witness_f = f
    return cert


def general_lp(a) -> LinearProgram:
    """LP over row-major ``vec(Q)``: max off-diagonal mass, ``AQ = QA``, ``Q`` doubly stochastic."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    eye = np.eye(n)
    ones = np.ones((1, n))
    comm = np.kron(a, eye) - np.kron(eye, a.T)
    rows = np.kron(eye, ones)
    cols = np.kron(ones, eye)
    a_eq = np.vstack([comm, rows, cols])
    b_eq = np.concatenate([np.zeros(n * n), np.ones(2 * n)])
    c = (1.0 - eye).ravel()
    return LinearProgram(c=c, A_eq=a_eq, b_eq=b_eq)


def certify_uniqueness_general(a, eps_cert: float = 1e-7) -> UniquenessCertificate:
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    res = simplex_lp(general_lp(a))
    if res.status != birkhoff.OPTIMAL:
        raise CertificateError(f"general certificate LP ended with status {res.status}")
    opt = float(res.value)
    cert = UniquenessCertificate(UNIQUE, opt, "general_lp", marginal=_is_marginal(opt, eps_cert), iterations=res.iterations)
    if opt > eps_cert:
        q = res.x.reshape(n, n)
        problems = validate_witness(a, q, eps_cert)
        if problems:
            raise CertificateError("general certificate witness invalid: " + "; ".join(problems))
        cert.verdict = NON_UNIQUE
        cert.witness = q
    return cert


def certify(g: Graph, tol: Tolerances | None = None, method: str = "auto"):
    """Certificates for ``g`` by ``method``: fast, general, both or auto.

    ``auto`` uses the fast path on simple spectra and the general LP
    otherwise.  Returns a dict keyed by method name.
    """
    tol = tol or Tolerances()
    dec, profile, cls = analyze(g, tol)
    out = {}
    if method in ("fast", "both") or (method == "auto" and cls.simple_spectrum):
        if not cls.simple_spectrum:
            raise SpectralError("fast certificate needs a simple spectrum")
        out["fast_path"] = certify_uniqueness_fast(dec, profile, tol.cert, tol.eig)
    if method in ("general", "both") or (method == "auto" and not cls.simple_spectrum):
        out["general_lp"] = certify_uniqueness_general(g.matrix(), tol.cert)
    if not out:
        raise ValueError(f"unknown certificate method {method!r}")
    return out


@dataclass
class LMatrix:
    matrix: np.ndarray
    row_sums_zero: bool
    symmetric: bool
    offdiag_nonpositive: bool
    diag_nonnegative: bool
    rank: int
    k: int

    @property
    def rank_within_bound(self) -> bool:
        return self.rank <= self.k

    @property
    def is_laplacian(self) -> bool:
        return self.row_sums_zero and self.symmetric and self.offdiag_nonpositive and self.diag_nonnegative


def build_L(dec: SpectralDecomposition, profile: SupportProfile, f, eps: float = 1e-9, eps_eig: float = 1e-8) -> LMatrix:
    """``L = sum_i (1 - f_i) u_i u_i^T`` for a feasible ``f`` with its Laplacian checks."""
    poly = commutant_polytope(dec, profile, eps_eig)
    f = np.asarray(f, dtype=np.float64).ravel()
    if f.shape != (poly.k,):
        raise ValueError(f"expected {poly.k} coordinates, got {f.size}")
    if not poly.contains(f, eps):
        raise ValueError("f lies outside the commutant polytope (I - L has a negative entry)")
    lmat = poly.L(f)
    off = lmat - np.diag(np.diag(lmat))
    sv = np.linalg.svd(lmat, compute_uv=False)
    rank = int((sv > 1e-8 * max(1.0, sv[0] if sv.size else 0.0)).sum())
    return LMatrix(
        matrix=lmat,
        row_sums_zero=bool(np.abs(lmat.sum(axis=1)).max() <= 1e-9),
        symmetric=bool(np.abs(lmat - lmat.T).max() <= 1e-12),
        offdiag_nonpositive=bool(off.max() <= eps),
        diag_nonnegative=bool(np.diag(lmat).min() >= -eps),
        rank=rank,
        k=poly.k,
    )


# --- exact matching --------------------------------------------------------


class NodeCapExceeded(ValueError):
    pass


def match_objective(a: Graph, b: Graph, sigma: Permutation) -> int:
    """``||P A P^T - B||_F^2`` for the matrix ``P`` of ``sigma``, in integers."""
    pa = apply_permutation(a, sigma).adj.astype(np.int64)
    return int(np.sum(pa != b.adj.astype(np.int64)))


def exact_match(a: Graph, b: Graph, node_cap: int = 10) -> tuple[Permutation, int]:
    """Global minimiser of ``||P A P^T - B||_F^2`` over permutations.

    The returned ``sigma`` sends vertex ``i`` of ``B`` to vertex ``sigma[i]``
    of ``A``; when ``B = apply_permutation(A, s)`` an optimal answer with
    objective 0 is ``s`` (or ``s`` composed with an automorphism).  Depth-first
    branch and bound: vertices of ``B`` are placed rarest degree class first,
    candidates are tried by degree closeness, and a branch is cut when the
    per-row mismatch bound reaches the incumbent.
    """
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    n = a.n
    if n > node_cap:
        raise NodeCapExceeded(f"exact matching refused for n={n} > node_cap={node_cap}")
    aa = [[int(x) for x in row] for row in a.adj]
    bb = [[int(x) for x in row] for row in b.adj]
    da = [sum(r) for r in aa]
    db = [sum(r) for r in bb]
    from collections import Counter

    rarity = Counter(db)
    order = sorted(range(n), key=lambda i: (rarity[db[i]], -db[i], i))
    cand = {i: sorted(range(n), key=lambda x: (abs(da[x] - db[i]), x)) for i in range(n)}

    ident = Permutation.identity(n)
    best_sigma = list(ident.map)
    best = match_objective(a, b, ident)
    sigma = [-1] * n
    used = [False] * n
    row_known = [0] * n
    placed: list[int] = []

    def bound() -> int:
        return sum(max(row_known[i], abs(da[sigma[i]] - db[i])) for i in placed)

    def dfs(depth: int) -> bool:
        nonlocal best, best_sigma
        if depth == n:
            total = sum(row_known)
            if total < best:
                best = total
                best_sigma = sigma.copy()
            return best == 0
        i = order[depth]
        for x in cand[i]:
            if used[x]:
                continue
            sigma[i] = x
            used[x] = True
            added = []
            loop = int(aa[x][x] != bb[i][i])
            row_known[i] = loop
            for j in placed:
                mis = int(aa[x][sigma[j]] != bb[i][j])
                if mis:
                    row_known[i] += 1
                    row_known[j] += 1
                    added.append(j)
            placed.append(i)
            if bound() < best and dfs(depth + 1):
                return True
            placed.pop()
            for j in added:
                row_known[j] -= 1
            row_known[i] = 0
            used[x] = False
            sigma[i] = -1
        return False

    dfs(0)
    return Permutation(tuple(best_sigma)), best


# --- relax and round -------------------------------------------------------


@dataclass
class MatchConfig:
    fw_tol: float = 1e-9
    fw_max_iter: int = 50_000
    exact_cap: int = 10
    run_exact: bool = True
    tolerances: Tolerances = field(default_factory=Tolerances)


@dataclass
class MatchReport:
    relaxed: FWResult
    rounded: Permutation
    rounded_objective: int
    exact: Permutation | None
    exact_objective: int | None
    certificate: UniquenessCertificate
    equivalent: bool
    notes: list[str] = field(default_factory=list)

    @property
    def isomorphism_found(self) -> bool:
        return self.rounded_objective == 0

    def to_dict(self) -> dict:
        return {
            "rounded_permutation": list(self.rounded.map),
            "rounded_objective": self.rounded_objective,
            "relaxed_objective": self.relaxed.objective,
            "relaxed_dual_gap": self.relaxed.dual_gap,
            "relaxed_iterations": self.relaxed.iterations,
            "relaxed_converged": self.relaxed.converged,
            "exact_permutation": None if self.exact is None else list(self.exact.map),
            "exact_objective": self.exact_objective,
            "certificate": self.certificate.to_dict(),
            "equivalent": self.equivalent,
            "notes": list(self.notes),
        }


def relax_and_round(a: Graph, b: Graph, config: MatchConfig | None = None) -> MatchReport:
    """Frank-Wolfe from the barycentre, then round to the nearest permutation.

    The relaxed minimiser approximates ``P^T`` where ``P A P^T = B``; the
    reported permutation is in the same orientation as ``exact_match``.
    """
    config = config or MatchConfig()
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    n = a.n
    fw = frank_wolfe(a.matrix(), b.matrix(), barycenter(n), tol=config.fw_tol, max_iter=config.fw_max_iter)
    sigma = round_to_permutation(fw.Q).inverse()
    rounded_obj = match_objective(a, b, sigma)
    certs = certify(a, config.tolerances, "auto")
    cert = next(iter(certs.values()))
    notes = []
    exact = exact_obj = None
    if config.run_exact and n <= config.exact_cap:
        exact, exact_obj = exact_match(a, b, config.exact_cap)
        if exact_obj > 0:
            notes.append("graphs are not isomorphic; the certificate only describes the commutant of A")
    if not fw.converged:
        notes.append(f"Frank-Wolfe stopped after {fw.iterations} iterations with gap {fw.dual_gap:.3g}")
    if cert.verdict == NON_UNIQUE:
        notes.append("commutant of A is not a single point; the relaxation may return a non-permutation")
    if cert.method == "general_lp":
        notes.append("repeated eigenvalues: certificate is outside the scope of the spectral theorems")
    return MatchReport(
        relaxed=fw,
        rounded=sigma,
        rounded_objective=rounded_obj,
        exact=exact,
        exact_objective=exact_obj,
        certificate=cert,
        equivalent=cert.verdict == UNIQUE,
        notes=notes,
    )


def predict_equivalence(cls: SpectralClassification) -> str:
    if cls.theorem_sorted:
        return EQUIVALENT
    if cls.regular and cls.n > 1:
        return NOT_EQUIVALENT
    return UNKNOWN
