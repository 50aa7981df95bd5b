"""Adjacency spectra and the spectral conditions for equivalence.

A graph is *friendly* when its adjacency matrix has simple spectrum and no
eigenvector orthogonal to the all-ones vector.  The two support conditions
extend this: with ``k`` eigenvectors orthogonal to ones,

* ``theorem_2k1``: every one of them has at least ``2k + 1`` nonzeros;
* ``theorem_sorted``: sorted by support size, the ``i``-th (1-based) has at
  least ``2i + 1`` nonzeros.

Either condition together with a simple spectrum makes the identity the only
doubly-stochastic matrix commuting with the adjacency matrix.

Repeated eigenvalues make "the eigenvector" ambiguous.  Inside every cluster
of (numerically) equal eigenvalues the basis returned by ``eigendecompose``
is rotated so that the projection of the all-ones vector is spread evenly
over the cluster.  A cluster then contributes orthogonal eigenvectors only
when the whole eigenspace is orthogonal to ones, so ``k`` does not depend on
the arbitrary basis the solver happened to return.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from gmrelax import kernels
from gmrelax.graph import Graph, is_regular

MARGIN = 100.0


class SpectralError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    eig: float = 1e-8
    orth: float | None = None  # None: 1e-8 * sqrt(n)
    supp: float = 1e-8
    cert: float = 1e-7

    def orth_for(self, n: int) -> float:
        return self.orth if self.orth is not None else 1e-8 * math.sqrt(n)

    def resolved(self, n: int) -> dict:
        d = asdict(self)
        d["orth"] = self.orth_for(n)
        return d


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    U: np.ndarray
    v: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class SupportProfile:
    ortho_indices: tuple[int, ...]
    supports: tuple[int, ...]
    k: int
    marginal: tuple[str, ...] = ()

    @property
    def sorted_supports(self) -> list[int]:
        return sorted(self.supports)


@dataclass(frozen=True)
class SpectralClassification:
    n: int
    simple_spectrum: bool
    friendly: bool
    regular: bool
    degree: int | None
    k: int
    supports: tuple[int, ...]
    theorem_2k1: bool
    theorem_sorted: bool
    min_gap: float
    marginal: tuple[str, ...]
    tolerances: dict = field(default_factory=dict)

    @property
    def numerically_marginal(self) -> bool:
        return bool(self.marginal)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["supports"] = list(self.supports)
        d["marginal"] = list(self.marginal)
        return d


def eigendecompose(a, cluster_tol: float = 1e-8, max_sweeps: int = 100) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues ascend; each eigenvector's largest-magnitude entry (lowest
    index on ties) is positive.  Repeated-eigenvalue clusters, detected with
    the relative gap ``cluster_tol``, get the balanced basis described in
    the module docstring.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > 1e-12:
        raise SpectralError(f"matrix is not symmetric (max |A - A^T| = {asym:.3g})")
    n = a.shape[0]
    w, u, sweeps, off = kernels.jacobi_eigh(a, 1e-14, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3g})")
    order = np.argsort(w, kind="stable")
    w = np.asarray(w)[order]
    u = np.asarray(u)[:, order]
    ones = np.ones(n)
    for lo, hi in _clusters(w, cluster_tol):
        block = u[:, lo:hi]
        proj = block.T @ ones
        norm = np.linalg.norm(proj)
        if norm <= 1e-12:
            continue
        target = np.full(hi - lo, norm / math.sqrt(hi - lo))
        z = proj - target
        zz = z @ z
        if zz <= 1e-30:
            continue
        h = np.eye(hi - lo) - 2.0 * np.outer(z, z) / zz
        u[:, lo:hi] = block @ h
        w[lo:hi] = w[lo:hi].mean()
    u = _fix_signs(u)
    residual = float(np.linalg.norm(a - (u * w) @ u.T))
    return SpectralDecomposition(eigenvalues=w, U=u, v=u.T @ ones, residual=residual)


def _spread(w) -> float:
    return max(1.0, float(w[-1] - w[0])) if len(w) else 1.0


def _clusters(w, tol):
    """Maximal runs of eigenvalues whose consecutive gaps are <= tol * spread."""
    thr = tol * _spread(w)
    out = []
    lo = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > thr:
            if i - lo > 1:
                out.append((lo, i))
            lo = i
    return out


def _fix_signs(u):
    u = u.copy()
    mag = np.abs(u)
    for j in range(u.shape[1]):
        top = mag[:, j].max()
        i = int(np.nonzero(mag[:, j] >= top * (1.0 - 1e-9))[0][0])
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
    return u


def support_profile(dec: SpectralDecomposition, eps_orth: float, eps_supp: float) -> SupportProfile:
    av = np.abs(dec.v)
    ortho = tuple(int(i) for i in np.nonzero(av <= eps_orth)[0])
    supports = tuple(int((np.abs(dec.U[:, i]) > eps_supp).sum()) for i in ortho)
    marginal = []
    if np.any((av > eps_orth / MARGIN) & (av < eps_orth * MARGIN)):
        marginal.append("|u_i^T 1| near orthogonality threshold")
    if ortho:
        au = np.abs(dec.U[:, list(ortho)])
        if np.any((au > eps_supp / MARGIN) & (au < eps_supp * MARGIN)):
            marginal.append("eigenvector entry near support threshold")
    return SupportProfile(ortho_indices=ortho, supports=supports, k=len(ortho), marginal=tuple(marginal))


def eigen_gap(dec: SpectralDecomposition) -> float:
    w = dec.eigenvalues
    return float(np.min(np.diff(w))) if len(w) > 1 else math.inf


def has_simple_spectrum(dec: SpectralDecomposition, eps_eig: float) -> bool:
    return eigen_gap(dec) > eps_eig * _spread(dec.eigenvalues)


def is_friendly(profile: SupportProfile, simple: bool) -> bool:
    return simple and profile.k == 0


def theorem_2k1_applies(profile: SupportProfile, simple: bool) -> bool:
    return simple and all(s >= 2 * profile.k + 1 for s in profile.supports)


def theorem_sorted_applies(profile: SupportProfile, simple: bool) -> bool:
    return simple and all(s >= 2 * i + 1 for i, s in enumerate(profile.sorted_supports, start=1))


def analyze(g: Graph, tol: Tolerances | None = None):
    """Decomposition, support profile and classification of ``g`` in one pass."""
    tol = tol or Tolerances()
    dec = eigendecompose(g.matrix(), cluster_tol=tol.eig)
    profile = support_profile(dec, tol.orth_for(g.n), tol.supp)
    simple = has_simple_spectrum(dec, tol.eig)
    regular, degree = is_regular(g)
    gap = eigen_gap(dec)
    marginal = list(profile.marginal)
    scale = tol.eig * _spread(dec.eigenvalues)
    if math.isfinite(gap) and scale / MARGIN < gap < scale * MARGIN:
        marginal.append("eigenvalue gap near repeated-eigenvalue threshold")
    cls = SpectralClassification(
        n=g.n,
        simple_spectrum=simple,
        friendly=is_friendly(profile, simple),
        regular=regular,
        degree=degree,
        k=profile.k,
        supports=tuple(profile.sorted_supports),
        theorem_2k1=theorem_2k1_applies(profile, simple),
        theorem_sorted=theorem_sorted_applies(profile, simple),
        min_gap=gap if math.isfinite(gap) else 0.0,
        marginal=tuple(marginal),
        tolerances=tol.resolved(g.n),
    )
    return dec, profile, cls


def classify(g: Graph, tol: Tolerances | None = None) -> SpectralClassification:
    return analyze(g, tol)[2]
