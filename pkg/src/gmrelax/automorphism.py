"""Automorphism groups and how they show up in eigenvectors orthogonal to ones.

With a simple spectrum every automorphism is an involution, and a nontrivial
group forces ``k`` eigenvectors orthogonal to ones with at most ``2k``
nonzeros each.  A single such eigenvector with exactly two nonzeros marks a
pair of interchangeable (twin) vertices.  ``conjecture_scan`` looks for the
converse pattern: ``r`` eigenvectors orthogonal to ones sharing one support
of size ``2r``, which is conjectured to force a nontrivial group.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from gmrelax.graph import Graph, Permutation, apply_permutation
from gmrelax.spectral import SpectralDecomposition, SpectralError, SupportProfile, has_simple_spectrum

log = logging.getLogger(__name__)

MAX_GROUP_N = 20
DEFAULT_CAP = 10_000


class GroupTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AutomorphismGroup:
    elements: tuple[Permutation, ...]
    truncated: bool

    @property
    def trivial(self) -> bool:
        return len(self.elements) == 1

    @property
    def order(self) -> int:
        return len(self.elements)

    def nontrivial(self) -> list[Permutation]:
        return [p for p in self.elements if not p.is_identity()]


def _colour_refinement(adj: np.ndarray) -> list[int]:
    """Stable colouring by iterated (colour, multiset of neighbour colours)."""
    n = adj.shape[0]
    nbrs = [np.nonzero(adj[i])[0].tolist() for i in range(n)]
    colours = [(int(adj[i].sum()), int(adj[i, i])) for i in range(n)]
    ids = {c: k for k, c in enumerate(sorted(set(colours)))}
    col = [ids[c] for c in colours]
    while True:
        sig = [(col[i], tuple(sorted(col[j] for j in nbrs[i]))) for i in range(n)]
        ids = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [ids[s] for s in sig]
        if len(ids) == len(set(col)):
            return new
        col = new


def automorphism_group(g: Graph, cap: int = DEFAULT_CAP) -> AutomorphismGroup:
    """All automorphisms of ``g`` (up to ``cap`` of them).

    Backtracking over vertex images.  Candidates start as the colour classes
    of a colour refinement; every assignment ``v -> w`` filters the
    remaining candidates by adjacency to ``v`` versus adjacency to ``w``,
    and the vertex with fewest candidates is branched on next.
    """
    n = g.n
    if n > MAX_GROUP_N:
        raise GroupTooLarge(f"automorphism search is limited to n <= {MAX_GROUP_N}, got n={n}")
    adj = g.adj
    col = _colour_refinement(adj)
    nbr = [sum(1 << int(j) for j in np.nonzero(adj[i])[0]) for i in range(n)]
    full = (1 << n) - 1
    cand0 = [sum(1 << j for j in range(n) if col[j] == col[i]) for i in range(n)]
    found: list[Permutation] = []
    image = [-1] * n

    def search(cand: list[int], left: int) -> bool:
        if left == 0:
            found.append(Permutation(tuple(image)))
            return len(found) >= cap
        v = -1
        best = n + 1
        for u in range(n):
            if image[u] < 0:
                c = bin(cand[u]).count("1")
                if c < best:
                    best, v = c, u
                    if c <= 1:
                        break
        if best == 0:
            return False
        bits = cand[v]
        while bits:
            low = bits & -bits
            w = low.bit_length() - 1
            bits ^= low
            nxt = cand.copy()
            ok = True
            for u in range(n):
                if image[u] >= 0 or u == v:
                    continue
                c = nxt[u] & ~low
                c &= nbr[w] if (nbr[v] >> u) & 1 else full & ~nbr[w]
                if not c:
                    ok = False
                    break
                nxt[u] = c
            if not ok:
                continue
            image[v] = w
            if search(nxt, left - 1):
                return True
            image[v] = -1
        return False

    truncated = search(cand0, n)
    elements = sorted(found, key=lambda p: (not p.is_identity(), p.map))
    return AutomorphismGroup(elements=tuple(elements), truncated=truncated and len(found) >= cap)


def automorphisms_bruteforce(g: Graph) -> list[Permutation]:
    """Every automorphism by checking all ``n!`` permutations (small ``n`` only)."""
    import itertools

    a = g.adj
    out = []
    for perm in itertools.permutations(range(g.n)):
        idx = np.asarray(perm)
        if np.array_equal(a[np.ix_(idx, idx)], a):
            out.append(Permutation(perm))
    return out


@dataclass
class LemmaCheck:
    holds: bool
    applicable: bool
    violations: list[Permutation] = field(default_factory=list)
    note: str = ""


def verify_involution_lemma(g: Graph, dec: SpectralDecomposition, group: AutomorphismGroup, eps_eig: float = 1e-8) -> LemmaCheck:
    """With a simple spectrum every automorphism squares to the identity."""
    if not has_simple_spectrum(dec, eps_eig):
        return LemmaCheck(True, False, note="not applicable: repeated eigenvalues")
    bad = [p for p in group.elements if not p.compose(p).is_identity()]
    if bad:
        gaps = np.diff(dec.eigenvalues)
        log.error("involution lemma violated on %d elements; smallest eigenvalue gap %.3g", len(bad), gaps.min())
        return LemmaCheck(False, True, bad, note=f"smallest eigenvalue gap {gaps.min():.3g}")
    return LemmaCheck(True, True)


# --- twins -----------------------------------------------------------------

ADJACENT_NO_LOOPS = "adjacent_no_loops"
NONADJACENT_NO_LOOPS = "nonadjacent_no_loops"
ADJACENT_BOTH_LOOPS = "adjacent_both_loops"
NONADJACENT_BOTH_LOOPS = "nonadjacent_both_loops"

# (A[s,t], A[s,s], A[t,t]) -> (eigenvalue, case)
_TWIN_BLOCKS = {
    (1, 0, 0): (-1, ADJACENT_NO_LOOPS),
    (1, 1, 1): (0, ADJACENT_BOTH_LOOPS),
    (0, 0, 0): (0, NONADJACENT_NO_LOOPS),
    (0, 1, 1): (1, NONADJACENT_BOTH_LOOPS),
}


@dataclass
class TwinPair:
    s: int
    t: int
    eigenvalue: int | None
    case: str | None
    eigvec_index: int
    issues: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.issues


def detect_twin_pairs(g: Graph, dec: SpectralDecomposition, profile: SupportProfile, eps_supp: float = 1e-8) -> list[TwinPair]:
    """Twin vertices read off eigenvectors orthogonal to ones with two nonzeros."""
    out = []
    adj = g.adj.astype(np.int64)
    for i in profile.ortho_indices:
        u = dec.U[:, i]
        nz = np.nonzero(np.abs(u) > eps_supp)[0]
        if len(nz) != 2:
            continue
        s, t = int(nz[0]), int(nz[1])
        issues = []
        if not (abs(abs(u[s]) - 2**-0.5) <= 1e-6 and abs(u[s] + u[t]) <= 1e-6):
            issues.append(f"entries {u[s]:.6g}, {u[t]:.6g} are not +-1/sqrt(2)")
        lam = float(dec.eigenvalues[i])
        lam_int = int(round(lam))
        if abs(lam - lam_int) > 1e-6 or lam_int not in (-1, 0, 1):
            issues.append(f"eigenvalue {lam:.6g} is not in {{-1, 0, 1}}")
            lam_int = None
        block = (int(adj[s, t]), int(adj[s, s]), int(adj[t, t]))
        expected = _TWIN_BLOCKS.get(block)
        case = expected[1] if expected else None
        if expected is None:
            issues.append(f"2x2 block {block} matches no twin pattern")
        elif lam_int is not None and expected[0] != lam_int:
            issues.append(f"eigenvalue {lam_int} inconsistent with block {block}")
        mask = np.ones(g.n, dtype=bool)
        mask[[s, t]] = False
        if not np.array_equal(adj[mask, s], adj[mask, t]):
            issues.append("columns differ outside {s, t}")
        swap = Permutation.transposition(g.n, s, t)
        if apply_permutation(g, swap) != g:
            issues.append("transposition is not an automorphism")
        if issues:
            log.warning("twin candidate (%d, %d) inconsistent: %s", s, t, "; ".join(issues))
        out.append(TwinPair(s, t, lam_int, case, i, issues))
    return out


# --- proposition and conjecture --------------------------------------------


@dataclass
class Prop1Check:
    holds: bool
    vacuous: bool
    applicable: bool = True
    k: int | None = None
    witness_indices: tuple[int, ...] = ()
    odd_support_witnesses: tuple[int, ...] = ()


def verify_proposition1(profile: SupportProfile, group: AutomorphismGroup, simple: bool = True) -> Prop1Check:
    """Nontrivial group => some ``k >= 1`` orthogonal eigenvectors with support ``<= 2k``.

    Checked on sorted supports: the property holds iff for some ``k`` the
    ``k``-th smallest support is at most ``2k``.  Parity of the witnesses'
    supports is recorded (expected even) but does not affect ``holds``.
    Not applicable (and reported as holding) without a simple spectrum.
    """
    if not simple:
        return Prop1Check(True, True, applicable=False)
    if group.trivial:
        return Prop1Check(True, True)
    order = sorted(range(profile.k), key=lambda j: (profile.supports[j], j))
    for k in range(1, profile.k + 1):
        if profile.supports[order[k - 1]] <= 2 * k:
            chosen = tuple(profile.ortho_indices[j] for j in order[:k])
            odd = tuple(profile.ortho_indices[j] for j in order[:k] if profile.supports[j] % 2)
            return Prop1Check(True, False, k=k, witness_indices=chosen, odd_support_witnesses=odd)
    return Prop1Check(False, False)


@dataclass
class ConjectureFinding:
    support: tuple[int, ...]
    vectors: tuple[int, ...]
    matches: bool
    automorphism_confirmed: bool | None = None
    support_is_moved_set: bool | None = None
    marginal: bool = False

    @property
    def counterexample(self) -> bool:
        return self.matches and self.automorphism_confirmed is False


def conjecture_scan(
    g: Graph,
    dec: SpectralDecomposition,
    profile: SupportProfile,
    eps_supp: float = 1e-8,
    confirm: bool = True,
    group: AutomorphismGroup | None = None,
    eps_eig: float = 1e-8,
) -> list[ConjectureFinding]:
    """Group orthogonal eigenvectors by support set and test the ``r`` vectors / ``2r`` entries pattern."""
    if not has_simple_spectrum(dec, eps_eig):
        raise SpectralError("conjecture scan assumes a simple spectrum")
    by_support: dict[tuple[int, ...], list[int]] = defaultdict(list)
    marginal_cols = set()
    for i in profile.ortho_indices:
        col = np.abs(dec.U[:, i])
        by_support[tuple(int(j) for j in np.nonzero(col > eps_supp)[0])].append(i)
        if np.any((col > eps_supp / 100) & (col < eps_supp * 100)):
            marginal_cols.add(i)
    if confirm and group is None and g.n <= MAX_GROUP_N:
        group = automorphism_group(g)
    moved_sets = set()
    if group is not None:
        moved_sets = {tuple(p.moved()) for p in group.nontrivial()}
    out = []
    for support in sorted(by_support):
        vecs = tuple(by_support[support])
        matches = len(support) % 2 == 0 and len(vecs) >= len(support) // 2
        f = ConjectureFinding(support, vecs, matches, marginal=bool(marginal_cols & set(vecs)))
        if confirm and group is not None:
            f.automorphism_confirmed = not group.trivial
            f.support_is_moved_set = support in moved_sets
        if f.counterexample:
            log.warning("conjecture counterexample candidate: support %s, vectors %s, trivial group", support, vecs)
        out.append(f)
    return out
