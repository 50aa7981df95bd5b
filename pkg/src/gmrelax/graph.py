"""Graphs, permutations, random generators and the edge-list file format.

Permutation matrices follow one convention everywhere in the package: the
matrix of ``sigma`` has ``P[i, sigma[i]] = 1``.  Under it,
``apply_permutation(G, sigma)`` returns ``P A P^T``, whose entry ``(i, j)``
is ``A[sigma[i], sigma[j]]``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Malformed graph input (bad edge list, bad file)."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected 0/1 graph stored as a symmetric adjacency matrix.

    Loops (diagonal ones) are representable; none of the generators
    produce them.
    """

    adj: np.ndarray

    def __post_init__(self):
        a = np.array(self.adj, dtype=np.int8, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise GraphFormatError(f"adjacency must be a non-empty square matrix, got shape {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise GraphFormatError("adjacency entries must be 0 or 1")
        if not np.array_equal(a, a.T):
            raise GraphFormatError("adjacency must be symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def matrix(self) -> np.ndarray:
        """Adjacency as a float64 array (a fresh copy)."""
        return self.adj.astype(np.float64)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u <= v`` in lexicographic order."""
        us, vs = np.nonzero(np.triu(self.adj))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    @property
    def m(self) -> int:
        return len(self.edges())

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def digest(self) -> str:
        """Content hash of the canonical edge-list serialization."""
        return hashlib.sha256(to_edge_list_text(self).encode("ascii")).hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``0..n-1``; ``map[i]`` is the image of vertex ``i``."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if sorted(m) != list(range(len(m))):
            raise ValueError(f"not a permutation of 0..{len(m) - 1}: {m}")
        object.__setattr__(self, "map", m)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, s: int, t: int) -> "Permutation":
        m = list(range(n))
        m[s], m[t] = t, s
        return cls(tuple(m))

    @classmethod
    def from_matrix(cls, p: np.ndarray) -> "Permutation":
        p = np.asarray(p)
        if not (np.isin(p, (0, 1)).all() and (p.sum(axis=0) == 1).all() and (p.sum(axis=1) == 1).all()):
            raise ValueError("not a permutation matrix")
        return cls(tuple(int(j) for j in np.argmax(p, axis=1)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(tuple(int(x) for x in rng.permutation(n)))

    def __len__(self):
        return len(self.map)

    @property
    def n(self) -> int:
        return len(self.map)

    def matrix(self) -> np.ndarray:
        p = np.zeros((self.n, self.n))
        p[np.arange(self.n), self.map] = 1.0
        return p

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.map):
            inv[j] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self after other``: vertex ``i`` goes to ``self[other[i]]``."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.map[j] for j in other.map))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.map))

    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity():
            cur = self.compose(cur)
            k += 1
        return k

    def moved(self) -> list[int]:
        return [i for i, j in enumerate(self.map) if i != j]


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    if n < 1:
        raise GraphFormatError(f"vertex count must be positive, got {n}")
    adj = np.zeros((n, n), dtype=np.int8)
    seen = set()
    for pair in edges:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})")
        seen.add(key)
        adj[u, v] = adj[v, u] = 1
    return Graph(adj)


def apply_permutation(g: Graph, sigma: Permutation) -> Graph:
    """Return the graph with adjacency ``P A P^T`` for ``P`` the matrix of ``sigma``."""
    if sigma.n != g.n:
        raise ValueError(f"permutation of size {sigma.n} applied to graph with n={g.n}")
    idx = np.asarray(sigma.map)
    return Graph(g.adj[np.ix_(idx, idx)])


def is_regular(g: Graph) -> tuple[bool, int | None]:
    deg = g.degrees()
    if (deg == deg[0]).all():
        return True, int(deg[0])
    return False, None


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) sample.

    Draws ``n(n-1)/2`` uniforms from ``numpy.random.Generator(PCG64(seed))``
    and keeps edge ``(i, j)``, ``i < j``, when its uniform is ``< p``; pairs
    are visited row by row over the upper triangle.  PCG64 output is
    platform independent, so graphs are reproducible everywhere.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed % 2**64))
    iu = np.triu_indices(n, k=1)
    keep = rng.random(len(iu[0])) < p
    adj = np.zeros((n, n), dtype=np.int8)
    adj[iu[0][keep], iu[1][keep]] = 1
    return Graph(adj + adj.T)


def barycenter(n: int) -> np.ndarray:
    """The centre ``J = 11^T / n`` of the doubly-stochastic matrices."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return np.full((n, n), 1.0 / n)


def cycle(n: int) -> Graph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


# --- edge-list text format -------------------------------------------------
#
# line 1: "n m"; then m lines "u v", 0-based, ASCII, LF.  The writer emits
# u <= v in lexicographic order so equal graphs serialize to equal bytes.


def to_edge_list_text(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphFormatError(f"{source}: empty input")

    def ints(lineno: int, want: int) -> list[int]:
        parts = lines[lineno - 1].split()
        try:
            vals = [int(x) for x in parts]
        except ValueError:
            raise GraphFormatError(f"{source}:{lineno}: expected integers, got {lines[lineno - 1]!r}") from None
        if len(vals) != want:
            raise GraphFormatError(f"{source}:{lineno}: expected {want} integers, got {lines[lineno - 1]!r}")
        return vals

    n, m = ints(1, 2)
    if n < 1 or m < 0:
        raise GraphFormatError(f"{source}:1: invalid header {lines[0]!r}")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"{source}: header declares {m} edges, found {len(lines) - 1} lines")
    adj = np.zeros((n, n), dtype=np.int8)
    seen: dict[tuple[int, int], int] = {}
    for lineno in range(2, m + 2):
        u, v = ints(lineno, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"{source}:{lineno}: vertex out of range for n={n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"{source}:{lineno}: duplicate of edge on line {seen[key]}")
        seen[key] = lineno
        adj[u, v] = adj[v, u] = 1
    return Graph(adj)


def read_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise GraphFormatError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise GraphFormatError(f"{path}: not ASCII") from None
    return parse_edge_list(text, str(path))


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_bytes(to_edge_list_text(g).encode("ascii"))
