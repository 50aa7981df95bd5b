"""Named example graphs with their expected properties.

The expected records are checked against the analyzers by
``gmrelax.report.verify_corpus``; they are claims to test, not inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmrelax.graph import Graph, from_edge_list


@dataclass(frozen=True)
class Expected:
    regular: bool
    simple_spectrum: bool
    trivial_group: bool
    k: int
    degree: int | None = None
    supports: tuple[int, ...] | None = None
    group_order: int | None = None
    verdict: str | None = None
    zone: str | None = None
    conjecture_confirmed: bool | None = None


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: Graph
    expected: Expected
    description: str = ""


_EDGES = {
    "frucht": (12, [(0, 11), (0, 1), (0, 2), (1, 2), (1, 6), (6, 7), (5, 6), (5, 7), (7, 9), (9, 10), (8, 9),
                    (8, 10), (10, 11), (2, 3), (3, 4), (4, 5), (4, 8), (3, 11)]),
    "regular10": (10, [(0, 3), (3, 4), (4, 2), (2, 8), (8, 1), (1, 7), (7, 9), (9, 6), (6, 5), (5, 0), (0, 4),
                       (4, 7), (7, 6), (6, 2), (2, 5), (5, 1), (1, 9), (9, 3), (3, 8), (8, 0)]),
    "fig3": (7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4), (4, 6), (6, 3), (6, 1)]),
    "fig4": (8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 6), (6, 7), (5, 6), (6, 1), (3, 6)]),
    "fig5_left": (8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1), (4, 7)]),
    "fig5_right": (8, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 7), (7, 3), (3, 5), (5, 6), (5, 7)]),
    "paw": (4, [(0, 1), (0, 2), (1, 2), (2, 3)]),
}

_EXPECTED = {
    "frucht": Expected(regular=True, degree=3, simple_spectrum=True, trivial_group=True, k=11,
                       verdict="non_unique", zone="REGULAR_RED"),
    "regular10": Expected(regular=True, degree=4, simple_spectrum=False, trivial_group=True, k=9,
                          verdict="non_unique", zone="REGULAR_RED"),
    "fig3": Expected(regular=False, simple_spectrum=True, trivial_group=True, k=1, supports=(4,),
                     verdict="unique", zone="THEOREM_GREEN"),
    "fig4": Expected(regular=False, simple_spectrum=True, trivial_group=False, k=2, supports=(4, 4),
                     group_order=2, verdict="non_unique", zone="SYMMETRIC", conjecture_confirmed=True),
    "fig5_left": Expected(regular=False, simple_spectrum=False, trivial_group=True, k=1, zone="NONSIMPLE"),
    "fig5_right": Expected(regular=False, simple_spectrum=False, trivial_group=True, k=0, zone="NONSIMPLE"),
    "paw": Expected(regular=False, simple_spectrum=True, trivial_group=False, k=1, supports=(2,),
                    group_order=2, verdict="non_unique", zone="SYMMETRIC", conjecture_confirmed=True),
}

_DESCRIPTIONS = {
    "frucht": "cubic graph with trivial automorphism group and simple spectrum",
    "regular10": "4-regular graph with trivial automorphism group and repeated eigenvalues",
    "fig3": "asymmetric graph covered by the sorted-support theorem",
    "fig4": "symmetric graph with two orthogonal eigenvectors on four shared vertices",
    "fig5_left": "repeated eigenvalues, trivial group, one orthogonal eigenvector",
    "fig5_right": "repeated eigenvalues, trivial group, no orthogonal eigenvector",
    "paw": "triangle with a pendant vertex; smallest adjacent twin pair",
}

NAMES = tuple(_EDGES)


def corpus(name: str) -> CorpusEntry:
    try:
        n, edges = _EDGES[name]
    except KeyError:
        raise KeyError(f"unknown corpus graph {name!r}; choose from {', '.join(NAMES)}") from None
    return CorpusEntry(name, from_edge_list(n, edges), _EXPECTED[name], _DESCRIPTIONS[name])


def all_entries() -> list[CorpusEntry]:
    return [corpus(name) for name in NAMES]
