"""Graph matching and its doubly-stochastic relaxation: when do they agree?"""

__version__ = "0.1.0"

from gmrelax.graph import (  # noqa: E402
    Graph,
    GraphFormatError,
    Permutation,
    apply_permutation,
    barycenter,
    erdos_renyi,
    from_edge_list,
    is_regular,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
)
from gmrelax.spectral import Tolerances, analyze, classify, eigendecompose  # noqa: E402
from gmrelax.birkhoff import frank_wolfe, hungarian, is_doubly_stochastic, simplex_lp  # noqa: E402
from gmrelax.equivalence import (  # noqa: E402
    certify,
    certify_uniqueness_fast,
    certify_uniqueness_general,
    exact_match,
    predict_equivalence,
    relax_and_round,
)
from gmrelax.automorphism import automorphism_group, conjecture_scan, detect_twin_pairs  # noqa: E402
from gmrelax.corpus import corpus  # noqa: E402
from gmrelax.report import analyze_graph, verify_corpus  # noqa: E402
from gmrelax.kernels import BACKEND  # noqa: E402

__all__ = [
    "BACKEND",
    "Graph",
    "GraphFormatError",
    "Permutation",
    "Tolerances",
    "analyze",
    "analyze_graph",
    "apply_permutation",
    "automorphism_group",
    "barycenter",
    "certify",
    "certify_uniqueness_fast",
    "certify_uniqueness_general",
    "classify",
    "conjecture_scan",
    "corpus",
    "detect_twin_pairs",
    "eigendecompose",
    "erdos_renyi",
    "exact_match",
    "frank_wolfe",
    "from_edge_list",
    "hungarian",
    "is_doubly_stochastic",
    "is_regular",
    "parse_edge_list",
    "predict_equivalence",
    "read_edge_list",
    "relax_and_round",
    "simplex_lp",
    "verify_corpus",
    "write_edge_list",
]
