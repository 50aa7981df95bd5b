"""Per-graph analysis reports, zone labels and corpus verification."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from gmrelax import automorphism as aut
from gmrelax.corpus import CorpusEntry, all_entries
from gmrelax.equivalence import NON_UNIQUE, UNIQUE, certify_uniqueness_fast, certify_uniqueness_general, predict_equivalence
from gmrelax.graph import Graph
from gmrelax.spectral import SpectralClassification, Tolerances, analyze

SCHEMA = "gmrelax.analysis/1"
SIG_DIGITS = 10
GENERAL_LP_MAX_N = 30

FRIENDLY = "FRIENDLY"
THEOREM_GREEN = "THEOREM_GREEN"
ZONE2_CANDIDATE = "ZONE2_CANDIDATE"
REGULAR_RED = "REGULAR_RED"
SYMMETRIC = "SYMMETRIC"
NONSIMPLE = "NONSIMPLE"
UNRESOLVED = "UNRESOLVED"
ZONES = (FRIENDLY, THEOREM_GREEN, ZONE2_CANDIDATE, REGULAR_RED, SYMMETRIC, NONSIMPLE, UNRESOLVED)


def assign_zone(cls: SpectralClassification, trivial_group: bool | None, certificate_computed: bool) -> str:
    """Zone label from computed flags only.

    ``trivial_group`` is None when the group was not computed.  Graphs that
    would otherwise be zone-2 candidates but lack a group or a certificate
    are UNRESOLVED.
    """
    if cls.regular and cls.n > 1:
        return REGULAR_RED
    if cls.simple_spectrum and cls.k == 0:
        return FRIENDLY
    if cls.simple_spectrum and cls.theorem_sorted:
        return THEOREM_GREEN
    if not cls.simple_spectrum:
        return NONSIMPLE
    if trivial_group is False:
        return SYMMETRIC
    if trivial_group and certificate_computed:
        return ZONE2_CANDIDATE
    return UNRESOLVED


def canonical(obj):
    """JSON-ready copy with floats cut to ``SIG_DIGITS`` significant digits."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        if abs(x) < 1e-14:
            return 0.0
        return float(f"{x:.{SIG_DIGITS}g}")
    return obj


def dumps(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


@dataclass
class AnalysisReport:
    name: str
    digest: str
    n: int
    m: int
    classification: dict
    certificates: dict
    group: dict
    involution_lemma: dict
    proposition1: dict
    conjecture: list
    twins: list
    zone: str
    prediction: str
    notes: list = field(default_factory=list)
    schema: str = SCHEMA
    timings: dict = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("timings")
        return canonical(d)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(**d)

    def to_json(self, timings: bool = False) -> str:
        return dumps(self.to_dict(timings))

    def to_text(self) -> str:
        c = self.classification
        lines = [
            f"graph        {self.name}  (n={self.n}, m={self.m}, digest {self.digest})",
            f"zone         {self.zone}",
            f"prediction   {self.prediction}",
            f"spectrum     {'simple' if c['simple_spectrum'] else 'repeated'}, min gap {c['min_gap']:.3g}",
            f"regular      {c['regular']}" + (f" (degree {c['degree']})" if c["regular"] else ""),
            f"k            {c['k']}  supports {c['supports']}",
            f"theorems     2k+1: {c['theorem_2k1']}  sorted: {c['theorem_sorted']}",
        ]
        if self.group.get("skipped"):
            lines.append("group        not computed (n too large)")
        else:
            lines.append(f"group        order {self.group['order']}" + (" (truncated)" if self.group["truncated"] else ""))
        for method, cert in sorted(self.certificates.items()):
            lines.append(f"certificate  {method}: {cert['verdict']} (optimum {cert['lp_optimum']:.6g})")
        lines += [f"note         {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _cert_dict(cert) -> dict:
    d = cert.to_dict()
    d.pop("witness", None)
    return d


def analyze_graph(
    g: Graph,
    name: str = "",
    tol: Tolerances | None = None,
    method: str = "auto",
    group_cap: int = aut.DEFAULT_CAP,
) -> AnalysisReport:
    """Full analysis of one graph.

    ``method`` picks certificates: ``auto`` (fast on simple spectra, general
    otherwise), ``fast``, ``general`` or ``both``.  The general LP is skipped
    above ``GENERAL_LP_MAX_N`` vertices unless explicitly requested.
    """
    tol = tol or Tolerances()
    notes: list[str] = []
    timings = {}
    t0 = time.perf_counter()
    dec, profile, cls = analyze(g, tol)
    timings["spectral"] = time.perf_counter() - t0
    notes += [f"marginal: {m}" for m in cls.marginal]

    t0 = time.perf_counter()
    certs = {}
    want_fast = method in ("fast", "both") or (method == "auto" and cls.simple_spectrum)
    want_general = method in ("general", "both") or (method == "auto" and not cls.simple_spectrum)
    if want_fast and cls.simple_spectrum:
        certs["fast_path"] = certify_uniqueness_fast(dec, profile, tol.cert, tol.eig)
    elif want_fast:
        notes.append("fast certificate not applicable: repeated eigenvalues")
    if want_general and (g.n <= GENERAL_LP_MAX_N or method in ("general", "both")):
        certs["general_lp"] = certify_uniqueness_general(g.matrix(), tol.cert)
    elif want_general:
        notes.append(f"general certificate skipped for n > {GENERAL_LP_MAX_N}")
    verdicts = {c.verdict for c in certs.values()}
    if len(verdicts) > 1:
        notes.append("DEFECT: certificate methods disagree")
    if any(c.marginal for c in certs.values()):
        notes.append("marginal: certificate optimum near threshold")
    timings["certificates"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    group = None
    group_d = {"skipped": True, "order": None, "trivial": None, "truncated": None, "elements": []}
    lemma_d = {"applicable": False, "holds": None, "violations": []}
    prop_d = {"holds": None, "vacuous": None, "applicable": False, "k": None, "witness_indices": [], "odd_support_witnesses": []}
    findings = []
    if g.n <= aut.MAX_GROUP_N:
        group = aut.automorphism_group(g, group_cap)
        group_d = {
            "skipped": False,
            "order": group.order,
            "trivial": group.trivial,
            "truncated": group.truncated,
            "elements": [list(p.map) for p in group.nontrivial()[:16]],
        }
        lemma = aut.verify_involution_lemma(g, dec, group, tol.eig)
        lemma_d = {"applicable": lemma.applicable, "holds": lemma.holds, "violations": [list(p.map) for p in lemma.violations]}
        if lemma.applicable and not lemma.holds:
            notes.append("DEFECT: automorphism of order > 2 with a simple spectrum")
        prop = aut.verify_proposition1(profile, group, cls.simple_spectrum)
        prop_d = asdict(prop)
        if not prop.holds:
            notes.append("DEFECT: nontrivial group without short-support orthogonal eigenvectors")
        if prop.odd_support_witnesses:
            notes.append("odd support among proposition witnesses")
    else:
        notes.append(f"automorphism group not computed for n > {aut.MAX_GROUP_N}")
    if cls.simple_spectrum:
        findings = aut.conjecture_scan(g, dec, profile, tol.supp, confirm=group is not None, group=group, eps_eig=tol.eig)
        if any(f.counterexample for f in findings):
            notes.append("conjecture pattern present with a trivial group")
    twins = aut.detect_twin_pairs(g, dec, profile, tol.supp)
    timings["automorphisms"] = time.perf_counter() - t0

    zone = assign_zone(cls, None if group is None else group.trivial, bool(certs))
    return AnalysisReport(
        name=name,
        digest=g.digest(),
        n=g.n,
        m=g.m,
        classification=cls.to_dict(),
        certificates={k: _cert_dict(v) for k, v in certs.items()},
        group=group_d,
        involution_lemma=lemma_d,
        proposition1=prop_d,
        conjecture=[asdict(f) | {"counterexample": f.counterexample} for f in findings],
        twins=[asdict(t) | {"consistent": t.consistent} for t in twins],
        zone=zone,
        prediction=predict_equivalence(cls),
        notes=notes,
        timings=timings,
    )


# --- corpus verification ---------------------------------------------------


@dataclass
class Check:
    prop: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class EntryResult:
    name: str
    checks: list[Check]
    report: AnalysisReport

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


UNIQUE_OPTIMUM_BOUND = 1e-9


def verify_entry(entry: CorpusEntry, tol: Tolerances | None = None) -> EntryResult:
    tol = tol or Tolerances()
    exp = entry.expected
    method = "both" if exp.simple_spectrum else "general"
    rep = analyze_graph(entry.graph, entry.name, tol, method)
    c = rep.classification
    checks = [
        Check("regular", exp.regular, c["regular"]),
        Check("simple_spectrum", exp.simple_spectrum, c["simple_spectrum"]),
        Check("k", exp.k, c["k"]),
        Check("trivial_group", exp.trivial_group, rep.group["trivial"]),
    ]
    if exp.degree is not None:
        checks.append(Check("degree", exp.degree, c["degree"]))
    if exp.supports is not None:
        checks.append(Check("supports", list(exp.supports), c["supports"]))
    if exp.group_order is not None:
        checks.append(Check("group_order", exp.group_order, rep.group["order"]))
    if exp.zone is not None:
        checks.append(Check("zone", exp.zone, rep.zone))
    if exp.verdict is not None:
        for method_name, cert in sorted(rep.certificates.items()):
            checks.append(Check(f"verdict[{method_name}]", exp.verdict, cert["verdict"]))
            if exp.verdict == UNIQUE:
                checks.append(Check(f"optimum<=1e-9[{method_name}]", True, cert["lp_optimum"] <= UNIQUE_OPTIMUM_BOUND))
    if exp.conjecture_confirmed is not None:
        confirmed = any(f["matches"] and f["automorphism_confirmed"] for f in rep.conjecture)
        checks.append(Check("conjecture_confirmed", exp.conjecture_confirmed, confirmed))
    return EntryResult(entry.name, checks, rep)


def verify_corpus(tol: Tolerances | None = None, entries: list[CorpusEntry] | None = None) -> list[EntryResult]:
    return [verify_entry(e, tol) for e in (entries if entries is not None else all_entries())]


def corpus_summary(results: list[EntryResult]) -> dict:
    return {
        "schema": "gmrelax.corpus/1",
        "passed": sum(r.ok for r in results),
        "total": len(results),
        "entries": {
            r.name: {
                "ok": r.ok,
                "zone": r.report.zone,
                "checks": [{"property": c.prop, "expected": c.expected, "actual": c.actual, "ok": c.ok} for c in r.checks],
            }
            for r in results
        },
    }


__all__ = [
    "AnalysisReport",
    "Check",
    "EntryResult",
    "NON_UNIQUE",
    "SCHEMA",
    "ZONES",
    "analyze_graph",
    "assign_zone",
    "canonical",
    "corpus_summary",
    "dumps",
    "verify_corpus",
    "verify_entry",
]
