"""Erdos-Renyi sweeps: one record per graph, anomaly bookkeeping, CSV output.

Item ``i`` of a sweep is ``erdos_renyi(n_i, p, seed + i)``, so any record can
be regenerated on its own.  Work is spread over a process pool and the
records come back in index order, which keeps the output independent of the
worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import multiprocessing as mp
from collections import Counter
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from gmrelax import automorphism as aut
from gmrelax.equivalence import NON_UNIQUE, UNIQUE, certify_uniqueness_fast, certify_uniqueness_general
from gmrelax.graph import Graph, erdos_renyi, write_edge_list
from gmrelax.report import ZONE2_CANDIDATE, assign_zone, canonical
from gmrelax.spectral import Tolerances, analyze

log = logging.getLogger(__name__)

ORACLE_MAX_N = 6

# anomaly categories
CONJECTURE = "conjecture_counterexample"
PROPOSITION = "proposition1_violation"
SOUNDNESS = "theorem_soundness"
ZONE2 = "zone2_candidate"
INVOLUTION = "involution_violation"
DISAGREE = "certificate_disagreement"
ORACLE = "oracle_contradiction"
TWIN = "twin_inconsistent"
ERROR = "analysis_error"
MARGINAL = "marginal"

# categories that contradict a theorem or an internal consistency check
DEFECTS = (PROPOSITION, SOUNDNESS, INVOLUTION, DISAGREE, ORACLE, TWIN, ERROR)


@dataclass
class SweepRecord:
    index: int
    seed: int
    n: int
    p: float
    digest: str = ""
    m: int = 0
    regular: bool = False
    simple: bool = False
    k: int = 0
    supports: str = ""
    theorem_sorted: bool = False
    zone: str = ""
    verdict: str = ""
    fast_optimum: float | None = None
    general_optimum: float | None = None
    group_order: int | None = None
    group_truncated: bool | None = None
    conjecture_findings: int = 0
    conjecture_matches: int = 0
    proposition1_holds: bool | None = None
    involution_holds: bool | None = None
    oracle_solutions: int | None = None
    anomalies: list[str] = field(default_factory=list)
    error: str = ""


CSV_COLUMNS = [f.name for f in fields(SweepRecord)]


@dataclass(frozen=True)
class SweepConfig:
    p: float = 0.5
    seed: int = 42
    certificates: str = "both"
    tol: Tolerances = Tolerances()
    oracle_max_n: int = ORACLE_MAX_N


def _permutation_solutions(a: np.ndarray) -> int:
    """Number of permutation matrices commuting with ``a`` (plain enumeration)."""
    n = a.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    permuted = a[perms[:, :, None], perms[:, None, :]]
    return int(np.all(permuted == a, axis=(1, 2)).sum())


def analyze_item(index: int, n: int, cfg: SweepConfig) -> SweepRecord:
    rec = SweepRecord(index=index, seed=cfg.seed + index, n=n, p=cfg.p)
    try:
        _fill(rec, erdos_renyi(n, cfg.p, rec.seed), cfg)
    except Exception as exc:  # recorded, never fatal to the sweep
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.anomalies.append(ERROR)
    return rec


def _fill(rec: SweepRecord, g: Graph, cfg: SweepConfig) -> None:
    tol = cfg.tol
    dec, profile, cls = analyze(g, tol)
    rec.digest, rec.m = g.digest(), g.m
    rec.regular, rec.simple, rec.k = cls.regular, cls.simple_spectrum, cls.k
    rec.supports = " ".join(map(str, cls.supports))
    rec.theorem_sorted = cls.theorem_sorted
    if cls.marginal:
        rec.anomalies.append(MARGINAL)

    verdicts = []
    if cls.simple_spectrum and cfg.certificates in ("fast", "both", "auto"):
        c = certify_uniqueness_fast(dec, profile, tol.cert, tol.eig)
        rec.fast_optimum = c.lp_optimum
        verdicts.append(c.verdict)
    if cfg.certificates in ("general", "both") or (cfg.certificates == "auto" and not cls.simple_spectrum):
        c = certify_uniqueness_general(g.matrix(), tol.cert)
        rec.general_optimum = c.lp_optimum
        verdicts.append(c.verdict)
    if verdicts:
        rec.verdict = verdicts[0] if len(set(verdicts)) == 1 else "disagree"
    if len(set(verdicts)) > 1:
        rec.anomalies.append(DISAGREE)
    if rec.fast_optimum is not None and rec.general_optimum is not None:
        if abs(rec.fast_optimum - rec.general_optimum) > 1e-6:
            rec.anomalies.append(DISAGREE)
    if cls.theorem_sorted and NON_UNIQUE in verdicts:
        rec.anomalies.append(SOUNDNESS)

    group = None
    if g.n <= aut.MAX_GROUP_N:
        group = aut.automorphism_group(g)
        rec.group_order, rec.group_truncated = group.order, group.truncated
        lemma = aut.verify_involution_lemma(g, dec, group, tol.eig)
        if lemma.applicable:
            rec.involution_holds = lemma.holds
            if not lemma.holds:
                rec.anomalies.append(INVOLUTION)
        prop = aut.verify_proposition1(profile, group, cls.simple_spectrum)
        rec.proposition1_holds = prop.holds if prop.applicable else None
        if not prop.holds:
            rec.anomalies.append(PROPOSITION)
    if cls.simple_spectrum:
        findings = aut.conjecture_scan(g, dec, profile, tol.supp, confirm=group is not None, group=group, eps_eig=tol.eig)
        rec.conjecture_findings = len(findings)
        rec.conjecture_matches = sum(f.matches for f in findings)
        if any(f.counterexample for f in findings):
            rec.anomalies.append(CONJECTURE)
    if any(not t.consistent for t in aut.detect_twin_pairs(g, dec, profile, tol.supp)):
        rec.anomalies.append(TWIN)

    if g.n <= cfg.oracle_max_n:
        sols = _permutation_solutions(g.adj)
        rec.oracle_solutions = sols
        # a unique verdict leaves only the identity; non_unique with one solution is allowed
        if sols >= 2 and UNIQUE in verdicts:
            rec.anomalies.append(ORACLE)

    rec.zone = assign_zone(cls, None if group is None else group.trivial, bool(verdicts))
    if rec.zone == ZONE2_CANDIDATE:
        rec.anomalies.append(ZONE2)


def _work(args):
    index, n, cfg = args
    return analyze_item(index, n, cfg)


def items(n_values, count: int):
    index = 0
    for n in n_values:
        for _ in range(count):
            yield index, n
            index += 1


def run_sweep(n_values, count: int, cfg: SweepConfig, workers: int = 1) -> list[SweepRecord]:
    """Analyse ``count`` graphs for every ``n`` in ``n_values``; records in index order."""
    work = [(i, n, cfg) for i, n in items(n_values, count)]
    if workers <= 1:
        return [_work(w) for w in work]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    with ctx.Pool(workers) as pool:
        return pool.map(_work, work, chunksize=max(1, len(work) // (workers * 8)))


def summarize(records: list[SweepRecord]) -> dict:
    cats = Counter(a for r in records for a in sorted(set(r.anomalies)))
    zones = Counter(r.zone for r in records)
    zone2_unique = sum(1 for r in records if r.zone == ZONE2_CANDIDATE and r.verdict == UNIQUE)
    return canonical(
        {
            "schema": "gmrelax.sweep/1",
            "graphs": len(records),
            "anomalies": {k: cats.get(k, 0) for k in (CONJECTURE, PROPOSITION, SOUNDNESS, ZONE2, INVOLUTION, DISAGREE, ORACLE, TWIN, ERROR, MARGINAL)},
            "zones": dict(sorted(zones.items())),
            "zone2_unique": zone2_unique,
            "defect_free": all(cats.get(k, 0) == 0 for k in DEFECTS),
        }
    )


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{canonical(v):.10g}"
    if isinstance(v, list):
        return ";".join(sorted(set(v)))
    return str(v)


def records_to_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        d = asdict(r)
        w.writerow([_csv_value(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def archive_zone2(records: list[SweepRecord], directory: str | Path) -> list[Path]:
    """Write every zone-2 candidate as an edge-list file; returns the paths."""
    directory = Path(directory)
    out = []
    for r in records:
        if r.zone != ZONE2_CANDIDATE:
            continue
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"er_n{r.n}_p{r.p:g}_seed{r.seed}.txt"
        write_edge_list(erdos_renyi(r.n, r.p, r.seed), path)
        out.append(path)
    return out
