"""Command-line interface.

Exit codes, shared by every subcommand:
  0  success (equivalent, isomorphic, unique, all checks pass)
  1  internal defect (a checked theorem or consistency property failed)
  2  usage or input error
  3  semantic negative (non-unique, not isomorphic, conjecture counterexample)
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from gmrelax import __version__
from gmrelax.corpus import NAMES, corpus
from gmrelax.equivalence import UNIQUE, MatchConfig, relax_and_round
from gmrelax.graph import Graph, GraphFormatError, read_edge_list
from gmrelax.report import analyze_graph, corpus_summary, dumps, verify_corpus
from gmrelax.spectral import SpectralError, Tolerances
from gmrelax import sweep as sw

EXIT_OK, EXIT_DEFECT, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2, 3

log = logging.getLogger("gmrelax")

SCAN_CSV_HELP = """\
CSV columns (one row per graph, in index order):
  index, seed         item index and the ER seed (sweep seed + index)
  n, p, digest, m     graph parameters, edge-list hash, edge count
  regular, simple     1/0 flags; simple = no repeated eigenvalues
  k, supports         orthogonal-to-ones eigenvectors and their sorted supports
  theorem_sorted      sorted-support condition holds
  zone                zone label
  verdict             unique | non_unique | disagree
  fast_optimum        fast certificate LP optimum (simple spectra)
  general_optimum     general certificate LP optimum
  group_order         automorphism group order (n <= 20)
  conjecture_*        support-set findings and pattern matches
  proposition1_holds  blank when not applicable
  involution_holds    blank when not applicable
  oracle_solutions    permutation solutions of AP = PA (small n)
  anomalies           ';'-separated categories
"""


class InputError(Exception):
    pass


def _tolerances(args) -> Tolerances:
    return Tolerances(eig=args.tol_eig, orth=args.tol_orth, supp=args.tol_supp, cert=args.tol_cert)


def load_graph(spec: str) -> tuple[str, Graph]:
    """A corpus name or a path to an edge-list file."""
    path = Path(spec)
    if path.exists():
        return str(path), read_edge_list(path)
    if spec in NAMES:
        return spec, corpus(spec).graph
    raise InputError(f"{spec!r} is neither a file nor a corpus graph ({', '.join(NAMES)})")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    name, g = load_graph(args.input)
    rep = analyze_graph(g, name, _tolerances(args), args.method)
    if args.format == "text":
        _emit(rep.to_text(), args.out)
    else:
        _emit(rep.to_json(timings=args.timings), args.out)
    return EXIT_DEFECT if any(n.startswith("DEFECT") for n in rep.notes) else EXIT_OK


def cmd_match(args) -> int:
    name_a, a = load_graph(args.graph_a)
    name_b, b = load_graph(args.graph_b)
    if a.n != b.n:
        raise InputError(f"size mismatch: {name_a} has {a.n} vertices, {name_b} has {b.n}")
    cfg = MatchConfig(fw_max_iter=args.fw_max_iter, run_exact=not args.no_exact, tolerances=_tolerances(args))
    t0 = time.perf_counter()
    rep = relax_and_round(a, b, cfg)
    d = {"schema": "gmrelax.match/1", "a": name_a, "b": name_b, **rep.to_dict()}
    if args.timings:
        d["seconds"] = time.perf_counter() - t0
    if args.format == "text":
        lines = [
            f"permutation  {' '.join(map(str, rep.rounded.map))}",
            f"objective    {rep.rounded_objective}",
            f"relaxed      {rep.relaxed.objective:.6g} (gap {rep.relaxed.dual_gap:.3g}, {rep.relaxed.iterations} iterations)",
            f"certificate  {rep.certificate.verdict}",
        ] + [f"note         {n}" for n in rep.notes]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(dumps(d), args.out)
    return EXIT_OK if rep.isomorphism_found else EXIT_NEGATIVE


def cmd_certify(args) -> int:
    name, g = load_graph(args.input)
    rep = analyze_graph(g, name, _tolerances(args), args.method)
    if args.method in ("fast", "both") and not rep.classification["simple_spectrum"]:
        raise InputError("the fast certificate needs a simple spectrum; use --method general")
    certs = rep.certificates
    verdicts = {c["verdict"] for c in certs.values()}
    d = {"schema": "gmrelax.certificate/1", "graph": name, "digest": rep.digest, "certificates": certs}
    if len(certs) > 1:
        opts = [c["lp_optimum"] for c in certs.values()]
        d["agree"] = len(verdicts) == 1 and max(opts) - min(opts) <= 1e-6
    if args.format == "text":
        lines = [f"{m}: {c['verdict']} (optimum {c['lp_optimum']:.6g})" for m, c in sorted(certs.items())]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(dumps(d), args.out)
    if d.get("agree") is False:
        return EXIT_DEFECT
    return EXIT_OK if verdicts == {UNIQUE} else EXIT_NEGATIVE


def cmd_corpus_verify(args) -> int:
    results = verify_corpus(_tolerances(args))
    summary = corpus_summary(results)
    if args.format == "text":
        lines = []
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            detail = "; ".join(f"{c.prop}: expected {c.expected}, got {c.actual}" for c in r.failures())
            lines.append(f"{status}  {r.name:<11} {r.report.zone:<15} {detail}".rstrip())
        lines.append(f"{summary['passed']}/{summary['total']} entries pass")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(dumps(summary), args.out)
    return EXIT_OK if summary["passed"] == summary["total"] else EXIT_DEFECT


def parse_n_range(text: str) -> list[int]:
    """``8``, ``2..4`` or ``4,6,8``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vertex count range {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"bad vertex count range {text!r}")
    return values


def cmd_scan_er(args) -> int:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if not 0.0 <= args.p <= 1.0:
        raise InputError("--p must lie in [0, 1]")
    cfg = sw.SweepConfig(p=args.p, seed=args.seed, certificates=args.certificates, tol=_tolerances(args))
    t0 = time.perf_counter()
    records = sw.run_sweep(args.n, args.count, cfg, args.workers)
    elapsed = time.perf_counter() - t0
    summary = sw.summarize(records)
    if args.format == "json":
        _emit(dumps({"summary": summary, "records": [r.__dict__ for r in records]}), args.out)
    elif args.format == "text":
        _emit(dumps(summary), args.out)
    else:
        _emit(sw.records_to_csv(records), args.out)
    archive = args.archive_dir or (str(Path(args.out).parent / "zone2_candidates") if args.out else None)
    if archive:
        paths = sw.archive_zone2(records, archive)
        if paths:
            print(f"archived {len(paths)} zone-2 candidates in {archive}", file=sys.stderr)
    elif summary["anomalies"][sw.ZONE2]:
        print("zone-2 candidates found; pass --archive-dir to keep their edge lists", file=sys.stderr)
    print(f"{len(records)} graphs in {elapsed:.1f} s; anomalies: "
          + ", ".join(f"{k}={v}" for k, v in summary["anomalies"].items() if v), file=sys.stderr)
    if not summary["defect_free"]:
        return EXIT_DEFECT
    return EXIT_NEGATIVE if summary["anomalies"][sw.CONJECTURE] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    tol = Tolerances()
    g = common.add_argument_group("tolerances")
    g.add_argument("--tol-eig", type=float, default=tol.eig, help="relative eigenvalue separation (default %(default)g)")
    g.add_argument("--tol-orth", type=float, default=None, help="|u^T 1| threshold (default 1e-8 * sqrt(n))")
    g.add_argument("--tol-supp", type=float, default=tol.supp, help="nonzero-entry threshold (default %(default)g)")
    g.add_argument("--tol-cert", type=float, default=tol.cert, help="certificate optimum threshold (default %(default)g)")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gmrelax", description="Graph matching versus its doubly-stochastic relaxation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="spectral classification, certificate, group and zone")
    c.add_argument("input", help="edge-list file or corpus name")
    c.add_argument("--method", choices=["auto", "fast", "general", "both"], default="auto")
    c.add_argument("--format", choices=["json", "text"], default="json")
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("match", parents=[common], help="relax, round and compare two graphs")
    m.add_argument("graph_a")
    m.add_argument("graph_b")
    m.add_argument("--fw-max-iter", type=int, default=50_000)
    m.add_argument("--no-exact", action="store_true", help="skip the exact branch-and-bound matcher")
    m.add_argument("--format", choices=["json", "text"], default="json")
    m.set_defaults(func=cmd_match)

    e = sub.add_parser("certify", parents=[common], help="uniqueness certificate for the commutant of A")
    e.add_argument("input")
    e.add_argument("--method", choices=["auto", "fast", "general", "both"], default="auto")
    e.add_argument("--format", choices=["json", "text"], default="json")
    e.set_defaults(func=cmd_certify)

    v = sub.add_parser("corpus-verify", parents=[common], help="re-derive every corpus record")
    v.add_argument("--format", choices=["json", "text"], default="text")
    v.set_defaults(func=cmd_corpus_verify)

    s = sub.add_parser(
        "scan-er",
        parents=[common],
        help="Erdos-Renyi sweep with anomaly summary",
        epilog=SCAN_CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    s.add_argument("--n", type=parse_n_range, default=[8], help="vertex counts: 8, 2..4 or 4,6,8")
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--count", type=int, default=10_000, help="graphs per vertex count")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--certificates", choices=["auto", "fast", "general", "both"], default="both")
    s.add_argument("--archive-dir", help="directory for zone-2 candidate edge lists")
    s.add_argument("--format", choices=["csv", "json", "text"], default="csv")
    s.set_defaults(func=cmd_scan_er)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, GraphFormatError, SpectralError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"gmrelax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return EXIT_DEFECT


if __name__ == "__main__":
    sys.exit(main())
