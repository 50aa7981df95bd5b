"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each row times one workload under both backends and reports the speedup.
End-to-end rows swap the active backend, so everything built on the
kernels (certificates, sweeps) runs on the backend being measured.
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from gmrelax import kernels
from gmrelax import sweep as sw
from gmrelax.equivalence import certify_uniqueness_general
from gmrelax.graph import erdos_renyi


def _symmetric(n, seed):
    x = np.random.default_rng(seed).normal(size=(n, n))
    return x + x.T


def workloads():
    mats = {n: _symmetric(n, n) for n in (8, 20, 30)}
    costs = {n: np.random.default_rng(n).normal(size=(n, n)) for n in (8, 50)}
    graphs = [erdos_renyi(8, 0.5, s).matrix() for s in range(20)]
    cfg = sw.SweepConfig(seed=42)
    return {
        "jacobi n=8": lambda: kernels.jacobi_eigh(mats[8]),
        "jacobi n=20": lambda: kernels.jacobi_eigh(mats[20]),
        "jacobi n=30": lambda: kernels.jacobi_eigh(mats[30]),
        "hungarian n=8": lambda: kernels.hungarian(costs[8]),
        "hungarian n=50": lambda: kernels.hungarian(costs[50]),
        "general LP, 20 graphs n=8": lambda: [certify_uniqueness_general(a) for a in graphs],
        "sweep, 50 graphs n=8": lambda: sw.run_sweep([8], 50, cfg),
    }


def bench(repeat: int) -> list[dict]:
    backends = kernels.available_backends()
    rows = []
    saved = kernels._active
    try:
        for name, fn in workloads().items():
            row = {"workload": name}
            for b in backends:
                kernels._active = kernels.get_backend(b)
                number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
                row[b] = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
            if len(backends) == 2:
                row["speedup"] = row["python"] / row["compiled"]
            rows.append(row)
    finally:
        kernels._active = saved
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the rows here")
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    cols = [c for c in ("compiled", "python") if c in rows[0]]
    print(f"{'workload':<28}" + "".join(f"{c:>14}" for c in cols) + ("     speedup" if "speedup" in rows[0] else ""))
    for r in rows:
        line = f"{r['workload']:<28}" + "".join(f"{r[c] * 1e3:>11.3f} ms" for c in cols)
        if "speedup" in r:
            line += f"  {r['speedup']:>9.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
