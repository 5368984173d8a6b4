"""Time the grid LP with each pivoting kernel and pricing rule.

    python3 benchmarks/bench_simplex.py --resolutions 11 41 81 --repeats 3

Prints one JSON object per (kernel, rule, resolution) with the median wall
time per LP and the mean pivot count, then the compiled/pure speedups.
"""

from __future__ import annotations

import argparse
import json
import statistics
import time

import numpy as np

from covbounds.oracle import simplex
from covbounds.oracle.lp import GridLpProblem, Sense, solve_grid_lp
from covbounds.oracle.sweeps import random_box, random_full_spec


def problems(resolution: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        box = random_box(rng)
        spec = random_full_spec(rng, box, resolution)
        sense = Sense.MAX if i % 2 else Sense.MIN
        out.append(GridLpProblem.from_spec(box, spec, resolution, sense))
    return out


def bench(backend: str, rule: str, probs, repeats: int) -> dict:
    times, iters = [], []
    for _ in range(repeats):
        start = time.perf_counter()
        for p in probs:
            iters.append(solve_grid_lp(p, rule=rule, backend=backend).iterations)
        times.append((time.perf_counter() - start) / len(probs))
    return {"ms_per_lp": 1e3 * statistics.median(times), "mean_pivots": statistics.fmean(iters)}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolutions", type=int, nargs="+", default=[11, 41, 81])
    ap.add_argument("--problems", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--rules", nargs="+", default=["dantzig", "bland"], choices=sorted(simplex.RULES))
    ap.add_argument("--max-bland-resolution", type=int, default=41, help="skip slower Bland runs above this")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    kernels = sorted(simplex.KERNELS)
    results = {}
    for res in args.resolutions:
        probs = problems(res, args.problems, args.seed)
        for rule in args.rules:
            if rule == "bland" and res > args.max_bland_resolution:
                continue
            for backend in kernels:
                row = {"kernel": backend, "rule": rule, "resolution": res, **bench(backend, rule, probs, args.repeats)}
                results[backend, rule, res] = row
                print(json.dumps(row), flush=True)

    if "cython" in simplex.KERNELS:
        for (backend, rule, res), row in results.items():
            if backend == "cython":
                base = results[("python", rule, res)]["ms_per_lp"]
                print(json.dumps({"speedup": base / row["ms_per_lp"], "rule": rule, "resolution": res}))


if __name__ == "__main__":
    main()
