"""Benchmark the hot kernels on the numba and pure-numpy paths.

Run `python benchmarks/bench_kernels.py` to time the active path, or
`python benchmarks/bench_kernels.py --compare` to time both (the fallback
is exercised in a subprocess with MASTAT_NO_NUMBA=1, since the path is
fixed at import time).
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _timings():
    from mastat import _kernels, dist, dominance

    rng = np.random.default_rng(0)
    results = {"path": _kernels.active_path()}

    # convolution powers: snap-merge dominates the cost
    base = dist.make(np.sort(rng.uniform(-1, 1, 5)), rng.dirichlet(np.ones(5)))
    dist.iid_power(base, 8)  # warm the jit before timing
    t0 = time.perf_counter()
    for _ in range(20):
        dist.iid_power(base, 16)
    results["iid_power_16_x20"] = time.perf_counter() - t0

    # catalyst verification sweep at the atom cap
    x = dist.make([0.0, 1.0], [2 / 3, 1 / 3])
    y = dist.discretize_uniform(-0.6, 0.4, 1e-3)
    z = dist.discretize_trunc_gaussian(1.0, 20.0, 40.0 / 16384)
    dominance.fosd_with_catalyst(x, y, z)
    t0 = time.perf_counter()
    for _ in range(5):
        dominance.fosd_with_catalyst(x, y, z)
    results["verify_sweep_16k_x5"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    for _ in range(5):
        dominance.sosd_with_catalyst(x, y, z)
    results["integrated_sweep_16k_x5"] = time.perf_counter() - t0

    # end-to-end catalyst construction
    t0 = time.perf_counter()
    dominance.find_catalyst_first(x, y)
    results["find_catalyst_figure_pair"] = time.perf_counter() - t0
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--compare", action="store_true")
    parser.add_argument("--json", action="store_true", help="machine output")
    args = parser.parse_args()

    mine = _timings()
    if args.json:
        print(json.dumps(mine))
        return
    rows = [mine]
    if args.compare:
        env = dict(os.environ)
        if mine["path"] == "numba":
            env["MASTAT_NO_NUMBA"] = "1"
        else:
            env.pop("MASTAT_NO_NUMBA", None)
        out = subprocess.run(
            [sys.executable, __file__, "--json"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        rows.append(json.loads(out.stdout))

    keys = [k for k in rows[0] if k != "path"]
    header = f"{'kernel':32s}" + "".join(f"{r['path']:>12s}" for r in rows)
    print(header)
    print("-" * len(header))
    for k in keys:
        cells = "".join(f"{r[k]:12.4f}" for r in rows)
        print(f"{k:32s}{cells}")


if __name__ == "__main__":
    main()
