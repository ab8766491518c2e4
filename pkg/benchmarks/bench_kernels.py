#!/usr/bin/env python3
"""Time the hot kernels on the jitted path and the pure-numpy fallback.

Run directly for the current mode, or with --both to spawn a subprocess
with DOFP_DISABLE_NUMBA=1 and print a comparison table (CSV to stdout).
"""

import argparse
import csv
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_suite() -> dict:
    import dofp.kernels as K
    from dofp._jit import NUMBA_ENABLED

    rng = np.random.default_rng(0)
    xs = np.geomspace(0.05, 50.0, 20000)
    ts = np.linspace(1e-4, 2.0, 2048)
    u = rng.uniform(0.0, np.pi, 200_000)
    w = rng.standard_exponential(200_000)

    results = {
        "mode": "numba" if NUMBA_ENABLED else "numpy",
        "stable_density_20k_points": bench(
            K.stable_std_many, xs, 0.7, 1e-12, 400, 0.5, 500.0, 24),
        "exp_functional_grid_2048": bench(
            K.phi_grid, 0.4, 0.8, 0.5, 0.5, 1.0, ts, 1e-14, 1e-12, 600, 24, 0.25),
        "gml_series_scalar_20k": bench(
            lambda: [K.gml_series(0.8, 1.3, 2.0, -2.0, 1e-14, 1e-12, 600, True)
                     for _ in range(20000)]),
        "gml_inversion_scalar_5k": bench(
            lambda: [K.gml_talbot(0.4, 1.0, 1.0, 39.8, 24) for _ in range(5000)]),
        "stable_sampling_transform_200k": bench(K.kanter_std, 0.7, u, w),
        "count_transform_inversion_5k": bench(
            lambda: [K.pmf_talbot(0.4, 0.8, 0.5, 0.5, 1.0, 3, 1.0, 24)
                     for _ in range(5000)]),
    }
    return results


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--both", action="store_true",
                    help="also run the pure-numpy fallback in a subprocess")
    ap.add_argument("--json", action="store_true", help="emit raw json")
    args = ap.parse_args()

    here = run_suite()
    if args.json:
        json.dump(here, sys.stdout)
        print()
        return 0

    rows = [here]
    if args.both:
        env = dict(os.environ, DOFP_DISABLE_NUMBA="1")
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--json"],
            env=env, capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout))

    fields = ["kernel"] + [r["mode"] for r in rows]
    if len(rows) == 2:
        fields.append("speedup")
    writer = csv.writer(sys.stdout)
    writer.writerow(fields)
    for key in rows[0]:
        if key == "mode":
            continue
        line = [key] + [f"{r[key]:.4f}" for r in rows]
        if len(rows) == 2:
            line.append(f"{rows[1][key] / rows[0][key]:.1f}x")
        writer.writerow(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
