#!/usr/bin/env python3
"""Benchmark the hot kernels on the numba path vs the pure-numpy fallback.

Run with no arguments to get a side-by-side table: the script re-invokes
itself twice, once normally and once with ENTKIT_NO_NUMBA=1.  Pass
``--mode single`` to time only the current interpreter's configuration
(useful under hyperfine or to probe one path).
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _median_time(fn, repeats=5, number=3):
    # warm once so JIT compilation stays out of the timings
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(number):
            fn()
        times.append((time.perf_counter() - t0) / number)
    return float(np.median(times))


def run_workloads() -> dict:
    from entkit import _kernels
    from entkit.gatecost import SearchOptions, exact_min_cz_search
    from entkit.measures import RoofOptions, convex_roof_eof
    from entkit.states import Cut, ghz_state, random_mixed_state

    results = {"numba_enabled": _kernels.NUMBA_ENABLED}

    # raw objective kernel, microseconds per call
    rng = np.random.default_rng(0)
    w = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    w = np.ascontiguousarray(w / np.linalg.norm(w))
    results["ensemble_avg_ent_us"] = _median_time(
        lambda: [_kernels.ensemble_avg_ent(w, 2, 2) for _ in range(1000)], repeats=5, number=1
    ) * 1e3

    # convex roof on a rank-3 two-qubit state (end to end)
    rho = random_mixed_state((2, 2), 3, 7)
    cut = Cut.bipartition([0], 2)
    opts = RoofOptions(restarts=6, max_iters=1200, seed=1)
    results["convex_roof_s"] = _median_time(lambda: convex_roof_eof(rho, cut, opts), repeats=3, number=1)

    # exact CZ search on GHZ(3)
    ghz = ghz_state(3)
    sopts = SearchOptions(restarts=4, seed=0)
    results["cz_search_s"] = _median_time(lambda: exact_min_cz_search(ghz, 2, sopts), repeats=3, number=1)

    return results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mode", choices=["compare", "single"], default="compare")
    args = parser.parse_args()

    if args.mode == "single":
        print(json.dumps(run_workloads()))
        return 0

    here = os.path.abspath(__file__)
    rows = {}
    for label, env_extra in (("numba", {}), ("numpy", {"ENTKIT_NO_NUMBA": "1"})):
        env = dict(os.environ)
        env.pop("ENTKIT_NO_NUMBA", None)
        env.update(env_extra)
        out = subprocess.run(
            [sys.executable, here, "--mode", "single"], env=env, capture_output=True, text=True
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            return out.returncode
        rows[label] = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'workload':<28}{'numba':>14}{'numpy':>14}{'speedup':>10}")
    for key, unit in (
        ("ensemble_avg_ent_us", "us"),
        ("convex_roof_s", "s"),
        ("cz_search_s", "s"),
    ):
        a, b = rows["numba"][key], rows["numpy"][key]
        print(f"{key:<28}{a:>12.4f} {unit:<2}{b:>12.4f} {unit:<2}{b / a:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
