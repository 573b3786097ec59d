"""Numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--samples 2000]

Part one times each hot kernel in-process (compiled vs fallback). Part two runs
``tclab verify`` end to end in two subprocesses, one with
TCLAB_DISABLE_NUMBA=1, and checks that the reports agree.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from tclab import linalg, verifier
from tclab._accel import NUMBA_ENABLED


def best_of(fn, repeat):
    fn()  # warm-up, triggers compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((20_000, 6))
    Y = X + 1e-3 * rng.standard_normal(X.shape)
    A, B = X[0].copy(), X[-1].copy()
    M = rng.integers(0, 2, size=(120, 160)).astype(np.int64)

    rref_py = getattr(linalg._rref_modp, "py_func", linalg._rref_modp)
    cases = [
        ("path_metrics", lambda: verifier._path_metrics_loop(X, A, B), lambda: verifier._path_metrics_np(X, A, B)),
        ("max_row_gap", lambda: verifier._max_row_gap_loop(X, Y), lambda: verifier._max_row_gap_np(X, Y)),
        ("rref mod 2", lambda: linalg._rref_modp(M.copy(), 2), lambda: rref_py(M.copy(), 2)),
    ]
    rows = []
    for name, fast, ref in cases:
        tf, tr = best_of(fast, repeat), best_of(ref, repeat)
        rows.append((name, tf, tr))
    return rows


def verify_run(space, samples, disable):
    env = dict(os.environ)
    env.pop("TCLAB_DISABLE_NUMBA", None)
    if disable:
        env["TCLAB_DISABLE_NUMBA"] = "1"
    cmd = [sys.executable, "-m", "tclab.cli", "verify", space, "--samples", str(samples), "--timing"]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=False)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--spaces", default="sphere:2,wedge:2,cylinder-config:1")
    args = ap.parse_args()

    label = "numba" if NUMBA_ENABLED else "numba (disabled in this process)"
    print(f"{'kernel':<14} {label:>34} {'fallback':>12} {'speedup':>8}")
    for name, tf, tr in kernel_rows(args.repeat):
        print(f"{name:<14} {tf * 1e3:>31.2f} ms {tr * 1e3:>9.2f} ms {tr / tf:>7.1f}x")

    print()
    print(f"{'verify':<20} {'numba':>10} {'numpy':>10}  reports equal")
    for space in args.spaces.split(","):
        a = verify_run(space, args.samples, disable=False)
        b = verify_run(space, args.samples, disable=True)
        ta, tb = a.pop("timing_seconds"), b.pop("timing_seconds")
        a.pop("kernel_backend"), b.pop("kernel_backend")
        same = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        print(f"{space:<20} {ta:>9.2f}s {tb:>9.2f}s  {same}")


if __name__ == "__main__":
    main()
