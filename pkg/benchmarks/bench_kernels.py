"""Time the hot kernels on both implementation paths.

The compiled/fallback choice is frozen when qdarwin imports, so this script
re-runs itself in two child processes, one with QDARWIN_DISABLE_NUMBA=1, and
prints a side-by-side table.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np


def _synthetic(m: int, seed: int = 5):
    rng = np.random.default_rng(seed)
    c0 = rng.normal(size=m) + 1j * rng.normal(size=m)
    c1 = rng.normal(size=m) + 1j * rng.normal(size=m)
    c0 /= np.linalg.norm(c0)
    c1 /= np.linalg.norm(c1)
    at = np.sum(np.conj(c1) * c0)
    return np.abs(c0) ** 2, np.abs(c1) ** 2, np.conj(c1) * c0, at


def _cases():
    from qdarwin import _kernels as k

    p0, p1, a, at = _synthetic(50_000)
    big = (p0, p1, a, at)
    p0s, p1s, a_s, ats = _synthetic(400)
    p0c, p1c, ac, atc = _synthetic(1200)
    w = np.abs(_synthetic(20_000)[2]) * 4.0
    log_df = -np.sort(w)[::-1].cumsum() * 0.5
    order_big = np.arange(50_000)

    return [
        (
            "fock_mi_batch, 50k fragments, n=8",
            lambda: k.fock_mi_batch(p0, p1, a.real, a.imag, 8, at.real, at.imag),
        ),
        (
            "coherent_mi_batch, 20k fragments",
            lambda: k.coherent_mi_batch(log_df, log_df[-1]),
        ),
        (
            "greedy_fock, 400 atoms, n=4",
            lambda: k.greedy_fock(p0s, p1s, a_s.real, a_s.imag, 4, ats.real, ats.imag),
        ),
        (
            "greedy_coherent, 1200 atoms",
            lambda: k.greedy_coherent(np.abs(ac) ** 2, 4.0, -2.0),
        ),
        (
            "curve_fock, 50k prefixes, n=8",
            lambda: k.curve_fock(p0, p1, a.real, a.imag, order_big, 8, at.real, at.imag),
        ),
        (
            "curve_coherent, 20k prefixes",
            lambda: k.curve_coherent(w, np.arange(20_000), 4.0, log_df[-1]),
        ),
    ]


def _worker() -> None:
    from qdarwin import _kernels as k

    results = {}
    for name, fn in _cases():
        fn()  # warm up (and compile, on the numba path)
        n_calls = max(1, int(0.2 / max(1e-4, timeit.timeit(fn, number=1))))
        best = min(timeit.repeat(fn, number=n_calls, repeat=3)) / n_calls
        results[name] = best
    json.dump({"use_numba": k.USE_NUMBA, "times": results}, sys.stdout)


def _run_child(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("QDARWIN_DISABLE_NUMBA", None)
    if disable:
        env["QDARWIN_DISABLE_NUMBA"] = "1"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    )
    return json.loads(out.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        _worker()
        return

    compiled = _run_child(disable=False)
    fallback = _run_child(disable=True)
    if not compiled["use_numba"]:
        print("note: numba unavailable, both columns use the numpy path")

    width = max(len(n) for n in fallback["times"])
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name, t_np in fallback["times"].items():
        t_nb = compiled["times"][name]
        print(f"{name:<{width}}  {t_nb * 1e3:>8.3f}ms  {t_np * 1e3:>8.3f}ms  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
