"""Compare the numba and numpy kernel paths, per kernel and end to end.

Run with ``python benchmarks/bench_kernels.py``. Per-kernel timings call the
``*_numba`` and ``*_numpy`` functions directly; the end-to-end timing runs
``g2check example sphere`` in a subprocess with ``G2CHECK_NUMBA`` set to 1
and then 0.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from g2check import _kernels as K


def _inputs(rng):
    a = rng.normal(size=(7, 7))
    G = a + a.T + 14 * np.eye(7)
    dg = rng.normal(size=(7, 7, 7))
    return {
        "cross_apply": (rng.normal(size=(7, 7, 7)), rng.normal(size=7), rng.normal(size=7)),
        "cross_apply_many": (rng.normal(size=(7, 7, 7)), rng.normal(size=(64, 7)), rng.normal(size=(64, 7))),
        "christoffel": (np.linalg.inv(G), dg + dg.transpose(0, 2, 1)),
        "covariant_derivative": (rng.normal(size=(7, 7)), rng.normal(size=(7, 7)), rng.normal(size=(7, 7, 7)),
                                 rng.normal(size=(7, 7, 7)), G),
        "nabla_p": (rng.normal(size=(7, 7, 7)), rng.normal(size=(7, 7, 7))),
    }


def per_kernel(repeat: int) -> None:
    args = _inputs(np.random.default_rng(0))
    print(f"{'kernel':<22}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for name, a in args.items():
        f_np, f_nb = getattr(K, f"{name}_numpy"), getattr(K, f"{name}_numba")
        f_nb(*a)  # compile outside the timed region
        t_np = min(timeit.repeat(lambda: f_np(*a), number=repeat, repeat=3)) / repeat * 1e6
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=repeat, repeat=3)) / repeat * 1e6
        print(f"{name:<22}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>10.2f}")


def end_to_end(n: int) -> None:
    for flag in ("1", "0"):
        env = dict(os.environ, G2CHECK_NUMBA=flag)
        start = time.perf_counter()
        out = subprocess.run([sys.executable, "-m", "g2check", "example", "sphere", "--n", str(n), "--jobs", "1"],
                             env=env, capture_output=True, text=True)
        elapsed = time.perf_counter() - start
        print(f"example sphere --n {n} with G2CHECK_NUMBA={flag}: {elapsed:.2f} s (exit {out.returncode})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--n", type=int, default=50)
    ns = ap.parse_args()
    print(f"numba available: {K.HAVE_NUMBA}")
    per_kernel(ns.repeat)
    end_to_end(ns.n)


if __name__ == "__main__":
    main()
