"""Timing comparison of the two moment-kernel backends.

Run:  python3 benchmarks/bench_timeseries.py
"""

import time

import numpy as np

from fdosc._kernels import HAS_NUMBA
from fdosc.dynamics import trajectory
from fdosc.models import Morse
from fdosc.states import build_docs, invert_alpha


def time_backend(model, state, t, backend, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        trajectory(model, state, t, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    model = Morse()
    state = build_docs(model, invert_alpha(model, "docs", 2.0))
    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if HAS_NUMBA:
        # warm the jit cache outside the timed region
        trajectory(model, state, np.linspace(0.0, 1.0, 4), backend="numba")
    print(f"{'t_steps':>8s}  " + "  ".join(f"{b:>10s}" for b in backends))
    for steps in (1024, 4096, 16384, 65536):
        t = np.linspace(0.0, 282.0, steps)
        cells = [f"{time_backend(model, state, t, b) * 1e3:9.2f}ms" for b in backends]
        print(f"{steps:8d}  " + "  ".join(cells))


if __name__ == "__main__":
    main()
