#!/usr/bin/env python3
"""Benchmark the compiled stencil kernels against the numpy fallback.

Times the raw kernels and a composite Myrzakulov-I right-hand-side
evaluation (the hot loop of a flow run) on a few grid sizes.

Run:  python benchmarks/bench_backends.py [--sizes 64 128 256] [--repeat 30]
"""

import argparse
import time

import numpy as np

from spinflow import _stencils_py
from spinflow.grid import Grid2D

try:
    from spinflow import _stencils
except ImportError:
    _stencils = None


def timeit(fn, repeat):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def mi_rhs_composite(kern, S, h):
    """The M-I stencil/vector core (constraint solve excluded: FFT is shared)."""
    Sx = kern.diff1_ord2(S, h, -1)
    Sy = kern.diff1_ord2(S, h, -2)
    rho = -kern.dot3(S, kern.cross3(Sx, Sy))
    W = kern.cross3(S, Sy) + rho[None] * S
    return kern.diff1_ord2(W, h, -1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--repeat", type=int, default=30)
    args = ap.parse_args()

    if _stencils is None:
        print("compiled extension not available; showing numpy fallback only")
    backends = [("numpy", _stencils_py)]
    if _stencils is not None:
        backends.append(("compiled", _stencils))

    rows = []
    for n in args.sizes:
        g = Grid2D(n, n, 2 * np.pi, 2 * np.pi)
        rng = np.random.default_rng(0)
        f = rng.normal(size=(n, n))
        S = rng.normal(size=(3, n, n))
        S /= np.sqrt((S**2).sum(0))[None]
        T = np.ascontiguousarray(S[::-1])
        cases = {
            "d1_ord2_x(scalar)": lambda k: k.diff1_ord2(f, g.hx, -1),
            "d2_ord4_y(scalar)": lambda k: k.diff2_ord4(f, g.hy, -2),
            "d1_ord2_x(vec3)": lambda k: k.diff1_ord2(S, g.hx, -1),
            "cross3": lambda k: k.cross3(S, T),
            "normalize3": lambda k: k.normalize3(S),
            "mi_rhs_core": lambda k: mi_rhs_composite(k, S, g.hx),
        }
        for case, fn in cases.items():
            times = {}
            for name, kern in backends:
                times[name] = timeit(lambda: fn(kern), args.repeat)
            speedup = (times["numpy"] / times["compiled"]
                       if "compiled" in times else float("nan"))
            rows.append((n, case, times.get("numpy", float("nan")),
                         times.get("compiled", float("nan")), speedup))

    print(f"{'n':>5} {'kernel':<20} {'numpy [us]':>12} {'compiled [us]':>14} {'speedup':>8}")
    for n, case, tn, tc, sp in rows:
        print(f"{n:>5} {case:<20} {tn*1e6:>12.1f} {tc*1e6:>14.1f} {sp:>8.2f}")


if __name__ == "__main__":
    main()
