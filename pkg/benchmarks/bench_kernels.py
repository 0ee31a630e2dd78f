"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 20000]

Prints one line per kernel with the best wall time of each backend, the
speedup and the largest relative difference between their outputs.
"""
import argparse
import time

import numpy as np

from hypsob.geometry import omega, sphere_area
from hypsob.kernels import get_backend
from hypsob.piecewise import Piecewise


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(size, n=5):
    rng = np.random.default_rng(0)
    r = rng.uniform(0.0, 12.0, size)
    v = np.exp(rng.uniform(np.log(1e-8), np.log(1e12), size))
    a = np.exp(rng.uniform(np.log(1e-6), np.log(1e6), size))
    b = a * np.exp(rng.uniform(0.0, 5.0, size))
    g = Piecewise.from_step(np.geomspace(1e-3, 1e3, 40), np.linspace(2.0, 0.1, 40)).cumulative()
    compiled = g._compile()
    t = np.exp(rng.uniform(np.log(1e-4), np.log(1e4), size))
    c, w = sphere_area(n), omega(n)
    return {
        "ball_volume": lambda K: K.ball_volume(r, n, c),
        "inverse_volume": lambda K: K.inverse_volume(v, n, c, w, 1e-12),
        "kernel_integral": lambda K: K.kernel_integral(2.0, a, b, n),
        "powerlog_eval": lambda K: K.powerlog_eval(t, *compiled),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=20000)
    args = ap.parse_args()
    py, cy = get_backend("python"), get_backend("cython")
    print(f"{'kernel':<16} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max rel diff':>13}")
    for name, fn in cases(args.size).items():
        tp, op = best_time(lambda: fn(py), args.repeat)
        tc, oc = best_time(lambda: fn(cy), args.repeat)
        op, oc = np.asarray(op), np.asarray(oc)
        diff = np.max(np.abs(op - oc) / np.maximum(np.abs(op), 1e-300))
        print(f"{name:<16} {tp:>11.5f} {tc:>11.5f} {tp / tc:>8.1f} {diff:>13.2e}")


if __name__ == "__main__":
    main()
