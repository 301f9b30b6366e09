"""Benchmark the compiled kernel against the pure-NumPy fallback.

Usage: python benchmarks/bench_backends.py [--steps N] [--sizes 100,200,400]
"""

import argparse
import time

from chemofront import _kernels
from chemofront.grid import build_grid, sample_initial
from chemofront.model import ModelParams, envelope_rate


def bench(advance, p, M, n_steps):
    grid = build_grid(M, 0.45 * p.h0 ** 2 / (M * M), 1e9)
    s = sample_initial(p, grid)
    rate = envelope_rate(p, p.sigma)
    t0 = time.perf_counter()
    d = advance(s.w, s.V1, s.V2, s.g, grid.tau, grid.h, 0, n_steps,
                p.a, p.b, p.chi1, p.chi2, p.lambda1, p.lambda2,
                p.mu1, p.mu2, p.nu, rate, p.sigma)
    elapsed = time.perf_counter() - t0
    assert d["steps_done"] == n_steps and d["nonfinite_step"] == -1
    return elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=5000)
    parser.add_argument("--sizes", default="100,200,400")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    p = ModelParams(a=2.0, b=1.0, chi1=0.2, chi2=0.1, lambda1=1.0, lambda2=2.0,
                    mu1=1.0, mu2=2.0, nu=0.8, sigma=1.0, h0=2.0)
    backends = _kernels.available_backends()
    print(f"selected backend: {_kernels.BACKEND}; "
          f"available: {', '.join(sorted(backends))}")
    print(f"{args.steps} steps of the full update (two chemical solves + "
          "explicit step) per measurement\n")
    header = f"{'M':>6} " + "".join(f"{name:>16}" for name in sorted(backends))
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for M in sizes:
        times = {}
        for name in sorted(backends):
            # warm-up pass, then the timed pass
            bench(backends[name], p, M, min(200, args.steps))
            times[name] = bench(backends[name], p, M, args.steps)
        row = f"{M:>6} " + "".join(
            f"{times[name] / args.steps * 1e6:>13.2f} us" for name in sorted(times)
        )
        if len(times) == 2:
            row += f"{times['pure'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
