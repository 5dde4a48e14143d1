#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Runs identical workloads through both lanes and reports wall times and
speedups.  Usage: python benchmarks/benchmark_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

import monosweep._pykernels as pyk

try:
    import monosweep._kernels as ck
except ImportError:
    ck = None

RTOL, ATOL = 1e-11, 1e-13
MAX_STEPS = 10**7


def bench_two_level(k):
    y0 = np.array([1.0, 0.0], dtype=complex)
    for eps in (0.2, 0.5, 1.0, 2.0):
        e = eps / math.pi
        k.two_level(pyk.FAMILY_CLASS1, pyk.SHAPE_SINH, e, e, e, -184.0, 184.0,
                    y0, RTOL, ATOL, 0.0, MAX_STEPS, True)


def bench_multi_level(k):
    y0 = np.zeros(4, dtype=complex)
    y0[0] = 1.0
    k.multi_level(0.5, (0.3, 0.6, 0.4), -184.0, 184.0, y0, RTOL, ATOL, 0.0,
                  MAX_STEPS, True)


def bench_hyp_frame(k):
    frame = np.eye(2, dtype=complex)
    alpha, beta, gamma = 0.41421356j, -2.41421356j, 0.5 + 1.0 - 1.0j
    frame, _ = k.hyp_frame_segment(alpha, beta, gamma, pyk.SEG_LINE,
                                   0.5 + 8.0j, 0.5 + 0.0j, 0j, 0.0, 0.0, 0.0,
                                   frame, RTOL, ATOL, 0.0, MAX_STEPS)
    k.hyp_frame_segment(alpha, beta, gamma, pyk.SEG_ARC, 0j, 0j, 1.0 + 0j,
                        0.6, math.pi, 3 * math.pi, frame, RTOL, ATOL, 0.0,
                        MAX_STEPS)


def bench_okubo(k):
    amat = np.array(
        [[-0.5 - 0.25j, 1.0, 1.0],
         [-0.16 + 0.05j, -1.3 - 0.12j, -0.3 - 0.12j],
         [-0.49 - 0.07j, -0.2 - 0.13j, -1.2 - 0.13j]]
    )
    d0 = np.array([1.0, 0.2 + 0.1j, -0.3 + 0.4j])
    k.okubo_line(amat, -1e6, 1e6, d0, RTOL, ATOL, 0.0, MAX_STEPS)


WORKLOADS = [
    ("two-level sweep, 4 propagations over [-184, 184]", bench_two_level),
    ("4-level bordered sweep over [-184, 184]", bench_multi_level),
    ("hypergeometric frame transport (descent + loop)", bench_hyp_frame),
    ("Okubo normal form along z in [-1e6, 1e6]", bench_okubo),
]


def time_of(fn, k, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(k)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if ck is None:
        print("compiled extension not available; timing the numpy lane only")

    name_w = max(len(name) for name, _ in WORKLOADS)
    header = f"{'workload':<{name_w}}  {'numpy':>10}"
    if ck is not None:
        header += f"  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in WORKLOADS:
        t_py = time_of(fn, pyk, args.repeat)
        line = f"{name:<{name_w}}  {t_py * 1e3:>8.2f}ms"
        if ck is not None:
            t_c = time_of(fn, ck, args.repeat)
            line += f"  {t_c * 1e3:>8.2f}ms  {t_py / t_c:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
