"""Benchmark the compiled kernels against the pure fallback.

Times the three hot paths on realistic workloads: the exact identity scan
over singleton × block pairs, the exact double sum over product events, and
the midpoint quadrature battery from the fiber-pair lab. Results from the two
backends are compared while timing (exact integers must match, quadrature to
float noise), so the benchmark doubles as an equivalence check.

Usage: python benchmarks/bench_backends.py [--repeat N] [--panels N]
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

import numpy as np

import rcdkit._purecore as pure
from rcdkit import generate_event_battery
from rcdkit.campaign import random_instance
from rcdkit.continuum import DiracProductKernel
from rcdkit.engine import compute_rcd
from rcdkit.measures import weights_over_common_denominator
from rcdkit._backend import build_panel_grid

try:
    import rcdkit._fastcore as fast
except ImportError:
    fast = None


def _identity_workload(sizes, instances_per_size=20):
    work = []
    for size in sizes:
        for i in range(instances_per_size):
            rng = random.Random(f"bench-id:{size}:{i}")
            desc = random_instance(rng, max_points=size, max_denominator=64)
            kernel = compute_rcd(desc.rho, desc.partition)
            q, rows = weights_over_common_denominator([desc.rho, *kernel.rows])
            if desc.space.n * q * q >= 1 << 62:
                continue
            offsets = [0]
            points: list[int] = []
            for block in desc.partition.blocks:
                points.extend(block)
                offsets.append(len(points))
            work.append(
                {
                    "q": q,
                    "weights": rows[0],
                    "rows": rows[1:],
                    "block_of_point": list(desc.partition.block_of_point),
                    "blocks": desc.partition.blocks,
                    "np": (
                        np.array(rows[0], dtype=np.int64),
                        np.array(rows[1:], dtype=np.int64),
                        np.array(desc.partition.block_of_point, dtype=np.int64),
                        np.array(offsets, dtype=np.int64),
                        np.array(points, dtype=np.int64),
                    ),
                }
            )
    return work


def bench_identity(work, repeat):
    def run_pure():
        acc = 0
        for item in work:
            acc += pure.identity_first_failure(
                item["q"], item["weights"], item["rows"], item["block_of_point"], item["blocks"]
            )
        return acc

    def run_fast():
        acc = 0
        for item in work:
            w, r, bop, off, pts = item["np"]
            acc += fast.identity_first_failure(item["q"], w, r, bop, off, pts)
        return acc

    return _time_pair(run_pure, run_fast if fast else None, repeat)


def _mask_workload(sizes, per_size=20):
    work = []
    for size in sizes:
        for i in range(per_size):
            rng = random.Random(f"bench-ds:{size}:{i}")
            desc = random_instance(rng, max_points=size, max_denominator=64)
            kernel = compute_rcd(desc.rho, desc.partition)
            q, rows = weights_over_common_denominator([desc.rho, *kernel.rows])
            n = desc.space.n
            if n * q * q >= 1 << 62:
                continue
            mask = bytearray(n * n)
            for j in range(n * n):
                mask[j] = rng.random() < 0.5
            work.append(
                {
                    "weights": rows[0],
                    "rows": rows[1:],
                    "mask": mask,
                    "np": (
                        np.array(rows[0], dtype=np.int64),
                        np.array(rows[1:], dtype=np.int64),
                        np.frombuffer(bytes(mask), dtype=np.uint8),
                    ),
                }
            )
    return work


def bench_double_sum(work, repeat):
    def run_pure():
        acc = 0
        for item in work:
            acc += pure.product_rhs_numerator(item["weights"], item["rows"], item["mask"])
        return acc

    def run_fast():
        acc = 0
        for item in work:
            w, r, m = item["np"]
            acc += fast.product_rhs_numerator(w, r, m)
        return acc

    return _time_pair(run_pure, run_fast if fast else None, repeat)


def _quad_workload(pairs, panels):
    g_events, a_events = generate_event_battery(1, pairs, pairs)
    kernel = DiracProductKernel(Fraction(1, 3))
    work = []
    for g, a in zip(g_events, a_events):
        dbreaks = [0.0, 1.0]
        d0 = [float(kernel.m0)]
        d1 = [float(kernel.m1)]
        g_lo = [float(iv.lo) for iv in g.base]
        g_hi = [float(iv.hi) for iv in g.base]
        a0_lo = [float(iv.lo) for iv in a.fiber0]
        a0_hi = [float(iv.hi) for iv in a.fiber0]
        a1_lo = [float(iv.lo) for iv in a.fiber1]
        a1_hi = [float(iv.hi) for iv in a.fiber1]
        seg, cnt = build_panel_grid(g_lo + g_hi + a0_lo + a0_hi + a1_lo + a1_hi, panels)
        work.append(
            tuple(
                np.asarray(v, dtype=np.float64) if not isinstance(v, float) else v
                for v in (
                    seg, cnt, dbreaks, d0, d1, g_lo, g_hi,
                    a0_lo, a0_hi, a1_lo, a1_hi, float(kernel.m0), float(kernel.m1),
                )
            )
        )
    return work


def bench_quadrature(work, repeat):
    def run_pure():
        acc = 0.0
        for args in work:
            acc += pure.quad_integral(*args[:11], args[11], args[12], 0)
            acc += pure.quad_integral(*args[:11], args[11], args[12], 1)
        return acc

    def run_fast():
        acc = 0.0
        for args in work:
            seg, cnt = args[0], np.asarray(args[1], dtype=np.int64)
            acc += fast.quad_integral(seg, cnt, *args[2:11], args[11], args[12], 0)
            acc += fast.quad_integral(seg, cnt, *args[2:11], args[11], args[12], 1)
        return acc

    return _time_pair(run_pure, run_fast if fast else None, repeat, close=1e-9)


def _time_pair(run_pure, run_fast, repeat, close=None):
    best_pure = min(_once(run_pure) for _ in range(repeat))
    if run_fast is None:
        return best_pure, None, None
    best_fast = min(_once(run_fast) for _ in range(repeat))
    check_p, check_f = run_pure(), run_fast()
    if close is None:
        assert check_p == check_f, "backend results diverge"
    else:
        assert abs(check_p - check_f) < close * max(1.0, abs(check_p))
    return best_pure, best_fast, best_pure / best_fast


def _once(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--panels", type=int, default=10_000)
    parser.add_argument("--quad-pairs", type=int, default=60)
    args = parser.parse_args()

    if fast is None:
        print("compiled backend not available; timing the pure fallback only\n")

    rows = [
        ("identity scan (n<=12)", bench_identity(_identity_workload([12], 40), args.repeat)),
        ("identity scan (n<=48)", bench_identity(_identity_workload([48], 15), args.repeat)),
        ("product double sum (n<=48)", bench_double_sum(_mask_workload([48], 20), args.repeat)),
        (
            f"quadrature {args.quad_pairs} pairs x {args.panels} panels",
            bench_quadrature(_quad_workload(args.quad_pairs, args.panels), args.repeat),
        ),
    ]

    width = max(len(name) for name, _ in rows)
    print(f"{'workload'.ljust(width)}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, (t_pure, t_fast, ratio) in rows:
        if t_fast is None:
            print(f"{name.ljust(width)}  {t_pure * 1e3:9.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(
                f"{name.ljust(width)}  {t_pure * 1e3:9.2f}ms  {t_fast * 1e3:9.2f}ms  {ratio:7.1f}x"
            )


if __name__ == "__main__":
    main()
