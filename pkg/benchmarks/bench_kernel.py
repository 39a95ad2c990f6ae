#!/usr/bin/env python3
"""Benchmark the simulation kernel: compiled extension vs pure-Python fallback.

Runs the same summary workload through both backends and reports steps/s.
The two must agree bit-for-bit, so the benchmark doubles as a parity check.

Usage: python benchmarks/bench_kernel.py [--horizon N] [--repeats R]
"""

import argparse
import time

from statecloak._kernel import available_backends, get_backend
from statecloak.model import SystemParams, riccati_fixed_point, sensor_gain
from statecloak.estimators import noise_use_variance
from statecloak.rng import (
    TAG_CHANNEL_EAVES,
    TAG_CHANNEL_USER,
    TAG_INDICATOR,
    TAG_INIT_STATE,
    TAG_MEASUREMENT,
    TAG_NOISE_PACKET,
    TAG_PROCESS,
    stream_key,
)


def _workload(horizon):
    params = SystemParams(a=0.6, q=0.01, r=0.01)
    scalars = (
        params.a,
        params.q,
        params.r,
        params.sigma0,
        sensor_gain(params),
        riccati_fixed_point(params),
        noise_use_variance(params),
        0.504,  # mu
        0.3,    # gamma_user
        0.3,    # gamma_eaves
    )
    seed = 1234
    keys = (
        stream_key(seed, TAG_INIT_STATE),
        stream_key(seed, TAG_PROCESS),
        stream_key(seed, TAG_MEASUREMENT),
        stream_key(seed, TAG_CHANNEL_USER),
        stream_key(seed, TAG_CHANNEL_EAVES),
        stream_key(seed, TAG_NOISE_PACKET),
        stream_key(seed, TAG_INDICATOR),
    )
    return scalars + keys + (horizon, 0)


def bench(name, horizon, repeats):
    mod = get_backend(name)
    args = _workload(horizon)
    mod.simulate_summary(*args)  # warm up
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = mod.simulate_summary(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=1_000_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    names = available_backends()
    print(f"backends: {', '.join(names)}")
    print(f"horizon:  {args.horizon} steps, best of {args.repeats}")
    print()

    results = {}
    for name in names:
        elapsed, summary = bench(name, args.horizon, args.repeats)
        results[name] = (elapsed, summary)
        print(f"{name:>9}: {elapsed:8.3f} s   {args.horizon / elapsed / 1e6:7.2f} M steps/s")

    if len(results) == 2:
        (fast, (t_fast, s_fast)), (slow, (t_slow, s_slow)) = sorted(
            results.items(), key=lambda kv: kv[1][0]
        )
        print()
        print(f"speedup:  {t_slow / t_fast:.1f}x ({fast} over {slow})")
        match = "bit-identical" if s_fast == s_slow else "MISMATCH"
        print(f"parity:   {match}")
        if s_fast != s_slow:
            raise SystemExit(f"backend outputs differ: {s_fast} vs {s_slow}")


if __name__ == "__main__":
    main()
