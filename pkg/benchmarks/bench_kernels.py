#!/usr/bin/env python3
"""Compare the compiled and pure-Python simulation kernels.

Both backends expose the same flat-array entry points and produce
bit-identical trajectories from the same seed, so each workload does the
same number of micro-steps on either side; only wall time differs.

Usage:
    python benchmarks/bench_kernels.py [--repeats N] [--samples N] [--seed N]
"""

import argparse
import time

from signedpd import _pycore
from signedpd.dynamics import Mode, ModelParams, _kernel_args
from signedpd.network import GraphSpec, build_network
from signedpd.rng import SplitMix64

try:
    from signedpd import _fastcore
except ImportError:
    _fastcore = None

TRAJECTORY_CAP = 1_000_000


def time_run_sim(kernel, network, params, seed, repeats):
    base = _kernel_args(network, params)
    types, signs = base[0], base[1]
    best, steps = float("inf"), 0
    for _ in range(repeats):
        args = (types.copy(), signs.copy()) + base[2:]
        t0 = time.perf_counter()
        steps, absorbed, _, _ = kernel.run_sim(
            *args, TRAJECTORY_CAP, 1000, 10_000, SplitMix64(seed).state)
        best = min(best, time.perf_counter() - t0)
        if not absorbed:
            steps = TRAJECTORY_CAP
    return best, steps


def time_sampler(kernel, n_samples, seed, repeats):
    # mixed triad: (UD, CO, UC) with signs (+, -, +), default payoffs
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel.sample_triad_steps(0, 1, 2, 1, 0, 1,
                                  5.0, 3.0, 1.0, 0.0, 0.5, 0.5, 1.0,
                                  n_samples, seed)
        best = min(best, time.perf_counter() - t0)
    return best


def report(name, py_time, c_time, unit_count, unit):
    py_rate = unit_count / py_time
    line = f"{name:34} python {py_time * 1e3:9.2f} ms ({py_rate:12,.0f} {unit}/s)"
    if c_time is not None:
        speedup = py_time / c_time
        c_rate = unit_count / c_time
        line += (f"   c {c_time * 1e3:8.2f} ms ({c_rate:12,.0f} {unit}/s)"
                 f"   speedup {speedup:6.1f}x")
    print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5,
                    help="timed repetitions per workload; best is reported")
    ap.add_argument("--samples", type=int, default=200_000,
                    help="draws for the single-state sampler workload")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    if _fastcore is None:
        print("compiled kernel not available; timing pure Python only")

    workloads = [
        ("trajectory erdos_renyi(30,0.3) dyadic",
         GraphSpec.parse("erdos_renyi(30, 0.3)"), ModelParams()),
        ("trajectory complete(15) triadic",
         GraphSpec.parse("complete(15)"), ModelParams(mode=Mode.TRIADIC)),
        ("trajectory ring_lattice(60,3) triadic",
         GraphSpec.parse("ring_lattice(60, 3)"), ModelParams(mode=Mode.TRIADIC)),
    ]
    for name, spec, params in workloads:
        network = build_network(spec, seed=args.seed)
        py_t, steps = time_run_sim(_pycore, network, params, args.seed,
                                   args.repeats)
        c_t = None
        if _fastcore is not None:
            c_t, c_steps = time_run_sim(_fastcore, network, params, args.seed,
                                        args.repeats)
            assert c_steps == steps, "backends disagree on trajectory length"
        report(f"{name} [{steps} steps]", py_t, c_t, steps, "step")

    py_t = time_sampler(_pycore, args.samples, args.seed, args.repeats)
    c_t = (time_sampler(_fastcore, args.samples, args.seed, args.repeats)
           if _fastcore is not None else None)
    report(f"triad sampler [{args.samples} draws]", py_t, c_t,
           args.samples, "draw")


if __name__ == "__main__":
    main()
