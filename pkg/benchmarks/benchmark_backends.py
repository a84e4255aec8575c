"""Benchmark: compiled kernel vs pure-Python driver.

Runs each kernel-covered policy on the 50-arm Bernoulli instance for a
fixed horizon on both backends, verifies the traces agree, and prints a
throughput table.

    python3 benchmarks/benchmark_backends.py [--T 100000] [--runs 3]
"""

import argparse
import time

import numpy as np

from dpncb.backends import KERNEL_POLICIES, available_backends, simulate_run
from dpncb.envs import make_figure_instance
from dpncb.policies import PolicyParams
from dpncb.rng import derive_stream


def bench(policy: str, T: int, runs: int, backend: str, instance, params) -> float:
    best = float("inf")
    for r in range(runs):
        stream = derive_stream(1234, r)
        t0 = time.perf_counter()
        simulate_run(policy, params, instance, T, stream, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--T", type=int, default=100_000)
    parser.add_argument("--runs", type=int, default=3)
    args = parser.parse_args()

    if "compiled" not in available_backends():
        raise SystemExit("compiled backend not built; run: python3 setup.py build_ext --inplace")

    instance = make_figure_instance("bern50", seed=1)
    params = PolicyParams(k=50, T=args.T, epsilon=0.2)

    print(f"T = {args.T}, best of {args.runs} runs")
    print(f"{'policy':<10} {'python':>10} {'compiled':>10} {'speedup':>8}  identical")
    for policy in KERNEL_POLICIES:
        if policy == "ncb":
            continue  # same code path as gdp_ncb
        r_py = simulate_run(policy, params, instance, args.T, derive_stream(1234, 0), backend="python")
        r_ck = simulate_run(policy, params, instance, args.T, derive_stream(1234, 0), backend="compiled")
        same = np.array_equal(r_py.arms, r_ck.arms) and np.array_equal(r_py.rewards, r_ck.rewards)
        t_py = bench(policy, args.T, args.runs, "python", instance, params)
        t_ck = bench(policy, args.T, args.runs, "compiled", instance, params)
        print(f"{policy:<10} {t_py:>9.3f}s {t_ck:>9.3f}s {t_py / t_ck:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
