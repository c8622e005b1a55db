#!/usr/bin/env python3
"""Benchmark the numba kernel backend against the pure-NumPy fallback.

Each workload runs in a subprocess with GATSP_BACKEND pinned, so both
backends execute the same code over the same PCG64 streams; the script
checks that the result fingerprints agree before reporting timings.

Usage: python3 benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json
import time

import numpy as np

import gatsp
from gatsp import kernels
from gatsp.engine import GaConfig, initial_population, run_ga

results = {"backend": gatsp.BACKEND, "timings": {}, "fingerprints": {}}


def timed(name, fn, repeat=3):
    fn()  # warmup: trigger compilation on the numba path
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    results["timings"][name] = best
    results["fingerprints"][name] = out


def ga_workload(n, gens, seed):
    inst = gatsp.generate_instance(n, seed=seed)
    cfg = GaConfig(
        selection="SUS", crossover="PMX", crossover_prob=0.7, mutation_rate=0.05,
        population_size=30, max_generations=gens, population_seed=seed,
        run_seed=seed + 1,
    )

    def run():
        r = run_ga(cfg, inst)
        return [r.offline, r.online, float(r.generations)]

    return run


def operator_workload(n, iters, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.permutation(n).astype(np.int64)
    b = rng.permutation(n).astype(np.int64)
    ca = np.empty(n, dtype=np.int64)
    cb = np.empty(n, dtype=np.int64)

    def run():
        acc = 0
        for k in range(iters):
            c1 = 1 + k % (n - 1)
            c2 = 1 + (k * 7 + 3) % (n - 1)
            if c1 > c2:
                c1, c2 = c2, c1
            kernels.pmx_pair(a, b, c1, c2, ca, cb)
            acc += int(ca[0])
            kernels.cx_pair(a, b, ca, cb)
            acc += int(cb[0])
        return [float(acc)]

    return run


timed("ga run n=100 (100 gens)", ga_workload(100, 100, seed=5))
timed("ga run n=1000 (20 gens)", ga_workload(1000, 20, seed=6))
timed("pmx+cx pairs n=1000 (500x)", operator_workload(1000, 500, seed=7))
print(json.dumps(results))
"""


def run_backend(backend: str) -> dict:
    env = dict(os.environ, GATSP_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER], env=env, capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    print("benchmarking numba backend ...")
    fast = run_backend("numba")
    print("benchmarking numpy fallback (slower) ...")
    slow = run_backend("numpy")

    for name, fp in fast["fingerprints"].items():
        if slow["fingerprints"][name] != fp:
            raise AssertionError(f"backend results diverge for {name!r}")

    width = max(len(n) for n in fast["timings"])
    print(f"\n{'workload'.ljust(width)}  {'numba':>12}  {'numpy':>12}  {'speedup':>8}")
    for name in fast["timings"]:
        t_fast = fast["timings"][name]
        t_slow = slow["timings"][name]
        print(
            f"{name.ljust(width)}  {t_fast * 1e3:>10.2f}ms  {t_slow * 1e3:>10.2f}ms"
            f"  {t_slow / t_fast:>7.1f}x"
        )
    print("\nresult fingerprints match: backends are bit-for-bit equivalent")


if __name__ == "__main__":
    main()
