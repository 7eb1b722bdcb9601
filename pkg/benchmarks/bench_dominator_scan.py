"""Time the brute-force dominator scan: numba kernel against the numpy fallback.

The scan is run on an SD-efficient lottery, so no candidate dominates and
both kernels walk the whole grid.

    python benchmarks/bench_dominator_scan.py --max-denominator 16 --repeat 5
"""

import argparse
import time

import numpy as np

from rsdkit import _kernels
from rsdkit.lotteries import cumulative_class_masses, parse_lottery
from rsdkit.theorem import load_fixture


def build(max_denominator):
    profile = load_fixture("example")
    p = parse_lottery("1/2*a + 1/2*b", profile.universe)
    grid, scale = _kernels.lottery_grid(len(profile.universe), max_denominator)
    common = int(np.lcm(scale, 2))
    cands = grid * (common // scale)
    rank = np.array([[rel.rank(x) for x in profile.universe] for rel in profile.relations], dtype=np.int64)
    ncls = np.array([len(rel.classes) for rel in profile.relations], dtype=np.int64)
    target = np.zeros((len(profile), int(ncls.max())), dtype=np.int64)
    for i, rel in enumerate(profile.relations):
        for k, v in enumerate(cumulative_class_masses(rel, p)):
            target[i, k] = int(v * common)
    return cands, rank, ncls, target


def best_of(fn, args, repeat):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-denominator", type=int, default=14)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    problem = build(args.max_denominator)
    print(f"candidates: {problem[0].shape[0]}, agents: {problem[1].shape[0]}")
    t_numpy, r_numpy = best_of(_kernels.dominator_scan_numpy, problem, args.repeat)
    print(f"numpy : {t_numpy * 1e3:9.2f} ms  (result {r_numpy})")
    if _kernels.dominator_scan_numba is None:
        print("numba : disabled (RSDKIT_DISABLE_NUMBA set or numba missing)")
        return
    _kernels.dominator_scan_numba(*problem)  # compile outside the timed runs
    t_numba, r_numba = best_of(_kernels.dominator_scan_numba, problem, args.repeat)
    print(f"numba : {t_numba * 1e3:9.2f} ms  (result {r_numba})")
    print(f"speedup: {t_numpy / t_numba:.1f}x, results agree: {r_numpy == r_numba}")


if __name__ == "__main__":
    main()
