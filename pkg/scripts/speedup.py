"""Time GA, AGA_C and capped AGA on layered synthetic suites of growing size.

    python scripts/speedup.py --sizes 500,1000,2000 --elements 20000 --reps 5
"""

from __future__ import annotations

import argparse

from tcp_aga.bench import GenSpec, generate, median_seconds, run_bench
from tcp_aga.metrics import speedup


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="500,1000,2000")
    parser.add_argument("--elements", type=int, default=20000)
    parser.add_argument("--density", type=float, default=0.02)
    parser.add_argument("--target-k", type=int, default=40)
    parser.add_argument("--k", type=int, default=10, help="iteration cap for aga")
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args()

    print(f"{'m':>6} {'k':>4} {'ga s':>9} {'aga-c s':>9} {'aga s':>9} {'ga/aga-c':>9} {'ga/aga':>8}")
    for m in map(int, args.sizes.split(",")):
        cov = generate(GenSpec(m, args.elements, args.density, "layered", args.target_k, args.seed))
        reports = run_bench(cov, ["ga", "aga-c", "aga"], args.reps, args.k)
        t = {name: median_seconds(reports, name) for name in ("ga", "aga-c", "aga")}
        k = next(r.iteration_count for r in reports if r.algorithm == "aga-c")
        print(f"{m:>6} {k:>4} {t['ga']:>9.4f} {t['aga-c']:>9.4f} {t['aga']:>9.4f} "
              f"{speedup(t['ga'], t['aga-c']):>9.1f} {speedup(t['ga'], t['aga']):>8.1f}")


if __name__ == "__main__":
    main()
