"""APFD and time for every iteration cap on layered instances with seeded faults.

Prints per-instance APFD range over all caps and over the late window
[10, natural k], plus the gap between aga(10) and the uncapped order.
"""

from __future__ import annotations

import argparse

from tcp_aga.bench import GenSpec, apfd_range, generate, iteration_sweep, synthetic_faults


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=20)
    parser.add_argument("--tests", type=int, default=300)
    parser.add_argument("--elements", type=int, default=600)
    parser.add_argument("--density", type=float, default=0.06)
    parser.add_argument("--target-k", type=int, default=18)
    parser.add_argument("--faults", type=int, default=20)
    args = parser.parse_args()

    print("seed,natural_k,apfd_full,apfd_cap10,gap,range_all,range_late,time_cap1_s,time_full_s")
    for seed in range(args.instances):
        cov = generate(GenSpec(args.tests, args.elements, args.density, "layered", args.target_k, seed))
        rows = iteration_sweep(cov, synthetic_faults(cov, args.faults, seed))
        full = rows[-1]
        cap10 = rows[min(10, len(rows)) - 1]
        late = [r for r in rows if r.iteration >= 10]
        print(f"{seed},{full.iteration},{full.apfd:.6f},{cap10.apfd:.6f},{abs(full.apfd - cap10.apfd):.6f},"
              f"{apfd_range(rows):.6f},{apfd_range(late):.6f},{rows[0].time_s:.6f},{full.time_s:.6f}")


if __name__ == "__main__":
    main()
