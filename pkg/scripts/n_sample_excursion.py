#!/usr/bin/env python3
"""Compare the brute-force chirp span of N uniformly coupled two-atom samples with 2(N-1)."""

import argparse
import time

from compound_sr.basis import CompoundSpec, total_dimension
from compound_sr.spectrum import excursion, excursion_bruteforce


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=5, help="largest N (atom cap allows up to 6)")
    args = ap.parse_args()

    print(f"{'N':>2} {'dim':>5} {'brute force':>14} {'2(N-1)':>7} {'seconds':>8}")
    for n in range(1, args.n_max + 1):
        start = time.perf_counter()
        got = excursion_bruteforce(n)
        dt = time.perf_counter() - start
        dim = total_dimension(CompoundSpec.uniform(n).atoms)
        print(f"{n:2d} {dim:5d} {got:14.10f} {excursion(n, 1.0):7.1f} {dt:8.3f}")


if __name__ == "__main__":
    main()
