"""Classify random rational elements and replay the adjoint matrices exactly."""
import argparse
import collections
import random

from porosym.suites import random_alpha, round_trip


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cases = collections.Counter()
    bad = 0
    for _ in range(args.n):
        c, listed, agree = round_trip(random_alpha(rng))
        cases[c.case] += 1
        bad += not (listed and agree)
    print(f"{args.n - bad}/{args.n} exact round trips")
    for case in sorted(cases):
        print(f"  case {case}: {cases[case]}")


if __name__ == "__main__":
    main()
