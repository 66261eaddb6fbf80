"""Sweep the exact checkers over a seeded corpus and print per-checker totals.

    python3 scripts/run_acceptance_sweep.py --instances 50 --samples 20
"""
import argparse
import random
import time
from collections import Counter
from fractions import Fraction

from epsint.calculus import check_conjugate_formula, check_epigraph_formula, check_sum_rule, normal_set_four_ways
from epsint.generate import EPS_GRID, PROFILES, random_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=40)
    ap.add_argument("--samples", type=int, default=20, help="sampled certificates per sum-rule check")
    ap.add_argument("--seed", default="sweep")
    ap.add_argument("--profile", choices=PROFILES, help="restrict to one generator profile")
    args = ap.parse_args()

    totals, times, failures = Counter(), Counter(), []
    for i in range(args.instances):
        profile = args.profile or PROFILES[i % len(PROFILES)]
        rng = random.Random(f"{args.seed}:{i}")
        inst, p = random_instance(rng, profile)
        pts = [tuple(Fraction(rng.randint(-16, 16), 4) for _ in range(inst.dim)) for _ in range(10)]
        jobs = [("sum_rule", lambda e: check_sum_rule(inst, p, e, samples=args.samples, seed=i), EPS_GRID),
                ("normal_sets", lambda e: normal_set_four_ways(inst, p, e), EPS_GRID[:3]),
                ("conjugate", lambda _: check_conjugate_formula(inst, pts), [None]),
                ("epigraph", lambda _: check_epigraph_formula(inst), [None])]
        for name, fn, grid in jobs:
            for e in grid:
                t0 = time.perf_counter()
                rep = fn(Fraction(e) if e is not None else None)
                times[name] += time.perf_counter() - t0
                totals[name] += 1
                if not rep.passed:
                    failures.append((name, profile, i, e, rep.counterexample))

    for name in totals:
        print(f"{name:12s} {totals[name]:5d} checks  {times[name]:7.2f}s")
    print(f"failures: {len(failures)}")
    for f in failures[:10]:
        print("  ", f)


if __name__ == "__main__":
    main()
