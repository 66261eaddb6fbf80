"""Print the Brondsted-Rockafellar run along the dyadic schedule.

Defaults to the two-atom |y| + |y - 1| instance at x = 0 with x* = 2^-kmax;
``--seed`` switches to a generated instance instead.
"""
import argparse
import random
from fractions import Fraction

from epsint.approx import br_decompose_run, dyadic_schedule
from epsint.calculus import lhs_eps_subdifferential
from epsint.functions import abs_shift
from epsint.generate import PROFILES, random_instance
from epsint.integral import instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=12)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--profile", choices=PROFILES, default="kinked")
    args = ap.parse_args()

    if args.seed is None:
        inst, x = instance([1, 1], [abs_shift(0), abs_shift(1)]), (Fraction(0),)
        xstar = (Fraction(1, 2 ** args.kmax),)
    else:
        inst, x = random_instance(random.Random(f"{args.profile}:{args.seed}"), args.profile)
        xstar = lhs_eps_subdifferential(inst, x, Fraction(1, 2 ** args.kmax)).vertices[-1]
    print(f"x = {[str(c) for c in x]}, x* = {[str(c) for c in xstar]}, atoms = {len(inst.atoms)}")
    run = br_decompose_run(inst, x, xstar, dyadic_schedule(args.kmax))
    print(f"{'k':>3} {'eps_k':>10} {'lam_k':>12} {'eps1':>10} {'condition (c)':>14} {'displacement':>13} {'|agg gap|_1':>12}")
    for k, s in enumerate(run.steps, start=1):
        print(f"{k:3d} {float(s.eps):10.3e} {float(s.lam):12.6f} {float(s.certificate.eps1):10.3e} "
              f"{float(s.condition_c):14.3e} {float(s.displacement):13.3e} {float(s.aggregate_gap_norm):12.3e}")
    print("nonincreasing:", run.is_nonincreasing("condition_c"), run.is_nonincreasing("displacement"))
    for n in run.notes:
        print("note:", n)


if __name__ == "__main__":
    main()
