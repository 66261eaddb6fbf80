"""Tables for the two floating-point example families.

l2: I_f(x) against ||x||^2 and the divergence surrogate 2 sum 1/n.
l1: Frechet quotients n^(-1/n) and the Gateaux step each direction needs.
"""
import argparse
import math

import numpy as np

from epsint.analytic import (
    divergence_surrogate,
    frechet_quotient,
    gateaux_quotient,
    gateaux_step_needed,
    l2_integrand,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--tol", type=float, default=1e-3, help="Gateaux quotient target")
    ap.add_argument("--step", type=float, default=1e-9, help="fixed Gateaux step to compare against")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    F = l2_integrand(args.dim)
    worst = max(float(np.max(np.abs(F.integral_gradient(x) - 2 * x))) for x in rng.normal(size=(100, args.dim)))
    print(f"l2, d={args.dim}: max |grad I_f(x) - 2x| over 100 points = {worst:.2e}")
    for d in (10, 100, 500, 1000):
        print(f"  surrogate d={d:5d}: {divergence_surrogate(d):9.4f}   2 ln d = {2 * math.log(d):9.4f}")

    print(f"\nl1: Frechet quotient, Gateaux quotient at h={args.step:g}, log10 step needed for {args.tol:g}")
    for n in (1, 2, 3, 4, 10, 100, 1000):
        print(f"  n={n:5d}  {frechet_quotient(n):.6f}  {gateaux_quotient(n, args.step):.3e}  {gateaux_step_needed(n, args.tol):8.1f}")


if __name__ == "__main__":
    main()
