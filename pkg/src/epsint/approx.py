"""Constructive Brondsted-Rockafellar steps for integral functionals.

An ``ell``-subgradient ``z`` of ``f`` at ``x0`` is traded for an exact pair
``(y, g)`` with ``g in df(y)``. The pair comes from the exact minimizer of the
regularized problem

    min_y  f(y) - <z, y> + (ell / lam) * ||y - x0||_inf

which exists for polyhedral data. Norms: l_inf for displacements, l_1 for
dual shifts (the dual pair), so both problems stay linear programs.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .calculus import DecompositionCertificate, decompose
from .errors import NotEpsSubgradient, NotInteriorPoint, PointNotInSet
from .functions import (
    PolyhedralConvexFunction,
    conjugate_function,
    eps_subdifferential,
    fenchel_gap,
    value,
)
from .geometry import relative_interior_contains
from .integral import IntegralInstance
from .lp import OPTIMAL, solve_lp
from .rational import INF, Vec, add, dot, format_rational, norm_1, norm_inf, q, smul, sub, vec

NORM_NOTE = "displacement measured in l_inf, dual shift in l_1"


@dataclass(frozen=True)
class ApproxPair:
    atom: str
    x_t: Vec
    xstar_t: Vec
    residual_value: Fraction  # |f(x_t) - <x*_t, x_t - x0> - f(x0)|
    displacement: Fraction  # ||x_t - x0||_inf
    dual_shift: Fraction  # ||x*_t - z*||_1
    ell: Fraction
    radius: Fraction

    def bound_violations(self, f: PolyhedralConvexFunction, x0, zstar) -> list[str]:
        """The four guarantees, rechecked from scratch."""
        bad = []
        if not eps_subdifferential(f, self.x_t, 0).set.contains(self.xstar_t):
            bad.append("x*_t is not an exact subgradient at x_t")
        if norm_inf(sub(self.x_t, vec(x0))) > self.radius:
            bad.append("displacement exceeds the radius")
        if self.ell > 0 and norm_1(sub(self.xstar_t, vec(zstar))) > self.ell / self.radius:
            bad.append("dual shift exceeds ell / radius")
        if self.ell == 0 and self.xstar_t != vec(zstar):
            bad.append("exact input was moved")
        if _residual(f, vec(x0), self.x_t, self.xstar_t) > 2 * self.ell:
            bad.append("residual exceeds 2 ell")
        return bad

    def to_json(self) -> dict:
        f = format_rational
        return {
            "atom": self.atom,
            "x_t": [f(c) for c in self.x_t],
            "xstar_t": [f(c) for c in self.xstar_t],
            "residual": f(self.residual_value),
            "displacement": f(self.displacement),
            "dual_shift": f(self.dual_shift),
            "ell": f(self.ell),
            "radius": f(self.radius),
        }


def _residual(f, x0, y, g) -> Fraction:
    return abs(value(f, y) - dot(g, sub(y, x0)) - value(f, x0))


def _regularized_minimizer(f: PolyhedralConvexFunction, x0: Vec, z: Vec, c: Fraction) -> Vec:
    """Exact minimizer of ``f(y) - <z,y> + c ||y - x0||_inf``, nearest to ``x0`` among ties."""
    d = f.dim
    n = d + 2  # y, r, tau
    A, b = [], []
    for a, beta in f.pieces:
        A.append(list(a) + [Fraction(-1), Fraction(0)])
        b.append(-beta)
    for a, beta in f.domain.h_rep:
        A.append([Fraction(v) for v in a] + [Fraction(0), Fraction(0)])
        b.append(Fraction(beta))
    for i in range(d):
        row = [Fraction(0)] * n
        row[i], row[d + 1] = Fraction(1), Fraction(-1)
        A.append(row)
        b.append(x0[i])
        row = [Fraction(0)] * n
        row[i], row[d + 1] = Fraction(-1), Fraction(-1)
        A.append(row)
        b.append(-x0[i])
    c1 = [-v for v in z] + [Fraction(1), c]
    c2 = [Fraction(0)] * (d + 1) + [Fraction(1)]
    nonneg = [False] * (d + 1) + [True]
    res = solve_lp([c1, c2], A, b, nonneg=nonneg, n=n)
    if res.status != OPTIMAL:
        raise NotEpsSubgradient(f"regularized problem ended with status {res.status}")
    return tuple(res.x[:d])


def _nearest_subgradient(f: PolyhedralConvexFunction, y: Vec, z: Vec) -> Vec:
    """A point of ``df(y)`` at minimal l_1 distance from ``z``."""
    d = f.dim
    S = eps_subdifferential(f, y, 0).set
    n = 2 * d  # g, u
    A, b = [], []
    for a, beta in S.h_rep:
        A.append([Fraction(v) for v in a] + [Fraction(0)] * d)
        b.append(Fraction(beta))
    for i in range(d):
        row = [Fraction(0)] * n
        row[i], row[d + i] = Fraction(1), Fraction(-1)
        A.append(row)
        b.append(z[i])
        row = [Fraction(0)] * n
        row[i], row[d + i] = Fraction(-1), Fraction(-1)
        A.append(row)
        b.append(-z[i])
    cost = [Fraction(0)] * d + [Fraction(1)] * d
    res = solve_lp(cost, A, b, nonneg=[False] * d + [True] * d, n=n)
    if res.status != OPTIMAL:
        raise NotEpsSubgradient("empty subdifferential at the regularized minimizer")
    return tuple(res.x[:d])


def br_step(f: PolyhedralConvexFunction, x0, zstar, ell, lam, atom: str = "") -> ApproxPair:
    x0, z, ell, lam = vec(x0), vec(zstar), q(ell), q(lam)
    if lam <= 0:
        raise ValueError("the radius must be positive")
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    gap = fenchel_gap(f, x0, z)
    if gap == INF or gap > ell:
        raise NotEpsSubgradient("z* is not an ell-subgradient at x0")
    if ell == 0:
        return ApproxPair(atom, x0, z, Fraction(0), Fraction(0), Fraction(0), ell, lam)
    c = ell / lam
    y = _regularized_minimizer(f, x0, z, c)
    g = _nearest_subgradient(f, y, z)
    return ApproxPair(atom, y, g, _residual(f, x0, y, g), norm_inf(sub(y, x0)), norm_1(sub(g, z)), ell, lam)


# runs -----------------------------------------------------------------------

@dataclass
class ApproxStep:
    eps: Fraction
    lam: Fraction
    certificate: DecompositionCertificate
    pairs: list
    aggregate_gap: Vec  # sum mu_t x*_t + lam* - x*
    displacement: Fraction  # max_t ||x_t - x||_inf
    condition_c: Fraction  # sum mu_t residual_t

    @property
    def aggregate_gap_norm(self) -> Fraction:
        return norm_1(self.aggregate_gap)

    def to_json(self) -> dict:
        f = format_rational
        return {
            "eps": f(self.eps),
            "lambda": f(self.lam),
            "certificate": self.certificate.to_json(),
            "pairs": [p.to_json() for p in self.pairs],
            "aggregate_gap": [f(c) for c in self.aggregate_gap],
            "aggregate_gap_norm": f(self.aggregate_gap_norm),
            "displacement": f(self.displacement),
            "condition_c": f(self.condition_c),
        }


@dataclass
class ApproxRun:
    schedule: list
    steps: list = field(default_factory=list)
    notes: tuple = (NORM_NOTE, "normal component carried exactly by the decomposition, reported separately")

    def series(self, name: str) -> list:
        return [getattr(s, name) for s in self.steps]

    def is_nonincreasing(self, name: str) -> bool:
        xs = self.series(name)
        return all(b <= a for a, b in zip(xs, xs[1:]))

    def to_json(self) -> dict:
        return {
            "schedule": [[format_rational(e), format_rational(l)] for e, l in self.schedule],
            "steps": [s.to_json() for s in self.steps],
            "notes": list(self.notes),
        }


def br_decompose_run(inst: IntegralInstance, x, xstar, schedule: Sequence, jobs: int = 1) -> ApproxRun:
    """Decompose ``xstar`` at each ``eps_k`` and push every atom through :func:`br_step`.

    ``xstar`` must be an ``eps_k``-subgradient of ``I_f`` at ``x`` for every
    step; otherwise :class:`NotInSubdifferential` propagates from the
    decomposition.
    """
    x, xstar = vec(x), vec(xstar)
    if not inst.dom_If.contains(x):
        raise PointNotInSet("x is outside dom I_f")
    sched = [(q(e), q(l)) for e, l in schedule]
    run = ApproxRun(sched)
    for eps, lam in sched:
        cert = decompose(inst, x, xstar, eps)
        args = list(zip(inst.functions, cert.selections, cert.alloc.ell, inst.atoms))

        def one(a):
            f, y, ell, atom = a
            return br_step(f, x, y, ell, lam, atom=str(atom))

        if jobs > 1:
            with ThreadPoolExecutor(jobs) as pool:
                pairs = list(pool.map(one, args))
        else:
            pairs = [one(a) for a in args]
        agg = sub(cert.normal, xstar)
        for w, p in zip(inst.weights, pairs):
            agg = add(agg, smul(w, p.xstar_t))
        disp = max(p.displacement for p in pairs)
        cond_c = sum((w * p.residual_value for w, p in zip(inst.weights, pairs)), Fraction(0))
        run.steps.append(ApproxStep(eps, lam, cert, pairs, agg, disp, cond_c))
    return run


def dyadic_schedule(k_max: int, k_min: int = 1) -> list:
    """``eps_k = 2^-k`` and ``lam_k`` the dyadic rational just above ``2^(-k/2)``.

    ``2^(-k/2)`` is irrational for odd ``k``; it is rounded up to a multiple of
    ``2^-(k+4)``, which keeps ``eps_k / lam_k -> 0``.
    """
    out = []
    for k in range(k_min, k_max + 1):
        eps = Fraction(1, 2 ** k)
        if k % 2 == 0:
            lam = Fraction(1, 2 ** (k // 2))
        else:
            den = 2 ** (k + 4)
            lam = Fraction(_ceil_scaled_inv_sqrt2(k, den), den)
        out.append((eps, lam))
    return out


def _ceil_scaled_inv_sqrt2(k: int, den: int) -> int:
    """Smallest integer ``m`` with ``m / den >= 2^(-k/2)``, i.e. ``m^2 * 2^k >= den^2``."""
    from math import isqrt

    m = isqrt(den * den // 2 ** k)
    while m * m * 2 ** k < den * den:
        m += 1
    return m


# interior shift ------------------------------------------------------------

def interior_shift(f: PolyhedralConvexFunction, x, zstar, x0star, lam) -> tuple[Vec, Fraction]:
    """``(z_lam, ell_lam)`` with ``z_lam = (1 - lam) z* + lam x0*``.

    ``ell_lam`` is the nonnegative Fenchel gap of ``z_lam`` at ``x``.
    """
    x, z, z0, lam = vec(x), vec(zstar), vec(x0star), q(lam)
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    if value(f, x) == INF:
        raise PointNotInSet("f is not finite at x")
    dom_conj = conjugate_function(f).domain
    if not dom_conj.contains(z):
        raise NotEpsSubgradient("z* is outside the domain of the conjugate")
    if not relative_interior_contains(dom_conj, z0):
        raise NotInteriorPoint("x0* is not in the relative interior of dom f*")
    zl = add(smul(1 - lam, z), smul(lam, z0))
    return zl, fenchel_gap(f, x, zl)
