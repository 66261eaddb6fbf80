"""Polyhedral convex functions: values, conjugates, eps-subdifferentials.

A :class:`PolyhedralConvexFunction` is ``max_i <a_i, y> + b_i`` on an explicit
polyhedral domain and ``+inf`` elsewhere. Everything is exact. The conjugate
is read off the generators of the epigraph: a vertex ``(v, f(v))`` gives the
affine piece ``s -> <v, s> - f(v)`` and a ray ``(w, rho)`` the domain
constraint ``<w, s> <= rho``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, ImproperFunction, PointNotInSet
from .geometry import Polyhedron, halfspace, support
from .lp import OPTIMAL, UNBOUNDED, solve_lp
from .rational import INF, Extended, Vec, add, dot, q, smul, sub, vec, zeros

AffinePiece = tuple  # (a: Vec, b: Fraction)


class PolyhedralConvexFunction:
    __slots__ = ("dim", "pieces", "domain", "_conj", "_epi", "_lock")

    def __init__(self, pieces: Sequence, domain: Optional[Polyhedron] = None, dim: Optional[int] = None):
        pieces = [(vec(a), q(b)) for a, b in pieces]
        if not pieces:
            raise ImproperFunction("a polyhedral function needs at least one affine piece")
        if dim is None:
            dim = len(pieces[0][0])
        if domain is None:
            domain = Polyhedron.whole(dim)
        if domain.dim != dim or any(len(a) != dim for a, _ in pieces):
            raise DimensionMismatch("pieces and domain disagree on the dimension")
        if domain.is_empty:
            raise ImproperFunction("empty effective domain")
        self.dim = dim
        self.pieces = tuple(sorted(set(pieces)))
        self.domain = domain
        self._conj = None
        self._epi = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        ps = ", ".join(f"<{[str(c) for c in a]},y>+{b}" for a, b in self.pieces)
        return f"PolyhedralConvexFunction(max({ps}), dim={self.dim})"

    def __call__(self, y):
        return value(self, y)

    def epigraph(self) -> Polyhedron:
        if self._epi is None:
            hs = [(tuple(a) + (-1,), -b) for a, b in self.pieces]
            hs += [(tuple(a) + (0,), b) for a, b in self.domain.h_rep]
            self._epi = Polyhedron.from_halfspaces(hs, self.dim + 1)
        return self._epi

    def conjugate(self) -> "PolyhedralConvexFunction":
        return conjugate_function(self)


# constructors ---------------------------------------------------------------

def affine(a: Sequence, b=0, domain: Optional[Polyhedron] = None) -> PolyhedralConvexFunction:
    return PolyhedralConvexFunction([(a, b)], domain)


def indicator(P: Polyhedron) -> PolyhedralConvexFunction:
    return PolyhedralConvexFunction([(zeros(P.dim), 0)], P)


def abs_shift(c=0) -> PolyhedralConvexFunction:
    """``y -> |y - c|`` on the real line."""
    c = q(c)
    return PolyhedralConvexFunction([((1,), -c), ((-1,), c)])


def from_epigraph(epi: Polyhedron) -> PolyhedralConvexFunction:
    """Read pieces and domain back from an epigraph in dimension ``d + 1``."""
    d = epi.dim - 1
    pieces, dom = [], []
    for a, b in epi.h_rep:
        g = a[-1]
        if g < 0:
            pieces.append((tuple(Fraction(x, -g) for x in a[:-1]), Fraction(-b, -g)))
        elif g == 0:
            dom.append((a[:-1], b))
        else:
            raise ImproperFunction("halfspace bounds the epigraph from above")
    if not pieces:
        # only domain constraints: the epigraph carries no lower bound
        raise ImproperFunction("epigraph is not bounded below by any piece")
    return PolyhedralConvexFunction(pieces, Polyhedron.from_halfspaces(dom, d), dim=d)


def canonical(f: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """Same function with irredundant pieces and domain constraints."""
    return from_epigraph(f.epigraph().minimal())


def scaled(f: PolyhedralConvexFunction, c) -> PolyhedralConvexFunction:
    c = q(c)
    if c <= 0:
        raise ValueError("weights must be positive")
    return PolyhedralConvexFunction([(smul(c, a), c * b) for a, b in f.pieces], f.domain, dim=f.dim)


def function_sum(f: PolyhedralConvexFunction, g: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """``f + g`` with pieces pruned through the epigraph double description."""
    from .errors import ImproperSum
    from .geometry import intersect

    dom = intersect(f.domain, g.domain)
    if dom.is_empty:
        raise ImproperSum("domains do not intersect")
    pieces = [(add(a1, a2), b1 + b2) for a1, b1 in f.pieces for a2, b2 in g.pieces]
    return canonical(PolyhedralConvexFunction(pieces, dom, dim=f.dim))


# values ---------------------------------------------------------------------

def value(f: PolyhedralConvexFunction, y: Sequence) -> Extended:
    if len(y) != f.dim:
        raise DimensionMismatch(f"point of length {len(y)} for dimension {f.dim}")
    y = vec(y)
    if not f.domain.contains(y):
        return INF
    return max(dot(a, y) + b for a, b in f.pieces)


def conjugate_value(f: PolyhedralConvexFunction, xstar: Sequence) -> Extended:
    """``sup_y <xstar, y> - f(y)`` by one exact LP over ``(y, r)``."""
    if len(xstar) != f.dim:
        raise DimensionMismatch("dual point has the wrong dimension")
    s = vec(xstar)
    d = f.dim
    cost = [-c for c in s] + [Fraction(1)]
    A, b = [], []
    for a, c in f.pieces:
        A.append(list(a) + [-1])
        b.append(-c)
    for a, c in f.domain.h_rep:
        A.append(list(a) + [0])
        b.append(c)
    res = solve_lp(cost, A, b, n=d + 1)
    if res.status == UNBOUNDED:
        return INF
    if res.status != OPTIMAL:
        raise ImproperFunction("empty effective domain")
    return -res.value


def conjugate_function(f: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """Explicit polyhedral representation of ``f*`` (memoized)."""
    if f._conj is None:
        with f._lock:
            if f._conj is None:
                f._conj = _build_conjugate(f)
    return f._conj


def _build_conjugate(f: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    d = f.dim
    verts, rays = f.epigraph().v_rep
    pieces = []
    for v in verts:
        y = v[:-1]
        pieces.append((y, -value(f, y)))
    hs = [(r[:-1], r[-1]) for r in rays]
    dom = Polyhedron.from_halfspaces(hs, d)
    conj = PolyhedralConvexFunction(pieces, dom, dim=d)
    # f is proper, so f* is proper and cannot be empty-domained
    return conj


# eps-subdifferentials -------------------------------------------------------

@dataclass(frozen=True)
class EpsSubdiffSet:
    set: Polyhedron
    base_point: Vec
    eps: Fraction
    source: PolyhedralConvexFunction

    def __contains__(self, xstar) -> bool:
        return self.set.contains(xstar)


def fenchel_gap(f: PolyhedralConvexFunction, x: Sequence, xstar: Sequence) -> Extended:
    """``f(x) + f*(x*) - <x*, x>`` using the explicit conjugate."""
    fx = value(f, x)
    cs = value(conjugate_function(f), xstar)
    if fx == INF or cs == INF:
        return INF
    return fx + cs - dot(vec(xstar), vec(x))


def eps_subdifferential(f: PolyhedralConvexFunction, x: Sequence, eps) -> EpsSubdiffSet:
    """``{x* : f*(x*) + f(x) - <x*, x> <= eps}``; empty where ``f(x) = +inf``."""
    eps = q(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = vec(x)
    fx = value(f, x)
    if fx == INF:
        return EpsSubdiffSet(Polyhedron.empty(f.dim), x, eps, f)
    g = conjugate_function(f)
    hs = [halfspace(sub(v, x), eps - c - fx) for v, c in g.pieces]
    hs += list(g.domain.h_rep)
    return EpsSubdiffSet(Polyhedron.from_halfspaces(hs, f.dim), x, eps, f)


def eps_normal(dom: Polyhedron, x: Sequence, eps) -> Polyhedron:
    """``{x* : <x*, y - x> <= eps for all y in dom}`` from the generators of ``dom``."""
    x = vec(x)
    eps = q(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if not dom.contains(x):
        raise PointNotInSet("base point is outside the set")
    hs = [halfspace(sub(v, x), eps) for v in dom.vertices]
    hs += [(tuple(r), 0) for r in dom.rays]
    return Polyhedron.from_halfspaces(hs, dom.dim)


def support_via_quotient(f: PolyhedralConvexFunction, x: Sequence, ell, u: Sequence) -> Extended:
    """``inf_{lam > 0} (f(x + lam u) - f(x) + ell) / lam``, computed exactly.

    With ``mu = 1/lam`` the quotient is ``max_i (alpha_i + c_i mu)``, a convex
    piecewise-linear function of ``mu`` on ``[1/lam_max, inf)``; its infimum is
    at an endpoint (possibly a limit) or at a pairwise crossing.
    """
    x, u, ell = vec(x), vec(u), q(ell)
    fx = value(f, x)
    if fx == INF:
        raise PointNotInSet("f is not finite at the base point")
    lam_max = INF
    for a, b in f.domain.h_rep:
        au = dot(a, u)
        if au > 0:
            lam_max = min(lam_max, (b - dot(a, x)) / au)
    if lam_max == 0:
        return INF
    alphas = [dot(a, u) for a, _ in f.pieces]
    cs = [dot(a, x) + b - fx + ell for a, b in f.pieces]

    def quotient(mu):
        return max(al + c * mu for al, c in zip(alphas, cs))

    mu_lo = Fraction(0) if lam_max == INF else 1 / Fraction(lam_max)
    candidates = [mu_lo]
    n = len(alphas)
    for i in range(n):
        for j in range(i + 1, n):
            if cs[i] != cs[j]:
                mu = (alphas[j] - alphas[i]) / (cs[i] - cs[j])
                if mu > mu_lo:
                    candidates.append(mu)
    best: Extended = min(quotient(mu) for mu in candidates)
    if max(cs) == 0:
        # ell = 0: the lam -> 0+ limit keeps only the pieces active at x
        best = min(best, max(al for al, c in zip(alphas, cs) if c == 0))
    return best


def directional_derivative(f: PolyhedralConvexFunction, x: Sequence, u: Sequence) -> Extended:
    return support_via_quotient(f, x, 0, u)


def is_differentiable_at(f: PolyhedralConvexFunction, x: Sequence) -> tuple[bool, Optional[Vec]]:
    """``(True, gradient)`` iff the exact subdifferential is a singleton."""
    sd = eps_subdifferential(f, x, 0).set
    if sd.is_singleton():
        return True, sd.vertices[0]
    return False, None
