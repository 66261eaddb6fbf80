"""Seeded random instances for property suites and the regression corpus.

Every instance has d <= 4, at most 6 atoms and at most 5 pieces per atom, with
coefficients in [-4, 4] and denominators up to 8. All domains contain a common
anchor point, so the integral is proper by construction.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .functions import PolyhedralConvexFunction, eps_subdifferential
from .geometry import Polyhedron, interior_contains
from .integral import IntegralInstance, instance
from .rational import format_rational
from .serialize import instance_to_json

PROFILES = ("box-domains", "indicator-heavy", "affine-only", "kinked", "restricted-subspace")
EPS_GRID = ("0", "1/4", "1", "3")


def _coef(rng: random.Random, lo: int = -4, hi: int = 4) -> Fraction:
    den = rng.choice((1, 1, 2, 2, 4, 8))
    return Fraction(rng.randint(lo * den, hi * den), den)


def _small(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-2, 2), rng.choice((1, 2)))


def _pieces(rng: random.Random, d: int, k: int) -> list:
    return [(tuple(_coef(rng) for _ in range(d)), _coef(rng)) for _ in range(k)]


def _box_around(rng: random.Random, p: tuple) -> Polyhedron:
    lo = [c - Fraction(rng.randint(0, 4), 2) for c in p]
    hi = [c + Fraction(rng.randint(0, 4), 2) for c in p]
    return Polyhedron.box(lo, hi)


def _simplex_around(rng: random.Random, p: tuple) -> Polyhedron:
    """``{y : y_i >= p_i - a_i, sum (y_i - p_i) <= s}`` with a, s >= 0."""
    d = len(p)
    A, b = [], []
    for i in range(d):
        row = [0] * d
        row[i] = -1
        A.append(row)
        b.append(-(p[i] - Fraction(rng.randint(0, 2))))
    A.append([1] * d)
    b.append(sum(p) + Fraction(rng.randint(0, 4), 2))
    return Polyhedron.from_h(A, b, dim=d)


def _atom(rng: random.Random, profile: str, d: int, p: tuple) -> PolyhedralConvexFunction:
    if profile == "affine-only":
        return PolyhedralConvexFunction(_pieces(rng, d, 1), dim=d)
    if profile == "kinked":
        return PolyhedralConvexFunction(_pieces(rng, d, rng.randint(2, 5)), dim=d)
    if profile == "indicator-heavy" and rng.random() < 0.7:
        dom = _box_around(rng, p) if rng.random() < 0.5 else _simplex_around(rng, p)
        return PolyhedralConvexFunction([((0,) * d, 0)], dom, dim=d)
    dom = _box_around(rng, p) if rng.random() < 0.7 else None
    return PolyhedralConvexFunction(_pieces(rng, d, rng.randint(1, 3)), dom, dim=d)


def random_instance(rng: random.Random, profile: str = "box-domains", d: Optional[int] = None,
                    atoms: Optional[int] = None) -> tuple[IntegralInstance, tuple]:
    """``(instance, anchor)``; the anchor lies in every domain."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    if d is None:
        d = rng.choice((1, 1, 2, 2, 2, 3, 3, 4))
    if atoms is None:
        atoms = rng.choice((1, 2, 2, 3, 3, 4, 5, 6)) if d <= 2 else rng.choice((1, 2, 2, 3))
    p = tuple(_small(rng) for _ in range(d))
    funcs = [_atom(rng, profile, d, p) for _ in range(atoms)]
    weights = [Fraction(rng.randint(1, 4), rng.choice((1, 2, 4))) for _ in range(atoms)]
    return instance(weights, funcs), p


def random_subspace_basis(rng: random.Random, d: int) -> list:
    k = rng.randint(0, d)
    return [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(k)]


def generate(seed: int, profile: str = "box-domains") -> dict:
    """Deterministic instance document (with queries) for ``seed`` and ``profile``."""
    rng = random.Random(f"{profile}:{seed}")
    inst, p = random_instance(rng, profile)
    d = inst.dim
    fmt = lambda v: [format_rational(c) for c in v]  # noqa: E731
    xs = [p] + [v for v in inst.dom_If.vertices[:1] if v != p]
    queries = []
    for x in xs:
        queries.append({"kind": "sum_rule", "x": fmt(x), "eps": list(EPS_GRID)})
        queries.append({"kind": "normal_sets", "x": fmt(x), "eps": ["0", "1/4", "1"]})
    pts = [tuple(_coef(rng) for _ in range(d)) for _ in range(5)]
    queries.append({"kind": "conjugate", "points": [fmt(s) for s in pts]})
    queries.append({"kind": "epigraph"})
    if profile == "restricted-subspace":
        basis = random_subspace_basis(rng, d)
        # the anchor has to lie in L, so restrict at the origin when it is feasible
        if inst.dom_If.contains((0,) * d):
            queries.append({"kind": "restricted", "x": ["0"] * d, "L": [fmt(v) for v in basis], "eps": ["0", "1/4"]})
        else:
            queries.append({"kind": "restricted", "x": fmt(p), "L": [fmt(e) for e in _identity(d)], "eps": ["0", "1/4"]})
    sub = eps_subdifferential(inst.I_f, p, 0).set
    queries.append({"kind": "br_run", "x": fmt(p), "xstar": fmt(sub.vertices[0])})
    inner = _interior_point(inst, p)
    if inner is not None:
        queries.append({"kind": "gateaux", "x": fmt(inner)})
    return instance_to_json(inst, queries)


def _interior_point(inst: IntegralInstance, p: tuple) -> Optional[tuple]:
    dom = inst.dom_If
    if interior_contains(dom, p):
        return p
    vs = dom.vertices
    c = tuple(sum(v[i] for v in vs) / len(vs) for i in range(inst.dim))
    for r in dom.rays:
        c = tuple(a + b for a, b in zip(c, r))
    return c if interior_contains(dom, c) else None


def _identity(d: int) -> list:
    return [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
