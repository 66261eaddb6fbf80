"""Exact convex polyhedra in dual H/V representation.

A :class:`Polyhedron` is built from either representation and converts to the
other on demand (double description, cached). Halfspaces are stored as
primitive integer rows ``(normal, offset)`` meaning ``normal . y <= offset``;
vertices are Fraction tuples and rays primitive integer tuples. The empty set
is an ordinary value and flows through every operation.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .dd import cone_generators
from .errors import DimensionMismatch, EmptyPolyhedron
from .rational import INF, Extended, Vec, dot, is_zero, primitive, q, vec, zeros

HalfSpace = tuple  # (tuple[int, ...], int)


def halfspace(normal: Sequence, offset) -> HalfSpace:
    """Canonical halfspace: coprime integers, scaled by a positive factor."""
    row = primitive(list(normal) + [offset])
    return row[:-1], row[-1]


def _ray(values: Sequence) -> tuple:
    return primitive(values)


class Polyhedron:
    """Convex polyhedron ``{y : A y <= b} = conv(vertices) + cone(rays)``."""

    __slots__ = ("dim", "_h", "_v", "_lock")

    def __init__(self, dim: int, h=None, v=None):
        self.dim = dim
        self._h = h
        self._v = v
        self._lock = threading.Lock()

    # construction -------------------------------------------------------
    @classmethod
    def from_h(cls, A: Iterable[Sequence], b: Iterable, dim: Optional[int] = None) -> "Polyhedron":
        A = [list(r) for r in A]
        b = list(b)
        if dim is None:
            if not A:
                raise ValueError("dimension required for an empty constraint list")
            dim = len(A[0])
        hs = []
        for row, off in zip(A, b):
            if len(row) != dim:
                raise DimensionMismatch(f"row of length {len(row)} in dimension {dim}")
            hs.append(halfspace([q(x) for x in row], q(off)))
        return cls(dim, h=_dedup_h(hs))

    @classmethod
    def from_halfspaces(cls, hs: Iterable[HalfSpace], dim: int) -> "Polyhedron":
        return cls(dim, h=_dedup_h(halfspace(a, b) for a, b in hs))

    @classmethod
    def from_v(cls, vertices: Iterable[Sequence], rays: Iterable[Sequence] = (), dim: Optional[int] = None) -> "Polyhedron":
        vs = [vec(v) for v in vertices]
        rs = [_ray([q(x) for x in r]) for r in rays]
        if dim is None:
            if vs:
                dim = len(vs[0])
            elif rs:
                dim = len(rs[0])
            else:
                raise ValueError("dimension required for an empty generator list")
        for g in vs + rs:
            if len(g) != dim:
                raise DimensionMismatch(f"generator of length {len(g)} in dimension {dim}")
        if not vs:
            return cls.empty(dim)
        rs = [r for r in rs if any(r)]
        return cls(dim, v=(tuple(sorted(set(vs))), tuple(sorted(set(rs)))))

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, h=(((0,) * dim, -1),), v=((), ()))

    @classmethod
    def whole(cls, dim: int) -> "Polyhedron":
        return cls(dim, h=())

    @classmethod
    def point(cls, p: Sequence) -> "Polyhedron":
        p = vec(p)
        return cls.from_v([p], dim=len(p))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        d = len(lo)
        A, b = [], []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            A.append(e)
            b.append(q(hi[i]))
            A.append([-x for x in e])
            b.append(-q(lo[i]))
        return cls.from_h(A, b, dim=d)

    @classmethod
    def interval(cls, lo, hi) -> "Polyhedron":
        return cls.box([lo], [hi])

    @classmethod
    def span(cls, basis: Sequence[Sequence], dim: int) -> "Polyhedron":
        """Linear subspace spanned by ``basis``."""
        rays = []
        for b in basis:
            rays.append(vec(b))
            rays.append(tuple(-x for x in vec(b)))
        return cls.from_v([zeros(dim)], rays, dim=dim)

    # representations ----------------------------------------------------
    @property
    def h_rep(self) -> tuple:
        if self._h is None:
            with self._lock:
                if self._h is None:
                    self._h = _v_to_h(self.dim, *self._v)
        return self._h

    @property
    def v_rep(self) -> tuple:
        """``(vertices, rays)``; both empty iff the set is empty."""
        if self._v is None:
            with self._lock:
                if self._v is None:
                    self._v = _h_to_v(self.dim, self._h)
        return self._v

    @property
    def vertices(self) -> tuple:
        return self.v_rep[0]

    @property
    def rays(self) -> tuple:
        return self.v_rep[1]

    def to_v_rep(self) -> "Polyhedron":
        self.v_rep
        return self

    def to_h_rep(self) -> "Polyhedron":
        self.h_rep
        return self

    def minimal(self) -> "Polyhedron":
        """Fresh polyhedron with irredundant H- and V-representations."""
        h = _v_to_h(self.dim, *self.v_rep) if not self.is_empty else Polyhedron.empty(self.dim).h_rep
        return Polyhedron(self.dim, h=h, v=_h_to_v(self.dim, h) if not self.is_empty else ((), ()))

    @property
    def is_empty(self) -> bool:
        return not self.v_rep[0]

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    def A_b(self) -> tuple[list, list]:
        return [list(a) for a, _ in self.h_rep], [b for _, b in self.h_rep]

    # predicates ---------------------------------------------------------
    def contains(self, y: Sequence) -> bool:
        _check_dim(self.dim, len(y))
        y = vec(y)
        return all(dot(a, y) <= b for a, b in self.h_rep)

    def contains_ray(self, r: Sequence) -> bool:
        """True iff ``r`` lies in the recession cone (H-side test)."""
        return all(dot(a, r) <= 0 for a, _ in self.h_rep)

    def is_singleton(self) -> bool:
        return len(self.vertices) == 1 and not self.rays

    def __contains__(self, y) -> bool:
        return self.contains(y)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyhedron) and equals(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        if self._v is not None:
            vs, rs = self._v
            return f"Polyhedron(dim={self.dim}, vertices={[tuple(str(c) for c in v) for v in vs]}, rays={list(rs)})"
        return f"Polyhedron(dim={self.dim}, h={list(self._h)})"


def _dedup_h(hs) -> tuple:
    out = set()
    for a, b in hs:
        if not any(a):
            if b >= 0:
                continue
            return (((0,) * len(a), -1),)
        out.add((tuple(a), b))
    return tuple(sorted(out))


def _check_dim(d1: int, d2: int) -> None:
    if d1 != d2:
        raise DimensionMismatch(f"dimension {d1} vs {d2}")


def _h_to_v(dim: int, h) -> tuple:
    rows = [(0,) * dim + (-1,)]
    rows += [tuple(a) + (-b,) for a, b in h]
    lin, rays = cone_generators(rows, dim + 1)
    verts, rs = set(), set()
    for r in rays:
        s = r[-1]
        if s > 0:
            verts.add(tuple(Fraction(x, s) for x in r[:-1]))
        else:
            rs.add(tuple(r[:-1]))
    for l in lin:
        rs.add(tuple(l[:-1]))
        rs.add(tuple(-x for x in l[:-1]))
    if not verts:
        return (), ()
    return tuple(sorted(verts)), tuple(sorted(rs))


def _v_to_h(dim: int, verts, rays) -> tuple:
    if not verts:
        return Polyhedron.empty(dim).h_rep
    rows = []
    for v in verts:
        p = primitive(list(v) + [1])
        rows.append(tuple(p[:-1]) + (-p[-1],))
    for r in rays:
        rows.append(tuple(r) + (0,))
    lin, rs = cone_generators(rows, dim + 1)
    hs = []
    for g in rs:
        hs.append((tuple(g[:-1]), g[-1]))
    for g in lin:
        hs.append((tuple(g[:-1]), g[-1]))
        hs.append((tuple(-x for x in g[:-1]), -g[-1]))
    return _dedup_h(halfspace(a, b) for a, b in hs)


# set operations ------------------------------------------------------------

def support(P: Polyhedron, u: Sequence) -> Extended:
    """``sup_{y in P} <u, y>``; ``+inf`` along an ascent ray, ``-inf`` if empty."""
    _check_dim(P.dim, len(u))
    u = vec(u)
    if P.is_empty:
        return -INF
    if any(dot(u, r) > 0 for r in P.rays):
        return INF
    return max(dot(u, v) for v in P.vertices)


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    _check_dim(P.dim, Q.dim)
    if P.is_empty or Q.is_empty:
        return Polyhedron.empty(P.dim)
    verts = {tuple(a + b for a, b in zip(v, w)) for v in P.vertices for w in Q.vertices}
    rays = set(P.rays) | set(Q.rays)
    return Polyhedron.from_v(verts, rays, dim=P.dim).minimal()


def minkowski_sum_all(polys: Sequence[Polyhedron], dim: int) -> Polyhedron:
    acc = Polyhedron.point(zeros(dim))
    for P in polys:
        acc = minkowski_sum(acc, P)
    return acc


def recession_cone(P: Polyhedron) -> Polyhedron:
    """Recession cone from the generators: ``cone(rays)``."""
    if P.is_empty:
        raise EmptyPolyhedron("recession cone of the empty set")
    return Polyhedron.from_v([zeros(P.dim)], P.rays, dim=P.dim)


def recession_cone_h(P: Polyhedron) -> Polyhedron:
    """Recession cone from the homogenized H-rep: ``{u : A u <= 0}``."""
    if P.is_empty:
        raise EmptyPolyhedron("recession cone of the empty set")
    return Polyhedron.from_halfspaces(((a, 0) for a, _ in P.h_rep), P.dim)


def polar(P: Polyhedron) -> Polyhedron:
    if P.is_empty:
        raise EmptyPolyhedron("polar of the empty set")
    hs = [halfspace(v, 1) for v in P.vertices] + [(tuple(r), 0) for r in P.rays]
    return Polyhedron.from_halfspaces(hs, P.dim)


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    _check_dim(P.dim, Q.dim)
    return Polyhedron(P.dim, h=_dedup_h(list(P.h_rep) + list(Q.h_rep)))


def scale(P: Polyhedron, c) -> Polyhedron:
    """``c * P`` for ``c >= 0``; ``0 * P = {0}`` for nonempty ``P``."""
    c = q(c)
    if c < 0:
        raise ValueError("scale factor must be nonnegative")
    if P.is_empty:
        return Polyhedron.empty(P.dim)
    if c == 0:
        return Polyhedron.point(zeros(P.dim))
    verts = [tuple(c * x for x in v) for v in P.vertices]
    h = _dedup_h(halfspace(a, c * b) for a, b in P.h_rep)
    return Polyhedron(P.dim, h=h, v=(tuple(sorted(verts)), P.rays))


def contains(P: Polyhedron, y: Sequence) -> bool:
    return P.contains(y)


def subset(P: Polyhedron, Q: Polyhedron) -> bool:
    """``P ⊆ Q`` by checking the generators of ``P`` against the H-rep of ``Q``."""
    _check_dim(P.dim, Q.dim)
    if P.is_empty:
        return True
    if Q.is_empty:
        return False
    return all(Q.contains(v) for v in P.vertices) and all(Q.contains_ray(r) for r in P.rays)


def equals(P: Polyhedron, Q: Polyhedron) -> bool:
    if P.dim != Q.dim:
        return False
    if P._h is not None and Q._h is not None and P._h == Q._h:
        return True
    return subset(P, Q) and subset(Q, P)


def affine_slice(P: Polyhedron, x: Sequence, eps) -> Polyhedron:
    """``{s : (s, <s, x> + eps) in P}`` for ``P`` living in dimension ``d + 1``."""
    d = P.dim - 1
    x = vec(x)
    eps = q(eps)
    hs = []
    for a, b in P.h_rep:
        c = a[-1]
        normal = [Fraction(a[i]) + c * x[i] for i in range(d)]
        hs.append(halfspace(normal, b - c * eps))
    return Polyhedron(d, h=_dedup_h(hs))


def product(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    """Cartesian product ``P x Q``."""
    if P.is_empty or Q.is_empty:
        return Polyhedron.empty(P.dim + Q.dim)
    hs = [(tuple(a) + (0,) * Q.dim, b) for a, b in P.h_rep]
    hs += [((0,) * P.dim + tuple(a), b) for a, b in Q.h_rep]
    return Polyhedron(P.dim + Q.dim, h=_dedup_h(hs))


def orthogonal_complement(L: Polyhedron) -> Polyhedron:
    """``L^perp`` for a linear subspace ``L`` given with the origin as vertex."""
    if L.is_empty or not L.contains(zeros(L.dim)):
        raise ValueError("not a linear subspace")
    hs = [(tuple(r), 0) for r in L.rays]
    hs += [(tuple(-x for x in r), 0) for r in L.rays]
    return Polyhedron.from_halfspaces(hs, L.dim)


def is_subspace(L: Polyhedron) -> bool:
    if L.is_empty or not L.contains(zeros(L.dim)):
        return False
    return all(L.contains_ray(tuple(-x for x in r)) for r in L.rays) and equals(L, recession_cone(L))


def interior_contains(P: Polyhedron, y: Sequence) -> bool:
    """Strict satisfaction of every facet inequality (topological interior)."""
    y = vec(y)
    if P.is_empty:
        return False
    return all(dot(a, y) < b for a, b in P.h_rep)


def relative_interior_contains(P: Polyhedron, y: Sequence) -> bool:
    """Membership in the relative interior: implicit equalities may be tight."""
    y = vec(y)
    if not P.contains(y):
        return False
    for a, b in P.h_rep:
        if dot(a, y) == b:
            # tight is allowed only for implicit equalities (constant on P)
            if any(dot(a, v) != b for v in P.vertices) or any(dot(a, r) != 0 for r in P.rays):
                return False
    return True
