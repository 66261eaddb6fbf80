"""Finite atomic measure spaces and the integral functional over them.

With atoms ``t`` of weight ``mu_t > 0`` the integral functional is the finite
sum ``I_f(x) = sum_t mu_t f_t(x)`` and the integral of a set-valued map is the
weighted Minkowski sum of its values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import DimensionMismatch, EmptySummand, ImproperSum
from .functions import (
    PolyhedralConvexFunction,
    canonical,
    eps_normal,
    eps_subdifferential,
    function_sum,
    indicator,
    scaled,
    value,
)
from .geometry import Polyhedron, intersect, is_subspace, minkowski_sum_all, orthogonal_complement, scale
from .rational import INF, q, vec


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    atoms: tuple
    weights: tuple

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("need at least one atom")
        if len(self.atoms) != len(self.weights):
            raise ValueError("one weight per atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atom identifiers must be distinct")
        object.__setattr__(self, "weights", tuple(q(w) for w in self.weights))
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be strictly positive")

    def weight(self, atom) -> Fraction:
        return self.weights[self.atoms.index(atom)]

    def integrate(self, values: Mapping) -> Fraction:
        return sum((w * values[a] for a, w in zip(self.atoms, self.weights)), Fraction(0))


@dataclass(frozen=True)
class IntegrandFamily:
    functions: tuple  # one PolyhedralConvexFunction per atom, in atom order
    dim: int

    def __post_init__(self):
        if any(f.dim != self.dim for f in self.functions):
            raise DimensionMismatch("all integrands must share the ambient dimension")


@dataclass(frozen=True)
class ErrorAllocation:
    """Nonnegative per-atom errors ``ell`` whose integral stays within ``budget``."""

    ell: tuple
    budget: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(q(v) for v in self.ell))
        object.__setattr__(self, "budget", q(self.budget))
        if any(v < 0 for v in self.ell):
            raise ValueError("allocations are nonnegative")

    def total(self, space: DiscreteMeasureSpace) -> Fraction:
        return sum((w * v for w, v in zip(space.weights, self.ell)), Fraction(0))

    def is_valid(self, space: DiscreteMeasureSpace) -> bool:
        return len(self.ell) == len(space.atoms) and all(v >= 0 for v in self.ell) and self.total(space) <= self.budget


@dataclass(frozen=True)
class SubspaceRestriction:
    L: Polyhedron

    def __post_init__(self):
        if not is_subspace(self.L):
            raise ValueError("restriction set must be a linear subspace")

    @classmethod
    def spanned_by(cls, basis: Sequence[Sequence], dim: int) -> "SubspaceRestriction":
        return cls(Polyhedron.span(basis, dim))

    @property
    def complement(self) -> Polyhedron:
        return orthogonal_complement(self.L)


@dataclass
class IntegralInstance:
    space: DiscreteMeasureSpace
    family: IntegrandFamily
    I_f: PolyhedralConvexFunction = field(repr=False)
    dom_If: Polyhedron = field(repr=False)

    @property
    def dim(self) -> int:
        return self.family.dim

    @property
    def atoms(self) -> tuple:
        return self.space.atoms

    @property
    def weights(self) -> tuple:
        return self.space.weights

    @property
    def functions(self) -> tuple:
        return self.family.functions

    def items(self):
        return zip(self.space.atoms, self.space.weights, self.family.functions)

    def direct_value(self, x):
        """``sum_t mu_t f_t(x)`` evaluated atom by atom."""
        total = Fraction(0)
        for _, w, f in self.items():
            v = value(f, x)
            if v == INF:
                return INF
            total += w * v
        return total


def assemble(space: DiscreteMeasureSpace, family: IntegrandFamily) -> IntegralInstance:
    if len(space.atoms) != len(family.functions):
        raise ValueError("one integrand per atom")
    dom = Polyhedron.whole(family.dim)
    for f in family.functions:
        dom = intersect(dom, f.domain)
    if dom.is_empty:
        raise ImproperSum("the integrand domains have empty intersection")
    acc: Optional[PolyhedralConvexFunction] = None
    for w, f in zip(space.weights, family.functions):
        term = scaled(f, w)
        acc = canonical(term) if acc is None else function_sum(acc, term)
    return IntegralInstance(space, family, acc, acc.domain.minimal())


def instance(weights: Sequence, functions: Sequence[PolyhedralConvexFunction], atoms: Optional[Sequence] = None) -> IntegralInstance:
    """Shorthand: ``instance([1, 1], [f1, f2])``."""
    if atoms is None:
        atoms = [str(i + 1) for i in range(len(functions))]
    space = DiscreteMeasureSpace(tuple(atoms), tuple(weights))
    return assemble(space, IntegrandFamily(tuple(functions), functions[0].dim))


def aumann_integral(inst: IntegralInstance, x, alloc: ErrorAllocation) -> Polyhedron:
    """``sum_t mu_t * d_{ell_t} f_t(x)`` as an iterated Minkowski sum."""
    x = vec(x)
    if len(alloc.ell) != len(inst.atoms):
        raise ValueError("one allocation entry per atom")
    parts = []
    for (atom, w, f), ell in zip(inst.items(), alloc.ell):
        sd = eps_subdifferential(f, x, ell).set
        if sd.is_empty:
            raise EmptySummand(f"atom {atom}: x is outside the domain of f_t")
        parts.append(scale(sd, w))
    return minkowski_sum_all(parts, inst.dim)


def eps_normal_dom(inst: IntegralInstance, x, eps) -> Polyhedron:
    return eps_normal(inst.dom_If, x, eps)


def augment_with_indicator(inst: IntegralInstance, restriction: SubspaceRestriction, atom_id: str = "omega0") -> IntegralInstance:
    """Add one atom of weight 1 carrying the indicator of ``L``."""
    if restriction.L.dim != inst.dim:
        raise DimensionMismatch("subspace lives in another dimension")
    atoms = tuple(inst.atoms) + (atom_id,)
    weights = tuple(inst.weights) + (Fraction(1),)
    funcs = tuple(inst.functions) + (indicator(restriction.L),)
    return assemble(DiscreteMeasureSpace(atoms, weights), IntegrandFamily(funcs, inst.dim))
