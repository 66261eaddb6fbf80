"""Exact scalars and coordinate vectors.

Scalars are :class:`fractions.Fraction`; vectors are plain tuples of them.
Extended values (``+inf`` for "off the domain" / "unbounded", ``-inf`` for the
support function of the empty set) are the float infinities from :mod:`math`,
which compare correctly against fractions.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

Rational = Fraction
Vec = tuple  # tuple[Fraction, ...]
Extended = Union[Fraction, float]

INF = math.inf

_RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?")


def q(value) -> Fraction:
    """Coerce an int, Fraction or rational string ``"p/q"`` to a Fraction.

    Floats are rejected: every scalar in the exact core must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse the bit-exact grammar ``-?[0-9]+(/[1-9][0-9]*)?``."""
    s = text.strip()
    if not _RATIONAL_RE.fullmatch(s):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(s)


def format_rational(x: Extended) -> str:
    if isinstance(x, float):
        if x == INF:
            return "inf"
        if x == -INF:
            return "-inf"
        raise ValueError("finite floats are not exact rationals")
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> Vec:
    return tuple(q(v) for v in values)


def zeros(d: int) -> Vec:
    return (Fraction(0),) * d


def unit(d: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(d))


def dot(u: Sequence, v: Sequence) -> Fraction:
    # accumulate in mpq: several times faster than Fraction on hot paths
    s = mpq(0)
    for a, b in zip(u, v):
        s += mpq(a) * mpq(b)
    return Fraction(int(s.numerator), int(s.denominator))


def add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def smul(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def norm_inf(u: Sequence) -> Fraction:
    return max((abs(Fraction(a)) for a in u), default=Fraction(0))


def norm_1(u: Sequence) -> Fraction:
    return sum((abs(Fraction(a)) for a in u), Fraction(0))


def ext_add(a: Extended, b: Extended) -> Extended:
    """Extended addition with the convention ``inf + (-inf) = inf``."""
    if a == INF or b == INF:
        return INF
    if a == -INF or b == -INF:
        return -INF
    return a + b


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b) if a and b else max(a, b, 1)


def primitive(values: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to coprime integers."""
    fr = [Fraction(v) for v in values]
    den = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(math.gcd, (abs(i) for i in ints), 0)
    if g > 1:
        ints = [i // g for i in ints]
    return tuple(ints)


def nullspace(rows: Sequence[Sequence], n: int) -> list[Vec]:
    """Basis of ``{x : r.x = 0 for r in rows}`` by exact Gauss-Jordan."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -m[i][fc]
        basis.append(tuple(x))
    return basis


def rank(rows: Sequence[Sequence], n: int) -> int:
    return n - len(nullspace(rows, n))
