"""Double description for polyhedral cones over the integers.

:func:`cone_generators` turns ``{x : a.x <= 0 for every row a}`` into a
lineality basis plus a minimal list of extreme rays, inserting one constraint
at a time. All vectors are integer tuples kept primitive (coprime entries), so
no rational arithmetic is needed inside the iteration.
"""
from __future__ import annotations

import math
from functools import reduce
from typing import Sequence

IntVec = tuple  # tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _prim(v: Sequence[int]) -> IntVec:
    g = reduce(math.gcd, (abs(x) for x in v), 0)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def cone_generators(rows: Sequence[Sequence[int]], n: int) -> tuple[list[IntVec], list[IntVec]]:
    """Return ``(lineality, rays)`` with cone = span(lineality) + cone(rays).

    Rays are extreme modulo the lineality space; both lists hold primitive
    integer vectors.
    """
    lin: list[IntVec] = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays: list[IntVec] = []
    masks: list[int] = []
    all_bits = 0
    bit = 0
    for row in rows:
        a = tuple(int(x) for x in row)
        if not any(a):
            continue
        b = 1 << bit
        bit += 1
        k = next((i for i, l in enumerate(lin) if _dot(a, l) != 0), None)
        if k is not None:
            l = lin[k]
            al = _dot(a, l)
            if al > 0:
                l = tuple(-x for x in l)
                al = -al
            new_lin = []
            for j, lj in enumerate(lin):
                if j == k:
                    continue
                c = _dot(a, lj)
                new_lin.append(_prim(tuple(al * x - c * y for x, y in zip(lj, l))) if c else lj)
            new_rays = []
            for r in rays:
                c = _dot(a, r)
                new_rays.append(_prim(tuple(-al * x + c * y for x, y in zip(r, l))) if c else r)
            rays = new_rays + [l]
            masks = [m | b for m in masks] + [all_bits]
            lin = new_lin
            all_bits |= b
            continue

        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not pos:
            masks = [m | b if v == 0 else m for m, v in zip(masks, vals)]
            all_bits |= b
            continue
        need = n - len(lin) - 2
        keep = [i for i, v in enumerate(vals) if v <= 0]
        new_rays = [rays[i] for i in keep]
        new_masks = [masks[i] | b if vals[i] == 0 else masks[i] for i in keep]
        for p in pos:
            for m_ in neg:
                common = masks[p] & masks[m_]
                if _popcount(common) < need:
                    continue
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != m_ and masks[r] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[p], vals[m_]
                new = _prim(tuple(vp * x - vn * y for x, y in zip(rays[m_], rays[p])))
                new_rays.append(new)
                new_masks.append(common | b)
        rays, masks = new_rays, new_masks
        all_bits |= b
    return lin, rays


