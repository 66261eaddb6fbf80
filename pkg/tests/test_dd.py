from fractions import Fraction

from hypothesis import given, strategies as st

from epsint.dd import cone_generators
from epsint.rational import dot, rank


def in_cone(rows, x):
    return all(dot(r, x) <= 0 for r in rows)


def test_orthant():
    lin, rays = cone_generators([[-1, 0], [0, -1]], 2)
    assert lin == []
    assert sorted(rays) == [(0, 1), (1, 0)]


def test_halfspace_keeps_lineality():
    lin, rays = cone_generators([[1, 0, 0]], 3)
    assert len(lin) == 2
    assert rays == [(-1, 0, 0)]


def test_pointed_cone_from_abs_epigraph():
    # epi |y| homogenized without the height row: {(y, r) : y - r <= 0, -y - r <= 0}
    lin, rays = cone_generators([[1, -1], [-1, -1]], 2)
    assert lin == []
    assert sorted(rays) == [(-1, 1), (1, 1)]


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=6))
def test_generators_lie_in_cone_and_are_extreme(rows):
    lin, rays = cone_generators(rows, 3)
    for l in lin:
        assert all(dot(r, l) == 0 for r in rows)
    for g in rays:
        assert in_cone(rows, g)
        # extreme modulo lineality: the tight rows have rank n - 1 - dim(lineality)
        tight = [r for r in rows if dot(r, g) == 0]
        assert rank(tight, 3) == 3 - 1 - len(lin)


@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=5),
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
)
def test_membership_matches_generators_in_the_plane(rows, pt):
    # in dimension 2 a point is in the cone iff it is a nonneg combination of
    # at most two generators (plus lineality); check the easy direction plus
    # the sign pattern of the constraints.
    lin, rays = cone_generators(rows, 2)
    x = tuple(Fraction(c) for c in pt)
    if not in_cone(rows, x):
        return
    gens = [tuple(l) for l in lin] + [tuple(-c for c in l) for l in lin] + list(rays)
    if not any(x):
        return
    assert gens, "nonzero cone point but no generators"
    from itertools import combinations

    from oracles import solve_square

    ok = False
    for g in gens:
        if g[0] * x[1] - g[1] * x[0] == 0 and dot(g, x) > 0:
            ok = True
    for g, h in combinations(gens, 2):
        sol = solve_square([[g[0], h[0]], [g[1], h[1]]], list(x))
        if sol is not None and sol[0] >= 0 and sol[1] >= 0:
            ok = True
    assert ok
