from fractions import Fraction

from hypothesis import given, strategies as st

from epsint.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp
from oracles import brute_lp_min


def box_rows(d, lo, hi):
    A, b = [], []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        A.append(e)
        b.append(hi)
        A.append([-v for v in e])
        b.append(-lo)
    return A, b


def test_simple_optimum():
    res = solve_lp([-1, -1], [[1, 2], [3, 1]], [4, 6], nonneg=[True, True])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-14, 5)
    assert res.x == (Fraction(8, 5), Fraction(6, 5))


def test_unbounded_and_infeasible():
    assert solve_lp([-1], [[-1]], [0], n=1).status == UNBOUNDED
    assert solve_lp([1], [[1], [-1]], [0, -1], n=1).status == INFEASIBLE


def test_equalities_and_free_variables():
    res = solve_lp([1, 1], [], [], [[1, -1]], [3], nonneg=[True, True])
    assert res.status == OPTIMAL and res.value == 3


def test_lexicographic_objectives():
    # minimize x+y on the segment x+y >= 1, then prefer small x
    res = solve_lp([[1, 1], [1, 0]], [[-1, -1]], [-1], nonneg=[True, True])
    assert res.values[0] == 1
    assert res.x == (0, 1)


def test_redundant_equalities():
    res = solve_lp([1, 0], [], [], [[1, 1], [2, 2]], [2, 4], nonneg=[True, True])
    assert res.status == OPTIMAL and res.value == 0


@given(
    st.integers(1, 3).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.integers(-5, 5), min_size=d, max_size=d),
            st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=d, max_size=d), st.integers(-2, 6)), max_size=4),
        )
    )
)
def test_matches_vertex_enumeration(data):
    d, c, extra = data
    A, b = box_rows(d, -3, 3)
    for row, rhs in extra:
        A.append(row)
        b.append(rhs)
    expected = brute_lp_min(c, A, b, d)
    res = solve_lp(c, A, b, n=d)
    if expected is None:
        assert res.status == INFEASIBLE
    else:
        assert res.status == OPTIMAL
        assert res.value == expected
        assert all(sum(Fraction(a) * v for a, v in zip(r, res.x)) <= rr for r, rr in zip(A, b))
