from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from epsint.functions import PolyhedralConvexFunction, abs_shift
from epsint.geometry import Polyhedron
from epsint.integral import instance

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def rationals(lo=-4, hi=4, dens=(1, 2, 4, 8)):
    return st.builds(lambda d, k: Fraction(k, d), st.sampled_from(dens), st.integers(lo * 8, hi * 8)).map(
        lambda q: max(min(q, Fraction(hi)), Fraction(lo))
    )


def vectors(d, **kw):
    return st.tuples(*[rationals(**kw) for _ in range(d)])


@st.composite
def boxes(draw, d, center=None):
    c = center if center is not None else draw(vectors(d, lo=-2, hi=2))
    lo = [ci - draw(st.integers(0, 4)) * Fraction(1, 2) for ci in c]
    hi = [ci + draw(st.integers(0, 4)) * Fraction(1, 2) for ci in c]
    return Polyhedron.box(lo, hi)


@st.composite
def polyhedral_functions(draw, d, bounded=False, anchor=None):
    k = draw(st.integers(1, 4))
    pieces = [(draw(vectors(d)), draw(rationals())) for _ in range(k)]
    dom = draw(boxes(d, anchor)) if bounded or draw(st.booleans()) else None
    return PolyhedralConvexFunction(pieces, dom, dim=d)


@st.composite
def instances(draw, max_dim=2, max_atoms=3):
    d = draw(st.integers(1, max_dim))
    p = draw(vectors(d, lo=-2, hi=2))
    m = draw(st.integers(1, max_atoms))
    fs = [draw(polyhedral_functions(d, anchor=p)) for _ in range(m)]
    ws = [draw(st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(2), Fraction(3, 4)])) for _ in range(m)]
    return instance(ws, fs), p


def instance_a():
    return instance([1, 1], [abs_shift(0), abs_shift(1)])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
