import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from epsint.calculus import (
    DecompositionCertificate,
    build_epigraph_sets,
    certificate_defects,
    check_conjugate_formula,
    check_epigraph_formula,
    check_restricted_formula,
    check_sum_rule,
    decompose,
    inf_convolution_value,
    lhs_eps_subdifferential,
    normal_set_forms,
    normal_set_four_ways,
    verify_certificate,
)
from epsint.errors import NotInSubdifferential, TheoremViolation
from epsint.functions import (
    PolyhedralConvexFunction,
    abs_shift,
    affine,
    conjugate_function,
    conjugate_value,
    indicator,
)
from epsint.generate import random_instance
from epsint.geometry import Polyhedron, equals, minkowski_sum_all, recession_cone, scale
from epsint.integral import ErrorAllocation, SubspaceRestriction, eps_normal_dom, instance
from epsint.rational import INF, add, smul
from epsint.report import COLLAPSE_NOTES
from conftest import instance_a, instances, vectors

F = Fraction
EPS = [F(0), F(1, 4), F(1), F(3)]


def test_lhs_examples():
    A = instance_a()
    assert equals(lhs_eps_subdifferential(A, (0,), 0), Polyhedron.interval(-2, 0))
    assert equals(lhs_eps_subdifferential(A, (0,), F(1, 2)), Polyhedron.interval(-2, F(1, 2)))
    aff = instance([1, F(1, 2)], [affine((1, 2), 3), affine((-2, 4), 0)])
    for eps in EPS:
        assert equals(lhs_eps_subdifferential(aff, (1, 1), eps), Polyhedron.point((0, 4)))


def test_lhs_matches_grid_definition():
    # {s : s*y <= I_f(y) - I_f(0) + eps on a grid} brackets the exact set
    A = instance_a()
    for eps in (F(0), F(1, 2)):
        ys = [F(k, 8) for k in range(-80, 81) if k]
        lo = max((abs(y) + abs(y - 1) - 1 + eps) / y for y in ys if y < 0)
        hi = min((abs(y) + abs(y - 1) - 1 + eps) / y for y in ys if y > 0)
        S = lhs_eps_subdifferential(A, (0,), eps)
        assert lo <= S.vertices[0][0] and S.vertices[-1][0] == hi


def test_decompose_instance_a():
    c = decompose(instance_a(), (0,), (F(1, 2),), F(1, 2))
    assert (c.eps1, c.eps2) == (F(1, 2), 0)
    assert c.alloc.ell == (0, F(1, 2))
    assert c.selections == ((1,), (F(-1, 2),))
    assert c.normal == (0,)


def test_decompose_single_atom_exact():
    f = abs_shift(2)
    c = decompose(instance([1], [f]), (2,), (F(1, 3),), 0)
    assert c.alloc.ell == (0,) and c.selections == ((F(1, 3),),) and c.normal == (0,)


def test_decompose_domain_active():
    inst = instance([1, 1], [indicator(Polyhedron.interval(0, 1)), affine((0,), 0)])
    c = decompose(inst, (0,), (-3,), 0)
    assert verify_certificate(inst, (0,), (-3,), 0, c)
    assert c.selections[1] == (0,)
    assert c.selections[0][0] + c.normal[0] == -3


def test_decompose_rejects_outside_point():
    with pytest.raises(NotInSubdifferential):
        decompose(instance_a(), (0,), (1,), F(1, 2))


def test_negative_certificates():
    A = instance_a()
    c = decompose(A, (0,), (F(1, 2),), F(1, 2))
    assert verify_certificate(A, (0,), (F(1, 2),), F(1, 2), c)
    bumped = replace(c, selections=((2,),) + c.selections[1:])
    assert not verify_certificate(A, (0,), (F(1, 2),), F(1, 2), bumped)
    over = replace(c, alloc=ErrorAllocation((0, 1), F(1, 2)))
    assert "allocation exceeds eps1" in certificate_defects(A, (0,), (F(1, 2),), F(1, 2), over)
    split = replace(c, eps2=F(1, 2))
    assert "eps1 + eps2 exceeds eps" in certificate_defects(A, (0,), (F(1, 2),), F(1, 2), split)
    short = replace(c, selections=c.selections[:1])
    assert not verify_certificate(A, (0,), (F(1, 2),), F(1, 2), short)


def test_certificate_json_roundtrip():
    c = decompose(instance_a(), (0,), (F(1, 2),), F(1, 2))
    assert DecompositionCertificate.from_json(c.to_json()) == c


@pytest.mark.parametrize("eps", [F(0), F(1, 2), F(2)])
def test_sum_rule_instance_a(eps):
    rep = check_sum_rule(instance_a(), (0,), eps)
    assert rep.passed, rep.to_text()
    assert sum(1 for w in rep.witnesses if w["direction"] == "rhs_in_lhs") == 50


def test_sum_rule_indicator_only():
    inst = instance([1, 2], [indicator(Polyhedron.box([0, 0], [2, 1])), indicator(Polyhedron.from_h([[1, 1]], [1]))])
    for eps in (0, F(1, 2)):
        assert check_sum_rule(inst, (0, 0), eps, samples=20).passed


def test_sum_rule_affine_singleton():
    inst = instance([1, 3], [affine((1, -1), 0), affine((0, 2), 5)])
    rep = check_sum_rule(inst, (F(1, 2), 7), 0, samples=5)
    assert rep.passed
    assert all(w["point"] == (1, 5) for w in rep.witnesses if w["direction"] != "lhs_ray")


def test_report_raise_for_status():
    rep = check_sum_rule(instance_a(), (0,), 0, samples=2)
    rep.raise_for_status()
    rep.fail("forced", point=(1,))
    with pytest.raises(TheoremViolation):
        rep.raise_for_status()


@given(instances(max_dim=2, max_atoms=3), st.sampled_from(EPS))
def test_sum_rule_property(arg, eps):
    inst, p = arg
    rep = check_sum_rule(inst, p, eps, samples=10)
    assert rep.passed, rep.to_text()


@given(instances(max_dim=3, max_atoms=3), st.sampled_from(EPS), st.data())
def test_decompose_is_sound(arg, eps, data):
    inst, p = arg
    lhs = lhs_eps_subdifferential(inst, p, eps)
    v = data.draw(st.sampled_from(lhs.vertices))
    for r in lhs.rays[:1]:
        v = add(v, smul(F(data.draw(st.integers(0, 3))), r))
    c = decompose(inst, p, v, eps)
    assert verify_certificate(inst, p, v, eps, c)


@given(instances(max_dim=2, max_atoms=3), st.sampled_from(EPS), st.sampled_from(EPS), st.data())
def test_monotone_unions(arg, e1, e2, data):
    inst, p = arg
    lo, hi = min(e1, e2), max(e1, e2)
    lhs = lhs_eps_subdifferential(inst, p, lo)
    v = data.draw(st.sampled_from(lhs.vertices))
    c = decompose(inst, p, v, lo)
    assert verify_certificate(inst, p, v, hi, c)


def test_sum_rule_seeded_corpus():
    for seed in range(12):
        for profile in ("box-domains", "indicator-heavy", "kinked"):
            inst, p = random_instance(random.Random(f"{profile}:{seed}"), profile)
            for eps in (F(0), F(1)):
                rep = check_sum_rule(inst, p, eps, samples=10, seed=seed)
                assert rep.passed, (profile, seed, rep.to_text())


def test_inf_convolution_examples():
    A = instance_a()
    assert inf_convolution_value(A, (0,)) == -1 == conjugate_value(A.I_f, (0,))
    f = abs_shift(F(1, 2))
    assert inf_convolution_value(instance([1], [f]), (F(1, 3),)) == conjugate_value(f, (F(1, 3),))
    assert inf_convolution_value(A, (3,)) == INF == conjugate_value(A.I_f, (3,))


@given(instances(max_dim=3, max_atoms=3), st.lists(vectors(3), min_size=1, max_size=6))
def test_conjugate_formula_property(arg, pts):
    inst, _ = arg
    pts = [s[: inst.dim] for s in pts]
    for s in pts:
        assert inf_convolution_value(inst, s) == conjugate_value(inst.I_f, s)
    assert check_conjugate_formula(inst, pts).passed


def test_epigraph_sets_examples():
    S = build_epigraph_sets(instance([1], [abs_shift(0)]))
    assert equals(S.E, Polyhedron.from_v([(-1, 0), (1, 0)], [(0, 1)]))
    assert equals(S.G, Polyhedron.from_v([(-1, 0), (1, 0)]))
    A = instance_a()
    SA = build_epigraph_sets(A)
    assert equals(SA.E, conjugate_function(A.I_f).epigraph())
    rec = minkowski_sum_all([recession_cone(scale(conjugate_function(f).epigraph(), w)) for _, w, f in A.items()], 2)
    assert equals(recession_cone(SA.E), rec)


@given(instances(max_dim=2, max_atoms=3))
def test_epigraph_formula_property(arg):
    inst, _ = arg
    assert check_epigraph_formula(inst).passed
    assert build_epigraph_sets(inst).vertical_completion_holds()


def test_normal_sets_examples():
    assert all(equals(P, Polyhedron.point((0,))) for P in normal_set_forms(instance_a(), (0,), 1).values())
    box = instance([1], [indicator(Polyhedron.box([0, 0], [1, 1]))])
    forms = normal_set_forms(box, (0, 0), F(1, 4))
    assert equals(forms["direct"], Polyhedron.from_h([[1, 0], [0, 1], [1, 1]], [F(1, 4), F(1, 4), F(1, 4)]))
    assert normal_set_four_ways(box, (0, 0), F(1, 4)).passed
    cone = normal_set_forms(box, (0, 0), 0)
    for P in cone.values():
        assert equals(P, Polyhedron.from_h([[1, 0], [0, 1]], [0, 0]))


@given(instances(max_dim=2, max_atoms=3), st.sampled_from([F(0), F(1, 4), F(1), F(10)]))
def test_normal_sets_property(arg, eps):
    inst, p = arg
    assert normal_set_four_ways(inst, p, eps).passed
    v = inst.dom_If.vertices[0]
    assert normal_set_four_ways(inst, v, eps).passed


def test_restricted_examples():
    A = instance_a()
    assert check_restricted_formula(A, SubspaceRestriction.spanned_by([(1,)], 1), (0,), F(1, 2), samples=10).passed
    box = instance([1], [PolyhedralConvexFunction([((1, 1), 0)], Polyhedron.box([-1, -1], [1, 1]))])
    L = SubspaceRestriction.spanned_by([(1, 0)], 2)
    rep = check_restricted_formula(box, L, (0, 0), 0, samples=10)
    assert rep.passed
    # the normal set of dom cap L at an interior point of the segment is L-perp
    from epsint.geometry import intersect
    from epsint.functions import eps_normal
    assert equals(eps_normal(intersect(box.dom_If, L.L), (0, 0), 0), Polyhedron.span([(0, 1)], 2))
    assert check_restricted_formula(box, L, (1, 0), F(1, 4), samples=10).passed


@given(instances(max_dim=2, max_atoms=2), st.sampled_from([F(0), F(1, 4)]), st.data())
def test_restricted_property(arg, eps, data):
    inst, _ = arg
    d = inst.dim
    basis = data.draw(st.lists(st.tuples(*[st.integers(-2, 2)] * d), max_size=d))
    L = SubspaceRestriction.spanned_by(basis, d)
    x = (F(0),) * d
    if not inst.dom_If.contains(x):
        return
    rep = check_restricted_formula(inst, L, x, eps, samples=5)
    assert rep.passed, rep.to_text()
    assert rep.notes == list(COLLAPSE_NOTES)
