"""Exact checks of the eps-subdifferential sum rule and its companions.

For a finite atomic measure the sum rule reads

    d_eps I_f(x) = union over eps1 + eps2 = eps, ell with int ell <= eps1 of
                   sum_t mu_t d_{ell_t} f_t(x) + N^{eps2}_{dom I_f}(x)

and every set involved is a polyhedron. :func:`decompose` produces a
membership certificate for the right-hand side by one LP; the checkers test
both inclusions, the conjugate and epigraph formulas, and the four
descriptions of the eps-normal set.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotInSubdifferential, PointNotInSet
from .functions import (
    conjugate_function,
    eps_normal,
    eps_subdifferential,
    fenchel_gap,
    indicator,
    value,
)
from .geometry import (
    Polyhedron,
    affine_slice,
    equals,
    intersect,
    minkowski_sum,
    minkowski_sum_all,
    product,
    recession_cone,
    recession_cone_h,
    scale,
    support,
)
from .integral import (
    ErrorAllocation,
    IntegralInstance,
    SubspaceRestriction,
    augment_with_indicator,
    eps_normal_dom,
)
from .lp import INFEASIBLE, OPTIMAL, solve_lp
from .rational import INF, Vec, add, dot, format_rational, q, smul, sub, vec, zeros
from .report import CheckReport


@dataclass(frozen=True)
class DecompositionCertificate:
    eps1: Fraction
    eps2: Fraction
    alloc: ErrorAllocation
    selections: tuple  # one Vec per atom, in atom order
    normal: Vec

    def to_json(self) -> dict:
        f = format_rational
        return {
            "eps1": f(self.eps1),
            "eps2": f(self.eps2),
            "ell": [f(v) for v in self.alloc.ell],
            "budget": f(self.alloc.budget),
            "selections": [[f(c) for c in y] for y in self.selections],
            "normal": [f(c) for c in self.normal],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DecompositionCertificate":
        return cls(
            q(doc["eps1"]),
            q(doc["eps2"]),
            ErrorAllocation(tuple(doc["ell"]), doc.get("budget", doc["eps1"])),
            tuple(vec(y) for y in doc["selections"]),
            vec(doc["normal"]),
        )


def lhs_eps_subdifferential(inst: IntegralInstance, x, eps) -> Polyhedron:
    return eps_subdifferential(inst.I_f, x, eps).set


# decomposition ----------------------------------------------------------------

def decompose(inst: IntegralInstance, x, xstar, eps) -> DecompositionCertificate:
    """Certificate for ``xstar`` in the right-hand side, or NotInSubdifferential.

    Variables per atom are ``(y_t, r_t, ell_t)``, then ``lam, eps1, eps2``.
    Minimizes ``eps1`` first and ``sum mu_t ell_t`` second.
    """
    x, xstar, eps = vec(x), vec(xstar), q(eps)
    d = inst.dim
    m = len(inst.atoms)
    if len(xstar) != d or len(x) != d:
        raise ValueError("dimension mismatch")
    fxs = [value(f, x) for f in inst.functions]
    if any(v == INF for v in fxs):
        raise PointNotInSet("x is outside dom I_f")
    block = d + 2
    n = m * block + d + 2
    i_lam = m * block
    i_e1, i_e2 = n - 2, n - 1
    nonneg = [False] * n
    A, b = [], []

    def row():
        return [Fraction(0)] * n

    for t, f in enumerate(inst.functions):
        g = conjugate_function(f)
        o = t * block
        i_r, i_l = o + d, o + d + 1
        nonneg[i_l] = True
        for a, c in g.pieces:
            r = row()
            for i in range(d):
                r[o + i] = a[i]
            r[i_r] = Fraction(-1)
            A.append(r)
            b.append(-c)
        for a, c in g.domain.h_rep:
            r = row()
            for i in range(d):
                r[o + i] = Fraction(a[i])
            A.append(r)
            b.append(Fraction(c))
        # r_t + f_t(x) - <y_t, x> <= ell_t
        r = row()
        for i in range(d):
            r[o + i] = -x[i]
        r[i_r] = Fraction(1)
        r[i_l] = Fraction(-1)
        A.append(r)
        b.append(-fxs[t])
    # sum mu_t ell_t <= eps1
    r = row()
    for t, w in enumerate(inst.weights):
        r[t * block + d + 1] = w
    r[i_e1] = Fraction(-1)
    A.append(r)
    b.append(Fraction(0))
    # lam in N^{eps2}_{dom}(x)
    dom = inst.dom_If
    for v in dom.vertices:
        r = row()
        for i in range(d):
            r[i_lam + i] = v[i] - x[i]
        r[i_e2] = Fraction(-1)
        A.append(r)
        b.append(Fraction(0))
    for w in dom.rays:
        r = row()
        for i in range(d):
            r[i_lam + i] = Fraction(w[i])
        A.append(r)
        b.append(Fraction(0))
    r = row()
    r[i_e1] = r[i_e2] = Fraction(1)
    A.append(r)
    b.append(eps)
    nonneg[i_e1] = nonneg[i_e2] = True
    # sum mu_t y_t + lam = xstar
    A_eq, b_eq = [], []
    for i in range(d):
        r = row()
        for t, w in enumerate(inst.weights):
            r[t * block + i] = w
        r[i_lam + i] = Fraction(1)
        A_eq.append(r)
        b_eq.append(xstar[i])

    c1 = row()
    c1[i_e1] = Fraction(1)
    c2 = row()
    for t, w in enumerate(inst.weights):
        c2[t * block + d + 1] = w
    res = solve_lp([c1, c2], A, b, A_eq, b_eq, nonneg=nonneg, n=n)
    if res.status == INFEASIBLE:
        raise NotInSubdifferential("no decomposition exists for this point")
    if res.status != OPTIMAL:
        raise NotInSubdifferential(f"decomposition LP ended with status {res.status}")
    z = res.x
    sels = tuple(tuple(z[t * block: t * block + d]) for t in range(m))
    ell = tuple(z[t * block + d + 1] for t in range(m))
    e1 = z[i_e1]
    return DecompositionCertificate(e1, z[i_e2], ErrorAllocation(ell, e1), sels, tuple(z[i_lam: i_lam + d]))


def certificate_defects(inst: IntegralInstance, x, xstar, eps, cert: DecompositionCertificate) -> list[str]:
    """Every violated certificate condition, checked by evaluation only."""
    x, xstar, eps = vec(x), vec(xstar), q(eps)
    bad = []
    m = len(inst.atoms)
    if cert.eps1 < 0 or cert.eps2 < 0:
        bad.append("negative error split")
    if cert.eps1 + cert.eps2 > eps:
        bad.append("eps1 + eps2 exceeds eps")
    if len(cert.selections) != m or len(cert.alloc.ell) != m:
        return bad + ["wrong number of atoms"]
    if any(len(y) != inst.dim for y in cert.selections) or len(cert.normal) != inst.dim:
        return bad + ["wrong dimension"]
    if cert.alloc.budget > cert.eps1 or not cert.alloc.is_valid(inst.space):
        bad.append("allocation exceeds eps1")
    for (atom, _, f), y, ell in zip(inst.items(), cert.selections, cert.alloc.ell):
        if fenchel_gap(f, x, y) > ell:
            bad.append(f"selection for atom {atom} is not an ell-subgradient")
    dom = inst.dom_If
    lam = cert.normal
    if not dom.contains(x):
        bad.append("x outside dom I_f")
    elif any(dot(lam, sub(v, x)) > cert.eps2 for v in dom.vertices) or any(dot(lam, r) > 0 for r in dom.rays):
        bad.append("normal component outside the eps2-normal set")
    total = cert.normal
    for w, y in zip(inst.weights, cert.selections):
        total = add(total, smul(w, y))
    if total != xstar:
        bad.append("components do not sum to x*")
    return bad


def verify_certificate(inst: IntegralInstance, x, xstar, eps, cert: DecompositionCertificate) -> bool:
    try:
        return not certificate_defects(inst, x, xstar, eps, cert)
    except (ValueError, TypeError):
        return False


# sum rule -----------------------------------------------------------------------

def _sample_point(P: Polyhedron, rng: random.Random) -> Vec:
    vs = P.vertices
    ws = [rng.randint(0, 4) for _ in vs]
    if not any(ws):
        ws[rng.randrange(len(ws))] = 1
    tot = sum(ws)
    pt = zeros(P.dim)
    for w, v in zip(ws, vs):
        pt = add(pt, smul(Fraction(w, tot), v))
    for r in P.rays:
        pt = add(pt, smul(Fraction(rng.randint(0, 3), rng.randint(1, 2)), r))
    return pt


def _random_certificate(inst, x, eps, rng, pools) -> DecompositionCertificate:
    """An RHS point with random split, allocation and selections.

    Selections are drawn from ``d_eps f_t(x)`` and pulled toward an exact
    subgradient until the allocation fits the sampled ``eps1``; the gap is
    convex along the segment, so shrinking by ``theta`` shrinks it at least
    proportionally. The normal part is rescaled the same way (its gap is
    positively homogeneous).
    """
    eps1 = eps * Fraction(rng.randint(0, 8), 8)
    eps2 = eps - eps1
    sels, gaps = [], []
    for (_, _, f), (big, s0) in zip(inst.items(), pools):
        z = _sample_point(big, rng)
        sels.append((s0, z))
        gaps.append(fenchel_gap(f, x, z))
    total = sum((w * g for w, g in zip(inst.weights, gaps)), Fraction(0))
    theta = Fraction(1) if total <= eps1 else eps1 / total
    ys = tuple(add(s0, smul(theta, sub(z, s0))) for s0, z in sels)
    ell = tuple(fenchel_gap(f, x, y) for f, y in zip(inst.functions, ys))
    lam = _sample_point(pools[-1][0], rng) if pools[-1][0] is not None else zeros(inst.dim)
    h = support(inst.dom_If, lam) - dot(lam, x)
    if h > eps2:
        lam = smul(eps2 / h, lam)
    return DecompositionCertificate(eps1, eps2, ErrorAllocation(ell, eps1), ys, lam)


def check_sum_rule(inst: IntegralInstance, x, eps, samples: int = 50, seed: int = 0, jobs: int = 1) -> CheckReport:
    x, eps = vec(x), q(eps)
    rep = CheckReport("sum_rule")
    lhs = lhs_eps_subdifferential(inst, x, eps)
    if lhs.is_empty:
        return rep.fail("x is outside dom I_f", x=x)

    # (>=) assembled right-hand-side points lie in the left-hand side
    rng = random.Random(seed)
    pools = []
    for f in inst.functions:
        big = eps_subdifferential(f, x, eps).set
        s0 = eps_subdifferential(f, x, 0).set.vertices[0]
        pools.append((big, s0))
    pools.append((eps_normal_dom(inst, x, eps), None))
    for k in range(samples):
        cert = _random_certificate(inst, x, eps, rng, pools)
        pt = cert.normal
        for w, y in zip(inst.weights, cert.selections):
            pt = add(pt, smul(w, y))
        defects = certificate_defects(inst, x, pt, eps, cert)
        if defects:
            return rep.fail("sampler produced an invalid certificate", certificate=cert.to_json(), defects=defects)
        gap = fenchel_gap(inst.I_f, x, pt)
        if gap > eps or not lhs.contains(pt):
            return rep.fail("assembled point outside the left-hand side", point=pt, gap=gap, certificate=cert.to_json())
        rep.witnesses.append({"direction": "rhs_in_lhs", "point": pt, "gap": gap})

    # (<=) every vertex of the left-hand side decomposes
    def run(v):
        try:
            cert = decompose(inst, x, v, eps)
        except NotInSubdifferential as exc:
            return v, None, str(exc)
        return v, cert, certificate_defects(inst, x, v, eps, cert)

    verts = list(lhs.vertices)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(run, verts))
    else:
        results = [run(v) for v in verts]
    for v, cert, defects in results:
        if cert is None or defects:
            return rep.fail("left-hand-side vertex without a valid decomposition", point=v, defects=defects)
        rep.witnesses.append({"direction": "lhs_vertex", "point": v, "certificate": cert.to_json()})

    # unbounded directions of the left-hand side must recede in the RHS too
    if lhs.rays:
        cones = [recession_cone_h(big) for big, _ in pools[:-1]]
        cones.append(recession_cone_h(pools[-1][0]))
        rhs_rec = minkowski_sum_all(cones, inst.dim)
        for w in lhs.rays:
            if not rhs_rec.contains_ray(w):
                return rep.fail("left-hand-side ray escapes the right-hand side", ray=w)
            p = add(verts[0], w)
            try:
                cert = decompose(inst, x, p, eps)
            except NotInSubdifferential:
                return rep.fail("point along a left-hand-side ray does not decompose", point=p)
            rep.witnesses.append({"direction": "lhs_ray", "ray": w, "certificate": cert.to_json()})
    return rep


# conjugate and epigraph formulas -------------------------------------------------

def inf_convolution_value(inst: IntegralInstance, xstar):
    """``min sum mu_t f_t*(y_t)`` over ``sum mu_t y_t = xstar``; ``+inf`` if infeasible."""
    xstar = vec(xstar)
    d, m = inst.dim, len(inst.atoms)
    block = d + 1
    n = m * block
    A, b = [], []
    for t, f in enumerate(inst.functions):
        g = conjugate_function(f)
        o = t * block
        for a, c in g.pieces:
            r = [Fraction(0)] * n
            r[o: o + d] = a
            r[o + d] = Fraction(-1)
            A.append(r)
            b.append(-c)
        for a, c in g.domain.h_rep:
            r = [Fraction(0)] * n
            r[o: o + d] = [Fraction(v) for v in a]
            A.append(r)
            b.append(Fraction(c))
    A_eq, b_eq = [], []
    for i in range(d):
        r = [Fraction(0)] * n
        for t, w in enumerate(inst.weights):
            r[t * block + i] = w
        A_eq.append(r)
        b_eq.append(xstar[i])
    cost = [Fraction(0)] * n
    for t, w in enumerate(inst.weights):
        cost[t * block + d] = w
    res = solve_lp(cost, A, b, A_eq, b_eq, n=n)
    if res.status == INFEASIBLE:
        return INF
    if res.status != OPTIMAL:
        # conjugates of proper functions are bounded below on the constraint set
        raise ValueError(f"infimal convolution LP ended with status {res.status}")
    return res.value


def check_conjugate_formula(inst: IntegralInstance, points: Sequence) -> CheckReport:
    rep = CheckReport("conjugate_formula")
    g = conjugate_function(inst.I_f)
    for s in points:
        lhs = value(g, s)
        rhs = inf_convolution_value(inst, s)
        if lhs != rhs:
            return rep.fail("conjugate differs from the infimal convolution", point=vec(s), conjugate=lhs, inf_convolution=rhs)
        rep.witnesses.append({"point": vec(s), "value": lhs})
    return rep


@dataclass(frozen=True)
class EpigraphSumSet:
    E: Polyhedron
    G: Polyhedron

    def vertical_completion_holds(self) -> bool:
        d = self.E.dim - 1
        up = Polyhedron.from_v([zeros(d + 1)], [tuple([0] * d + [1])], dim=d + 1)
        return equals(self.E, minkowski_sum(self.G, up))


def _graph_generators(f) -> Polyhedron:
    """Convex hull of the graph of ``f*``: lifted vertices and non-vertical rays."""
    g = conjugate_function(f)
    d = f.dim
    verts, rays = g.epigraph().v_rep
    gv = [tuple(v[:-1]) + (value(g, v[:-1]),) for v in verts]
    gr = []
    for r in rays:
        w = r[:-1]
        if any(w):
            # slope of f* along w at infinity: max over the pieces of <a, w>
            gr.append(tuple(Fraction(c) for c in w) + (max(dot(a, w) for a, _ in g.pieces),))
    return Polyhedron.from_v(gv, gr, dim=d + 1)


def build_epigraph_sets(inst: IntegralInstance) -> EpigraphSumSet:
    d = inst.dim
    E = minkowski_sum_all([scale(conjugate_function(f).epigraph(), w) for _, w, f in inst.items()], d + 1)
    G = minkowski_sum_all([scale(_graph_generators(f), w) for _, w, f in inst.items()], d + 1)
    return EpigraphSumSet(E, G)


def check_epigraph_formula(inst: IntegralInstance) -> CheckReport:
    rep = CheckReport("epigraph_formula")
    S = build_epigraph_sets(inst)
    if not S.vertical_completion_holds():
        return rep.fail("E differs from G plus the vertical ray")
    if not equals(S.E, conjugate_function(inst.I_f).epigraph()):
        return rep.fail("E differs from the epigraph of the conjugate of I_f")
    rep.witnesses.append({"E_vertices": list(S.E.vertices), "E_rays": list(S.E.rays)})
    return rep


# eps-normal sets ---------------------------------------------------------------

def _slack_segment(d: int, eps) -> Polyhedron:
    return Polyhedron.from_v([zeros(d + 1), tuple([0] * d + [q(eps)])], dim=d + 1)


def normal_set_forms(inst: IntegralInstance, x, eps, sets: Optional[EpigraphSumSet] = None) -> dict:
    x, eps = vec(x), q(eps)
    d = inst.dim
    if sets is None:
        sets = build_epigraph_sets(inst)
    return {
        "direct": eps_normal_dom(inst, x, eps),
        "support_epigraph": affine_slice(conjugate_function(indicator(inst.dom_If)).epigraph(), x, eps),
        "conjugate_recession": affine_slice(recession_cone_h(conjugate_function(inst.I_f).epigraph()), x, eps),
        "E_recession": affine_slice(recession_cone(sets.E), x, eps),
        "G_recession_slack": affine_slice(minkowski_sum(recession_cone(sets.G), _slack_segment(d, eps)), x, eps),
    }


def _compare_forms(rep: CheckReport, forms: dict) -> CheckReport:
    names = list(forms)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if not equals(forms[names[i]], forms[names[j]]):
                return rep.fail(
                    f"{names[i]} != {names[j]}",
                    pair=[names[i], names[j]],
                    h_reps={k: [list(a) + [b] for a, b in forms[k].h_rep] for k in (names[i], names[j])},
                )
    rep.witnesses.append({k: [list(a) + [b] for a, b in P.minimal().h_rep] for k, P in forms.items()})
    return rep


def normal_set_four_ways(inst: IntegralInstance, x, eps) -> CheckReport:
    rep = CheckReport("normal_set_four_ways")
    if not inst.dom_If.contains(x):
        return rep.fail("x is outside dom I_f", x=vec(x))
    return _compare_forms(rep, normal_set_forms(inst, x, eps))


def check_restricted_formula(inst: IntegralInstance, restriction: SubspaceRestriction, x, eps,
                             samples: int = 50, seed: int = 0) -> CheckReport:
    x, eps = vec(x), q(eps)
    rep = CheckReport("restricted_formula")
    L = restriction.L
    if not L.contains(x) or not inst.dom_If.contains(x):
        return rep.fail("x must lie in L and in dom I_f", x=x)
    aug = augment_with_indicator(inst, restriction)
    rep.merge(check_sum_rule(aug, x, eps, samples=samples, seed=seed), "augmented sum rule")
    rep.merge(normal_set_four_ways(aug, x, eps), "augmented normal sets")
    d = inst.dim
    direct = eps_normal(intersect(inst.dom_If, L), x, eps)
    perp_up = product(restriction.complement, Polyhedron.from_h([[-1]], [0], dim=1))
    S = build_epigraph_sets(inst)
    A_L = affine_slice(recession_cone(minkowski_sum(S.E, perp_up)), x, eps)
    B_L = affine_slice(
        minkowski_sum(recession_cone(minkowski_sum(S.G, perp_up)), _slack_segment(d, eps)), x, eps
    )
    forms = {"direct": direct, "augmented": eps_normal_dom(aug, x, eps), "A_L": A_L, "B_L": B_L}
    return _compare_forms(rep, forms)
