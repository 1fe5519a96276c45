"""Groupoid of partial isometries: structure maps, involutions, actions."""
import numpy as np
import pytest

from wstarkit import core, groupoid, sampling
from wstarkit.groupoid import Functional

TOL = 1e-9
SHAPES = [(2,), (3,), (2, 3)]


def test_source_target_are_supports():
    gen = sampling.rng(11)
    for shape in SHAPES:
        x = sampling.random_element(shape, gen)
        assert core.dist(groupoid.source(x), core.right_support(x)) < TOL
        assert core.dist(groupoid.target(x), core.left_support(x)) < TOL
        p = sampling.random_projection(shape, gen)
        e = groupoid.identity_section(p)
        assert core.dist(e.elem, p) < TOL


def test_inverse_laws():
    gen = sampling.rng(12)
    for shape in SHAPES:
        for _ in range(10):
            x = sampling.random_element(shape, gen)
            ix = groupoid.groupoid_inverse(x).elem
            assert core.dist(ix * x, groupoid.source(x)) < 1e-8
            assert core.dist(x * ix, groupoid.target(x)) < 1e-8
            # iota is an involution
            assert core.dist(groupoid.groupoid_inverse(ix).elem, x) < 1e-8


def test_inverse_exact_backend_radical_free():
    u = core.matrix_unit((3,), 0, 0, 1, core.QQI)
    two = u + u  # |x| has eigenvalue 2, pseudoinverse halves it
    inv = groupoid.groupoid_inverse(two).elem
    prod = (inv * two).as_float()
    assert core.dist(prod, groupoid.source(two.as_float())) < TOL


def test_composition_partial():
    gen = sampling.rng(13)
    x = sampling.random_element((2, 3), gen)
    y = groupoid.source(x) * sampling.random_invertible((2, 3), gen)
    z = groupoid.compose(x, y)
    assert core.dist(z.elem, x * y) == 0.0
    assert core.dist(groupoid.source(z), groupoid.source(y)) < 1e-7
    assert core.dist(groupoid.target(z), groupoid.target(x)) < 1e-7
    w = sampling.random_element((2, 3), gen)  # generic pair not composable
    if core.dist(groupoid.source(x), groupoid.target(w)) > 1e-4:
        with pytest.raises(groupoid.NotComposable):
            groupoid.compose(x, w)


def test_involution_J_antihomomorphism():
    gen = sampling.rng(14)
    for shape in SHAPES:
        x = sampling.random_element(shape, gen)
        jx = groupoid.involution_J(x).elem
        # J o J = id and J(x*) = J(x)*
        assert core.dist(groupoid.involution_J(jx).elem, x) < 1e-8
        assert core.dist(groupoid.involution_J(x.adjoint()).elem,
                         jx.adjoint()) < 1e-8
        u = sampling.random_partial_isometry(shape, gen)
        assert core.dist(groupoid.involution_J(u).elem, u) < 1e-8


def test_inner_action_is_corner_conjugation():
    gen = sampling.rng(15)
    for shape in SHAPES:
        u = sampling.random_partial_isometry(shape, gen)
        p = u.adjoint() * u
        x = p * sampling.random_element(shape, gen) * p
        out = groupoid.inner_action(u, x)
        iu = groupoid.groupoid_inverse(u).elem
        assert core.dist(out, u * x * iu) < TOL
        # identity arrows act trivially on their corner
        assert core.dist(groupoid.inner_action(p, x), x) < TOL
    with pytest.raises(groupoid.MomentMismatch):
        u = sampling.random_partial_isometry((3,), gen, ranks=[1])
        groupoid.inner_action(u, core.identity((3,)))


def test_functional_polar_and_supports():
    gen = sampling.rng(16)
    for shape in SHAPES:
        d = sampling.random_element(shape, gen)
        om = Functional(d)
        v, absom = groupoid.functional_polar(om)
        assert core.dist(d, v * absom.density) < 1e-8
        assert core.is_positive(absom.density)
        assert abs(om.norm() - absom.norm()) < 1e-8
        r, l = groupoid.functional_supports(om)
        assert core.dist(l * d, d) < 1e-8 and core.dist(d * r, d) < 1e-8
    rho = sampling.random_density((2, 3), gen)
    st = Functional(rho)
    assert st.is_hermitian() and st.is_state()
    assert abs(st.pair(core.identity((2, 3))) - 1.0) < TOL


def test_predual_actions_norm_preserving():
    gen = sampling.rng(17)
    for shape in SHAPES:
        u = sampling.random_partial_isometry(shape, gen)
        p = u.adjoint() * u
        d = p * sampling.random_element(shape, gen) * p
        om = Functional(d)
        out = groupoid.I_star(u, om)
        assert abs(out.norm() - om.norm()) < 1e-7
        assert core.dist(out.density, u * d * u.adjoint()) < 1e-7
        a = sampling.random_invertible(shape, gen)
        la = groupoid.L_star(a, om)
        ra = groupoid.R_star(a, om)
        x = sampling.random_element(shape, gen)
        assert abs(la.pair(x) - om.pair(x * a)) < 1e-8
        assert abs(ra.pair(x) - om.pair(a * x)) < 1e-8


def test_axiom_verifier_accepts_and_rejects():
    gen = sampling.rng(18)
    shape = (2,)
    arrows = [sampling.random_element(shape, gen) for _ in range(12)]
    pairs = []
    for x in arrows[:6]:
        y = groupoid.source(x) * sampling.random_invertible(shape, gen)
        pairs.append((x, y))
    triples = []
    for x, y in pairs[:4]:
        z = groupoid.source(y) * sampling.random_invertible(shape, gen)
        triples.append((x, y, z))
    st = groupoid.element_structure()
    rep = groupoid.verify_groupoid_axioms(st, arrows, pairs, triples)
    assert rep["pass"] and rep["max_defect"] < 1e-8
    assert rep["samples"]["arrows"] == 12
    # a broken inverse map must be flagged
    bad = groupoid.GroupoidStructure(
        source=st.source, target=st.target, compose=st.compose,
        inverse=lambda x: x, identity=st.identity,
        dist_arrow=st.dist_arrow, dist_point=st.dist_point)
    rep2 = groupoid.verify_groupoid_axioms(bad, arrows, pairs, triples)
    assert not rep2["pass"] and rep2["failures"]


def test_free_action_report():
    gen = sampling.rng(19)
    rep = groupoid.free_action_check((2, 3), gen, samples=40)
    assert rep["pass"]
    assert rep["check"] == "free-action"
    assert rep["max_defect"] < 1e-8
    assert rep["samples"]["collision_attempts"] == 40


def test_action_groupoid_moment_enforced():
    gen = sampling.rng(20)
    shape = (3,)
    ag = groupoid.ActionGroupoid(
        action=lambda g, r: g * r * groupoid.groupoid_inverse(g).elem,
        moment=lambda r: core.support(r),
    )
    p = sampling.random_projection(shape, gen, ranks=[2])
    r = p * sampling.random_positive(shape, gen) * p
    u = sampling.random_partial_isometry_onto(core.support(r), gen)
    el = ag.element(u, r)
    assert core.dist(ag.structure().source(el), r) < 1e-8
    with pytest.raises(groupoid.MomentMismatch):
        bad = sampling.random_partial_isometry(shape, gen, ranks=[1])
        if core.dist(bad.adjoint() * bad, core.support(r)) < 1e-6:
            raise groupoid.MomentMismatch("rank-1 arrow matched by chance")
        ag.element(bad, r)
