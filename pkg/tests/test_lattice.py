"""Projection lattice: order, meet/join, equivalence orbits."""
import numpy as np

from wstarkit import core, lattice, sampling

TOL = 1e-9


def test_leq_and_complement():
    gen = sampling.rng(21)
    p = sampling.random_projection((3,), gen, ranks=[2])
    q = core.support(p * sampling.random_positive((3,), gen) * p)
    assert lattice.leq(q, p)
    assert not lattice.leq(core.identity((3,)), p)
    c = lattice.complement(p)
    assert core.is_projection(c)
    assert core.dist(p + c, core.identity((3,))) < TOL
    assert core.dist(p * c, core.zeros((3,))) < TOL


def test_meet_join_lattice_laws():
    gen = sampling.rng(22)
    for _ in range(15):
        p = sampling.random_projection((2, 3), gen)
        q = sampling.random_projection((2, 3), gen)
        m = lattice.meet(p, q)
        j = lattice.join(p, q)
        assert core.is_projection(m) and core.is_projection(j)
        assert lattice.leq(m, p) and lattice.leq(m, q)
        assert lattice.leq(p, j) and lattice.leq(q, j)
        # absorption
        assert core.dist(lattice.meet(p, j), p) < 1e-7
        assert core.dist(lattice.join(p, m), p) < 1e-7
        # rank identity rank(p) + rank(q) = rank(p v q) + rank(p ^ q)
        rp, rq = core.rank_vector(p), core.rank_vector(q)
        rj, rm = core.rank_vector(j), core.rank_vector(m)
        assert tuple(a + b for a, b in zip(rp, rq)) == \
            tuple(a + b for a, b in zip(rj, rm))


def test_meet_of_transverse_projections_is_zero():
    # two distinct lines in C^2 intersect only at the origin
    p = core.Element([np.array([[1.0, 0], [0, 0]], dtype=complex)], core.F64)
    v = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    q = core.Element([v], core.F64)
    m = lattice.meet(p, q)
    assert core.rank_vector(m) == (0,)
    assert core.rank_vector(lattice.join(p, q)) == (2,)


def test_mvn_equivalence_by_rank():
    gen = sampling.rng(23)
    p = sampling.random_projection((2, 3), gen, ranks=[1, 2])
    q = sampling.random_projection((2, 3), gen, ranks=[1, 2])
    ok, u = lattice.mvn_equivalent(p, q)
    assert ok
    assert core.dist(u.adjoint() * u, p) < 1e-8
    assert core.dist(u * u.adjoint(), q) < 1e-8
    r = sampling.random_projection((2, 3), gen, ranks=[2, 2])
    ok2, w = lattice.mvn_equivalent(p, r)
    assert not ok2 and w is None


def test_orbit_order_classification():
    assert lattice.orbit_order((1, 2), (1, 2)) == "equal"
    assert lattice.orbit_order((0, 1), (1, 2)) == "less"
    assert lattice.orbit_order((2, 2), (1, 2)) == "greater"
    assert lattice.orbit_order((2, 0), (1, 2)) == "incomparable"
    gen = sampling.rng(24)
    p = sampling.random_projection((2, 3), gen, ranks=[1, 1])
    assert lattice.orbit_invariant(p) == (1, 1)
