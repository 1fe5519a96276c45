"""Random generators deliver what their names promise, reproducibly."""
import numpy as np

from wstarkit import core, sampling

TOL = 1e-9


def test_reproducible():
    a = sampling.random_element((2, 3), sampling.rng(7))
    b = sampling.random_element((2, 3), sampling.rng(7))
    assert core.dist(a, b) == 0.0


def test_structured_samples():
    gen = sampling.rng(61)
    shape = (2, 3)
    h = sampling.random_hermitian(shape, gen)
    assert core.is_hermitian(h)
    pos = sampling.random_positive(shape, gen)
    assert core.is_positive(pos)
    u = sampling.random_unitary(shape, gen)
    assert core.is_unitary(u)
    p = sampling.random_projection(shape, gen, ranks=[1, 2])
    assert core.is_projection(p) and core.rank_vector(p) == (1, 2)
    w = sampling.random_partial_isometry(shape, gen, ranks=[2, 1])
    assert core.is_partial_isometry(w)
    assert core.rank_vector(w) == (2, 1)


def test_density_trace_and_rank():
    gen = sampling.rng(62)
    rho = sampling.random_density((2, 3), gen)
    assert abs(rho.trace() - 1.0) < TOL
    assert core.is_positive(rho)
    assert core.rank_vector(rho) == (2, 3)
    low = sampling.random_density((3,), gen, full_rank=False, max_rank=2)
    assert core.rank_vector(low) == (2,)
    assert abs(low.trace() - 1.0) < TOL


def test_invertible_is_well_conditioned():
    gen = sampling.rng(63)
    g = sampling.random_invertible((2, 3), gen, min_sv=0.1)
    for b in g.blocks:
        s = np.linalg.svd(b, compute_uv=False)
        assert s[-1] > 0.05


def test_partial_isometry_onto_hits_requested_initial():
    gen = sampling.rng(64)
    p = sampling.random_projection((2, 3), gen, ranks=[1, 2])
    u = sampling.random_partial_isometry_onto(p, gen)
    assert core.dist(u.adjoint() * u, p) < TOL
    assert core.rank_vector(u) == core.rank_vector(p)


def test_exact_samples_on_rational_backend():
    gen = sampling.rng(65)
    x = sampling.random_exact_element((2,), gen)
    assert x.backend == core.QQI
    u = sampling.random_exact_partial_isometry((2, 3), gen)
    assert u.backend == core.QQI
    assert (u * u.adjoint() * u).key() == u.key()
    p = u.adjoint() * u
    assert (p * p).key() == p.key() and p.adjoint().key() == p.key()
