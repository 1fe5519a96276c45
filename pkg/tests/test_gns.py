"""Representation fibers over states and the fiber maps of arrows."""
import numpy as np
import pytest

from wstarkit import core, gns, groupoid, sampling

TOL = 1e-9


def _full_state(shape, seed):
    gen = sampling.rng(seed)
    return gns.State(sampling.random_density(shape, gen))


def test_fiber_dimension_counts_support():
    gen = sampling.rng(31)
    shape = (3,)
    rho_full = sampling.random_density(shape, gen)
    assert gns.gns_space(gns.State(rho_full)).dim == 9
    rho2 = sampling.random_density(shape, gen, full_rank=False, max_rank=2)
    assert gns.gns_space(gns.State(rho2)).dim == 6
    rho1 = sampling.random_density(shape, gen, full_rank=False, max_rank=1)
    assert gns.gns_space(gns.State(rho1)).dim == 3
    # block shapes add fiber dimensions n_b * rank_b
    mixed = sampling.random_density((2, 3), gen)
    assert gns.gns_space(gns.State(mixed)).dim == 2 * 2 + 3 * 3


def test_representation_is_an_algebra_map():
    sp = gns.gns_space(_full_state((2, 3), 32))
    gen = sampling.rng(33)
    x = sampling.random_element((2, 3), gen)
    y = sampling.random_element((2, 3), gen)
    rx, ry = gns.gns_rep(x, sp), gns.gns_rep(y, sp)
    rxy = gns.gns_rep(x * y, sp)
    assert np.linalg.norm(rx @ ry - rxy) < TOL
    one = gns.gns_rep(core.identity((2, 3)), sp)
    assert np.linalg.norm(one - np.eye(sp.dim)) < TOL
    # the inner product realizes the state
    radj = gns.gns_rep(x.adjoint(), sp)
    assert np.linalg.norm(radj - rx.conj().T) < TOL


def test_coordinates_round_trip():
    sp = gns.gns_space(_full_state((3,), 34))
    gen = sampling.rng(35)
    x = sampling.random_element((3,), gen)
    v = sp.coords(x)
    assert v.shape == (sp.dim,)
    back = sp.reconstruct(v)
    assert core.dist(back, x) < 1e-8


def test_arrow_fiber_map_unitary_and_functorial():
    gen = sampling.rng(36)
    shape = (3,)
    rho = sampling.random_density(shape, gen, full_rank=False, max_rank=2)
    src = gns.gns_space(gns.State(rho))
    u = sampling.random_partial_isometry_onto(core.support(rho), gen)
    phi, mid = gns.groupoid_rep_phi(u, src)
    assert np.linalg.norm(phi.conj().T @ phi - np.eye(src.dim)) < TOL
    assert core.dist(mid.state.density, u * rho * u.adjoint()) < TOL
    v = sampling.random_partial_isometry_onto(
        core.support(mid.state.density), gen)
    phi2, tgt = gns.groupoid_rep_phi(v, mid)
    chained, tgt2 = gns.groupoid_rep_phi(v * u, src, tgt=tgt)
    assert np.linalg.norm(phi2 @ phi - chained) < TOL
    # inverse arrow gives the inverse map
    psi, back = gns.groupoid_rep_phi(u.adjoint(), mid, tgt=src)
    assert np.linalg.norm(psi @ phi - np.eye(src.dim)) < TOL


def test_arrow_fiber_map_rejects_wrong_moment():
    gen = sampling.rng(37)
    rho = sampling.random_density((3,), gen, full_rank=False, max_rank=1)
    sp = gns.gns_space(gns.State(rho))
    u = sampling.random_partial_isometry((3,), gen, ranks=[2])
    with pytest.raises(core.DomainError):
        gns.groupoid_rep_phi(u, sp)


def test_faithfulness_tracks_support_join():
    gen = sampling.rng(38)
    shape = (2, 3)
    # a state living entirely in the first block kills the second block:
    # representation not injective, and the report must say so
    dead = core.matrix_unit(shape, 0, 0, 0).as_float()
    spaces = [gns.gns_space(gns.State(dead))]
    rep = gns.faithfulness_check(spaces)
    assert not rep["injective"]
    assert not rep["support_join_is_identity"]
    # adjoining a full-rank state restores injectivity and the join
    r2 = sampling.random_density(shape, gen)
    spaces.append(gns.gns_space(gns.State(r2)))
    rep2 = gns.faithfulness_check(spaces)
    assert rep2["pass"] and rep2["support_join_is_identity"] \
        and rep2["injective"]
    # any nonzero state on a single full block is already faithful there,
    # so a rank-(1,1) state on both blocks is injective without join = 1
    r3 = sampling.random_density(shape, gen, full_rank=False, max_rank=1)
    rep3 = gns.faithfulness_check([gns.gns_space(gns.State(r3))])
    assert rep3["injective"] and not rep3["support_join_is_identity"]


def test_commutant_check_accepts_transport_rejects_element():
    gen = sampling.rng(39)
    shape = (3,)
    rho = sampling.random_density(shape, gen, full_rank=False, max_rank=2)
    u = sampling.random_partial_isometry_onto(core.support(rho), gen)
    rho2 = u * rho * u.adjoint()
    spaces = [gns.gns_space(gns.State(rho)), gns.gns_space(gns.State(rho2))]
    phi, _ = gns.groupoid_rep_phi(u, spaces[0], tgt=spaces[1])
    op = gns.embed_fiber_map(phi, spaces, 0, 1)
    assert gns.commutant_check(op, spaces)
    bad = gns.direct_sum_rep(core.matrix_unit(shape, 0, 0, 1), spaces)
    assert not gns.commutant_check(bad, spaces)


def test_fiber_maps_separate_distinct_arrows():
    gen = sampling.rng(40)
    rho = sampling.random_density((3,), gen)
    sp = gns.gns_space(gns.State(rho))
    u1 = sampling.random_unitary((3,), gen)
    u2 = sampling.random_unitary((3,), gen)
    assert gns.fiber_map_separates(u1, u2, sp)
    assert not gns.fiber_map_separates(u1, u1, sp)
