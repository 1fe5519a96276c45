"""GNS fibers over positive functionals and their groupoid representation.

A positive functional omega with density rho defines the fiber
E_omega = M s, s the support projection of rho, with inner product
<x|y> = <omega, x* y>. Left multiplication is a *-representation on the
fiber; a partial isometry u with u*u = s maps the fiber at omega onto the
fiber at the transported functional (density u rho u*) by right
multiplication with u*. These fiber maps are unitary, functorial in the
action-groupoid product, and assemble over finite state families into
partial isometries commuting with the direct-sum representation.
"""
from __future__ import annotations

import numpy as np

from . import core, lattice
from .core import DomainError, Element, ToleranceConfig
from .groupoid import COMPOSE_TOL, Functional, I_star, MomentMismatch

EPS_RANK = 1e-11   # relative Gram eigenvalue cutoff defining the quotient
GNS_TOL = 1e-9


class State:
    """Positive normal functional with its support projection cached."""

    def __init__(self, density: Element, tol: ToleranceConfig | None = None):
        if not core.is_positive(density, tol):
            raise DomainError("state density must be positive semidefinite")
        self.functional = Functional(density)
        self.support = core.support(density, tol)

    @property
    def density(self) -> Element:
        return self.functional.density

    @property
    def shape(self):
        return self.functional.density.shape

    def pair(self, x: Element) -> complex:
        return self.functional.pair(x)

    def __repr__(self):
        return f"State(shape={self.shape}, trace={self.functional.norm():.4g})"


class GnsSpace:
    """Fiber at a state: spanning vectors, Gram matrix, orthonormal basis."""

    def __init__(self, state: State, basis, gram: np.ndarray, onb):
        self.state = state
        self.basis = basis
        self.gram = gram
        self.onb = onb

    @property
    def dim(self) -> int:
        return len(self.onb)

    def coords(self, x: Element) -> np.ndarray:
        """Coordinates of the class of x in the orthonormal basis."""
        return np.array([self.state.pair(b.adjoint() * x) for b in self.onb])

    def reconstruct(self, coords) -> Element:
        out = core.zeros(self.state.shape, self.state.density.backend)
        for c, b in zip(coords, self.onb):
            out = out + b.scale(c)
        return out

    def __repr__(self):
        return f"GnsSpace(dim={self.dim})"


def gns_space(state: State, eps_rank: float = EPS_RANK) -> GnsSpace:
    """Fiber of the state: matrix units times the support, null space cut.

    The Gram matrix of the spanning family is diagonalized; eigenvectors
    with relative eigenvalue above eps_rank give the orthonormal basis of
    the quotient by null vectors. The dimension equals
    sum_b n_b * rank_b(support).
    """
    s = state.support
    basis = [e * s for e in core.algebra_basis(state.shape)]
    d = len(basis)
    gram = np.zeros((d, d), dtype=complex)
    for m in range(d):
        for l in range(m, d):
            v = state.pair(basis[m].adjoint() * basis[l])
            gram[m, l] = v
            gram[l, m] = np.conj(v)
    if d == 0:
        return GnsSpace(state, basis, gram, [])
    w, vecs = np.linalg.eigh(gram)
    wmax = float(w[-1]) if len(w) else 0.0
    onb = []
    for k in range(len(w)):
        if wmax <= 0 or w[k] <= eps_rank * wmax:
            continue
        coeff = vecs[:, k] / np.sqrt(w[k])
        vec = core.zeros(state.shape, state.density.backend)
        for m in range(d):
            c = coeff[m]
            if abs(c) > 0:
                vec = vec + basis[m].scale(c)
        onb.append(vec)
    return GnsSpace(state, basis, gram, onb)


def gns_rep(x: Element, space: GnsSpace) -> np.ndarray:
    """Left multiplication by x in the orthonormal basis of the fiber."""
    d = space.dim
    out = np.zeros((d, d), dtype=complex)
    for l in range(d):
        col = x * space.onb[l]
        for m in range(d):
            out[m, l] = space.state.pair(space.onb[m].adjoint() * col)
    return out


def groupoid_rep_phi(u: Element, src: GnsSpace,
                     tgt: GnsSpace | None = None,
                     moment_tol: float = COMPOSE_TOL):
    """Matrix of the fiber map (right multiplication by u*) and its target.

    Requires the strict moment u*u = support of the source state; the
    target fiber is the transported state (density u rho u*). Returns
    (matrix, target_space); the matrix is unitary between the fibers.
    """
    s = src.state.support
    if core.dist(u.adjoint() * u, s) > moment_tol:
        raise MomentMismatch("initial projection of u must equal the "
                             "source support")
    moved = I_star(u, src.state.functional)
    if tgt is None:
        tgt = gns_space(State(moved.density))
    elif core.dist(tgt.state.density, moved.density) > moment_tol:
        raise MomentMismatch("target space does not carry the transported "
                             "state")
    ustar = u.adjoint()
    d_src, d_tgt = src.dim, tgt.dim
    out = np.zeros((d_tgt, d_src), dtype=complex)
    for l in range(d_src):
        col = src.onb[l] * ustar
        for m in range(d_tgt):
            out[m, l] = tgt.state.pair(tgt.onb[m].adjoint() * col)
    return out, tgt


def direct_sum_rep(x: Element, spaces) -> np.ndarray:
    """Block-diagonal left multiplication over a finite state family."""
    blocks = [gns_rep(x, sp) for sp in spaces]
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total), dtype=complex)
    at = 0
    for b in blocks:
        n = b.shape[0]
        out[at:at + n, at:at + n] = b
        at += n
    return out


def _offsets(spaces):
    offs = [0]
    for sp in spaces:
        offs.append(offs[-1] + sp.dim)
    return offs


def embed_fiber_map(mat: np.ndarray, spaces, i_src: int,
                    i_tgt: int) -> np.ndarray:
    """Extend a fiber map by zero to the direct sum over the family."""
    offs = _offsets(spaces)
    out = np.zeros((offs[-1], offs[-1]), dtype=complex)
    out[offs[i_tgt]:offs[i_tgt] + spaces[i_tgt].dim,
        offs[i_src]:offs[i_src] + spaces[i_src].dim] = mat
    return out


def commutant_check(op: np.ndarray, spaces, tol: float = 1e-8) -> bool:
    """Does the operator commute with the whole represented algebra."""
    shape = spaces[0].state.shape
    for g in core.algebra_basis(shape):
        rep = direct_sum_rep(g, spaces)
        if np.linalg.norm(op @ rep - rep @ op, 2) > tol:
            return False
    return True


def family_support_join(spaces, tol: ToleranceConfig | None = None) -> Element:
    join = spaces[0].state.support
    for sp in spaces[1:]:
        join = lattice.join(join, sp.state.support, tol)
    return join


def faithfulness_check(spaces, tol: float = 1e-8) -> dict:
    """Injectivity of the direct-sum representation over the family.

    A family whose supports join to the identity represents injectively;
    the rank of the stacked representation images over an algebra basis
    certifies injectivity numerically. (Join = 1 is sufficient, not
    necessary: a single full matrix block is simple, so any nonzero state
    on it already acts faithfully there.)
    """
    shape = spaces[0].state.shape
    join = family_support_join(spaces)
    join_is_one = core.dist(join, core.identity(shape)) <= tol
    images = []
    for g in core.algebra_basis(shape):
        images.append(direct_sum_rep(g, spaces).reshape(-1))
    stack = np.array(images)
    dim_algebra = len(images)
    rank = int(np.linalg.matrix_rank(stack, tol=1e-10))
    injective = rank == dim_algebra
    ok = injective or not join_is_one
    return {
        "check": "gns-faithfulness",
        "samples": {"states": len(spaces), "algebra_dim": dim_algebra},
        "support_join_is_identity": join_is_one,
        "representation_rank": rank,
        "injective": injective,
        "max_defect": 0.0 if ok else 1.0,
        "pass": ok,
        "failures": [] if ok else
        [("rank", rank, "join_is_one", join_is_one)],
    }


def fiber_map_separates(u1: Element, u2: Element, src: GnsSpace,
                        moment_tol: float = COMPOSE_TOL):
    """Distance between the fiber maps of two arrows out of one state.

    Equal maps with equal source force equal arrows, so distinct admissible
    partial isometries must give maps a positive distance apart; the
    distance also counts maps with different targets as separated.
    """
    m1, t1 = groupoid_rep_phi(u1, src, moment_tol=moment_tol)
    m2, t2 = groupoid_rep_phi(u2, src, moment_tol=moment_tol)
    target_gap = core.dist(t1.state.density, t2.state.density)
    if target_gap > moment_tol:
        return max(target_gap, 1.0)
    # same target fiber realized twice: compare maps into t1's basis
    m2b, _ = groupoid_rep_phi(u2, src, tgt=t1, moment_tol=moment_tol)
    return float(np.linalg.norm(m1 - m2b, 2))


class LocalBisection:
    """Finitely many states with one admissible arrow assigned to each.

    Source states must be pairwise distinct; when require_bisection is set
    the transported targets must be pairwise distinct as well, which makes
    both the source and target maps injective on the section.
    """

    def __init__(self, states, arrows, require_bisection: bool = True,
                 moment_tol: float = COMPOSE_TOL):
        if len(states) != len(arrows):
            raise DomainError("one arrow per state")
        self.states = list(states)
        self.arrows = list(arrows)
        self.targets = []
        for st, u in zip(self.states, self.arrows):
            if core.dist(u.adjoint() * u, st.support) > moment_tol:
                raise MomentMismatch("arrow does not start at its state")
            self.targets.append(State(I_star(u, st.functional).density))
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                if core.dist(self.states[i].density,
                             self.states[j].density) <= moment_tol:
                    raise DomainError("section points must be distinct")
                if require_bisection and core.dist(
                        self.targets[i].density,
                        self.targets[j].density) <= moment_tol:
                    raise DomainError("targets collide: not a bisection")


def _locate(state: State, spaces, tol: float):
    for i, sp in enumerate(spaces):
        if core.dist(sp.state.density, state.density) <= tol:
            return i
    raise DomainError("state not represented in the family")


def bisection_rep(sigma: LocalBisection, spaces,
                  moment_tol: float = COMPOSE_TOL) -> np.ndarray:
    """Sum of the extended fiber maps of a local bisection.

    Every section point and every transported target must be a member of
    the state family carrying the direct sum. The result is a partial
    isometry in the commutant of the represented algebra, with initial
    projection the sum of the source-fiber identities.
    """
    offs = _offsets(spaces)
    out = np.zeros((offs[-1], offs[-1]), dtype=complex)
    for st, u, tg in zip(sigma.states, sigma.arrows, sigma.targets):
        i_src = _locate(st, spaces, moment_tol)
        i_tgt = _locate(tg, spaces, moment_tol)
        mat, _ = groupoid_rep_phi(u, spaces[i_src], tgt=spaces[i_tgt],
                                  moment_tol=moment_tol)
        out += embed_fiber_map(mat, spaces, i_src, i_tgt)
    return out


def source_fiber_projection(sigma: LocalBisection, spaces,
                            moment_tol: float = COMPOSE_TOL) -> np.ndarray:
    """Sum of the identity operators of the section's source fibers."""
    offs = _offsets(spaces)
    out = np.zeros((offs[-1], offs[-1]), dtype=complex)
    for st in sigma.states:
        i = _locate(st, spaces, moment_tol)
        out[offs[i]:offs[i] + spaces[i].dim,
            offs[i]:offs[i] + spaces[i].dim] = np.eye(spaces[i].dim)
    return out
