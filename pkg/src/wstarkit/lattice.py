"""The projection lattice of a block algebra.

Order, meet/join, Murray-von Neumann equivalence with explicit partial
isometry witnesses, and the orbit invariants of the inner action. Orbits of
the unitary groupoid acting on projections are classified exactly by the
per-block rank vector, so the orbit order is the componentwise order on rank
vectors (it coincides with comparing unions of subprojection ideals in this
model and is total on single-block shapes).
"""
from __future__ import annotations

import numpy as np

from . import core
from .core import (
    DEFAULT_TOL,
    Element,
    DomainError,
    ToleranceConfig,
    UnsupportedBackend,
)


def check_projection(p: Element, tol: ToleranceConfig | None = None) -> Element:
    if not core.is_projection(p, tol):
        raise DomainError("not a projection")
    return p


def range_basis(p: Element, tol: ToleranceConfig | None = None):
    """Per-block orthonormal bases of range(p) as (n_b, r_b) arrays."""
    if p.backend != core.F64:
        p = p.as_float()
    tol = tol or DEFAULT_TOL
    svds = [np.linalg.svd(b) for b in p.blocks]
    # One cutoff for the whole element: a block that is numerically zero must
    # report rank 0 even though its own leading singular value is pure noise.
    scale = max([s[0] for _, s, _ in svds if s.size], default=0.0)
    cut = tol.eps_rank * max(scale, 1.0)
    out = []
    for U, s, _ in svds:
        r = int(np.sum(s > cut))
        out.append(U[:, :r])
    return out


def leq(p: Element, q: Element, tol: ToleranceConfig | None = None) -> bool:
    """Lattice order: p <= q iff pq = p."""
    return core.equal(p * q, p, tol)


def complement(p: Element) -> Element:
    return core.identity(p.shape, p.backend) - p


def join(p: Element, q: Element, tol: ToleranceConfig | None = None) -> Element:
    """Orthogonal projection onto range(p) + range(q)."""
    if p.backend == core.QQI:
        # exact join only for commuting pairs (no radicals available)
        if not core.equal(p * q, q * p):
            raise UnsupportedBackend(
                "exact join needs a commuting pair of projections"
            )
        return p + q - p * q
    tol = tol or DEFAULT_TOL
    bp, bq = range_basis(p, tol), range_basis(q, tol)
    blocks = []
    for a, b in zip(bp, bq):
        stacked = np.hstack([a, b])
        if stacked.shape[1] == 0:
            blocks.append(np.zeros((a.shape[0], a.shape[0]), dtype=complex))
            continue
        U, s, _ = np.linalg.svd(stacked)
        r = int(np.sum(s > tol.eps_rank * s[0]))
        blocks.append(U[:, :r] @ U[:, :r].conj().T)
    return Element(blocks, core.F64)


def meet(p: Element, q: Element, tol: ToleranceConfig | None = None) -> Element:
    if p.backend == core.QQI:
        if not core.equal(p * q, q * p):
            raise UnsupportedBackend(
                "exact meet needs a commuting pair of projections"
            )
        return p * q
    raw = complement(join(complement(p), complement(q), tol))
    # Snap to an exact projection: the complement route leaves roundoff noise
    # on blocks whose meet is zero, and noise-rank answers are worse than
    # useless downstream (range_basis floors its cutoff at unit scale).
    bases = range_basis(raw, tol)
    return Element([b @ b.conj().T for b in bases], core.F64)


def orbit_invariant(p: Element, tol: ToleranceConfig | None = None):
    """Per-block rank vector classifying the inner-action orbit of p."""
    check_projection(p, tol)
    return core.rank_vector(p, tol)


def orbit_order(rp, rq) -> str:
    """Componentwise comparison: 'equal' | 'less' | 'greater' | 'incomparable'."""
    rp, rq = tuple(rp), tuple(rq)
    if len(rp) != len(rq):
        raise core.ShapeError("rank vectors over different shapes")
    if rp == rq:
        return "equal"
    if all(a <= b for a, b in zip(rp, rq)):
        return "less"
    if all(a >= b for a, b in zip(rp, rq)):
        return "greater"
    return "incomparable"


def mvn_equivalent(p: Element, q: Element, tol: ToleranceConfig | None = None):
    """Murray-von Neumann equivalence p ~ q.

    Returns (bool, witness): equivalent iff the rank vectors agree blockwise;
    the witness is a partial isometry u with u*u = p and uu* = q, built by
    mapping an orthonormal basis of range(p) column-to-column onto one of
    range(q). Witness construction runs on the float backend.
    """
    if p.shape != q.shape:
        raise core.ShapeError("projections over different shapes")
    check_projection(p, tol)
    check_projection(q, tol)
    if orbit_invariant(p, tol) != orbit_invariant(q, tol):
        return False, None
    bp = range_basis(p.as_float(), tol)
    bq = range_basis(q.as_float(), tol)
    u = Element([b @ a.conj().T for a, b in zip(bp, bq)], core.F64)
    return True, u
