"""Charts on the projection lattice and on the groupoid of an algebra.

A projection q lies in the chart around p when range(q) and range(1-p)
split the space. The splitting idempotent E (range = range(q), kernel =
range(1-p)) decomposes p = x - y with x = E p in qMp invertible as an
arrow p -> q and y = (E - 1) p in (1-p)Mp; y is the chart coordinate and
x the section through it. Arrow charts put x into the triple
(y_t, z, y) = (target coordinate, compressed arrow, source coordinate).
Transitions between overlapping charts have closed forms checked against
recomputation, and the involution x -> iota(x)* expressed in coordinates
has a derivative squaring to the identity at partial isometries.
"""
from __future__ import annotations

import numpy as np

from . import core, lattice
from .core import DomainError, Element, ToleranceConfig
from .groupoid import groupoid_inverse

CHART_TOL = 1e-8
FD_STEP = 1e-5


class ChartDomainError(DomainError):
    pass


def _iota(x: Element, tol: ToleranceConfig | None = None) -> Element:
    return groupoid_inverse(x, tol).elem


def in_chart_domain(q: Element, p: Element,
                    tol: ToleranceConfig | None = None) -> bool:
    """q V (1-p) = 1 and q ^ (1-p) = 0: the two ranges split the space."""
    comp = lattice.complement(p)
    meet = lattice.meet(q, comp, tol)
    if not core.is_zero(meet, tol):
        return False
    join = lattice.join(q, comp, tol)
    return core.equal(join, core.identity(q.shape, q.backend), tol)


def splitting_idempotent(q: Element, p: Element,
                         tol: ToleranceConfig | None = None) -> Element:
    """E with range(E) = range(q) and kernel(E) = range(1-p), blockwise."""
    if q.backend != core.F64:
        raise core.UnsupportedBackend("charts run on the float backend")
    comp = lattice.complement(p)
    bq = lattice.range_basis(q, tol)
    bn = lattice.range_basis(comp, tol)
    blocks = []
    for base_q, base_n, n in zip(bq, bn, q.shape):
        r = base_q.shape[1]
        if r + base_n.shape[1] != n:
            raise ChartDomainError("ranges do not span the block")
        c = np.hstack([base_q, base_n])
        try:
            cinv = np.linalg.inv(c)
        except np.linalg.LinAlgError:
            raise ChartDomainError("ranges overlap: no splitting") from None
        blocks.append(base_q @ cinv[:r, :])
    return Element(blocks, core.F64)


def chart_phi(p: Element, q: Element,
              tol: ToleranceConfig | None = None) -> Element:
    """Chart coordinate y = (E - 1) p of q around p; lives in (1-p)Mp."""
    e = splitting_idempotent(q, p, tol)
    return (e - core.identity(p.shape)) * p


def section_sigma(p: Element, q: Element,
                  tol: ToleranceConfig | None = None) -> Element:
    """Section x = E p through the chart: an arrow with source p, target q."""
    return splitting_idempotent(q, p, tol) * p


def chart_phi_inv(p: Element, y: Element,
                  tol: ToleranceConfig | None = None) -> Element:
    """Inverse chart map: the left support of p + y."""
    return core.left_support(p + y, tol)


def lattice_transition(p: Element, p2: Element, y: Element,
                       tol: ToleranceConfig | None = None,
                       check_domain: bool = True) -> Element:
    """Coordinate of the same projection in the chart around p2.

    Closed form (b + d y) iota(a + c y) built from the corner blocks
    a = p2 p, b = (1-p2) p, c = p2 (1-p), d = (1-p2)(1-p).
    """
    if check_domain:
        q = chart_phi_inv(p, y, tol)
        if not (in_chart_domain(q, p, tol) and in_chart_domain(q, p2, tol)):
            raise ChartDomainError("point is outside the chart overlap")
    one = core.identity(p.shape)
    a = p2 * p
    b = (one - p2) * p
    c = p2 * (one - p)
    d = (one - p2) * (one - p)
    return (b + d * y) * _iota(a + c * y, tol)


def groupoid_chart_psi(pt: Element, p: Element, x: Element,
                       tol: ToleranceConfig | None = None):
    """Coordinates (y_t, z, y) of an arrow whose target/source lie in the
    charts around pt and p; z = iota(sigma_t) x sigma is the compressed
    arrow in pt M p."""
    tgt = core.left_support(x, tol)
    src = core.right_support(x, tol)
    if not in_chart_domain(src, p, tol):
        raise ChartDomainError("source outside the chart around p")
    if not in_chart_domain(tgt, pt, tol):
        raise ChartDomainError("target outside the chart around pt")
    sig_t = section_sigma(pt, tgt, tol)
    sig = section_sigma(p, src, tol)
    y_t = sig_t - pt
    y = sig - p
    z = _iota(sig_t, tol) * x * sig
    return y_t, z, y


def groupoid_chart_psi_inv(pt: Element, p: Element, y_t: Element,
                           z: Element, y: Element,
                           tol: ToleranceConfig | None = None) -> Element:
    """Arrow with coordinates (y_t, z, y): (pt + y_t) z iota(p + y)."""
    return (pt + y_t) * z * _iota(p + y, tol)


def groupoid_transition(pt, p, pt2, p2, y_t, z, y,
                        tol: ToleranceConfig | None = None):
    """The same arrow's coordinates in the chart pair (pt2, p2)."""
    y_t2 = lattice_transition(pt, pt2, y_t, tol)
    y2 = lattice_transition(p, p2, y, tol)
    z2 = (_iota(pt2 + y_t2, tol) * (pt + y_t) * z
          * _iota(p + y, tol) * (p2 + y2))
    return y_t2, z2, y2


def involution_chart(pt: Element, p: Element, y_t: Element, z: Element,
                     y: Element, tol: ToleranceConfig | None = None):
    """x -> iota(x)* conjugated into coordinates; fixes y_t and y."""
    x = groupoid_chart_psi_inv(pt, p, y_t, z, y, tol)
    jx = _iota(x, tol).adjoint()
    return groupoid_chart_psi(pt, p, jx, tol)


def involution_chart_closed_form(pt, p, y_t, z, y,
                                 tol: ToleranceConfig | None = None):
    """Same involution via the display: z -> iota(g_t^2) iota(z*) g^2 with
    g^2 = (p+y)*(p+y) and g_t^2 = (pt+y_t)*(pt+y_t)."""
    sig = p + y
    sig_t = pt + y_t
    g2 = sig.adjoint() * sig
    gt2 = sig_t.adjoint() * sig_t
    z_new = core.pinv_positive(gt2, tol) * _iota(z.adjoint(), tol) * g2
    return y_t, z_new, y


def unitary_coordinate(pt, p, y_t, z, y,
                       tol: ToleranceConfig | None = None) -> Element:
    """u = g_t z g^{-1}: rescaled compressed arrow; a partial isometry
    exactly when the arrow is one."""
    sig = p + y
    sig_t = pt + y_t
    g = core.sqrt_positive(sig.adjoint() * sig, tol)
    gt = core.sqrt_positive(sig_t.adjoint() * sig_t, tol)
    return gt * z * core.pinv_positive(g, tol)


# --- tangent directions and the involution derivative -------------------------

def corner_basis(left_p: Element, right_p: Element,
                 tol: ToleranceConfig | None = None):
    """Orthonormal (Frobenius) basis of the corner left_p M right_p."""
    lbases = lattice.range_basis(left_p, tol)
    rbases = lattice.range_basis(right_p, tol)
    out = []
    shape = left_p.shape
    for bi, (lb, rb) in enumerate(zip(lbases, rbases)):
        for i in range(lb.shape[1]):
            for j in range(rb.shape[1]):
                mat = np.outer(lb[:, i], rb[:, j].conj())
                out.append(core.embed_block(shape, bi, mat))
    return out


def _triple_add(t1, t2, scale):
    return tuple(a + b.scale(scale) for a, b in zip(t1, t2))


def _triple_norm(t):
    return float(np.sqrt(sum(core.opnorm(a) ** 2 for a in t)))


def _triple_dist(t1, t2):
    return _triple_norm(tuple(a - b for a, b in zip(t1, t2)))


def involution_derivative_check(u: Element, h: float = FD_STEP,
                                tol: ToleranceConfig | None = None,
                                directions=None) -> dict:
    """Finite-difference check that the involution's derivative squares
    to the identity at a partial isometry.

    The chart is centered at u (bases = source and target of u, so the
    point is (0, u, 0)); the derivative is real-linear, so directions run
    over a corner basis of each coordinate slot and its i-multiple.
    Returns a report with the worst relative defect of (DJ)^2 - 1, and the
    defect of the closed-form display of the involution at the same point.
    """
    if h <= 0 or h < 1e-12:
        raise DomainError("finite-difference step underflow")
    p = core.right_support(u, tol)
    pt = core.left_support(u, tol)
    one = core.identity(u.shape)
    zero = core.zeros(u.shape)
    point = (zero, u, zero)

    def jmap(t):
        return involution_chart(pt, p, *t, tol=tol)

    def dj(at, direction, scale=1.0):
        plus = jmap(_triple_add(at, direction, h * scale))
        minus = jmap(_triple_add(at, direction, -h * scale))
        return tuple((a - b).scale(1.0 / (2 * h * scale))
                     for a, b in zip(plus, minus))

    if directions is None:
        directions = []
        for slot, (lp, rp) in enumerate(
                ((one - pt, pt), (pt, p), (one - p, p))):
            for b in corner_basis(lp, rp, tol):
                for c in (1.0, 1.0j):
                    d = [zero, zero, zero]
                    d[slot] = b.scale(c)
                    directions.append(tuple(d))

    worst = 0.0
    for d in directions:
        first = dj(point, d)
        n1 = _triple_norm(first)
        if n1 < 1e-14:
            worst = max(worst, 1.0)  # derivative collapsed: certainly wrong
            continue
        unit = tuple(a.scale(1.0 / n1) for a in first)
        second = tuple(a.scale(n1) for a in dj(point, unit))
        worst = max(worst, _triple_dist(second, d) / _triple_norm(d))

    closed = involution_chart_closed_form(pt, p, *point, tol=tol)
    direct = jmap(point)
    closed_defect = _triple_dist(closed, direct)
    return {
        "check": "involution-derivative",
        "params": {"h": h},
        "samples": {"directions": len(directions)},
        "closed_form_defect": closed_defect,
        "max_defect": worst,
        "pass": worst < 1e-3 and closed_defect < 1e-8,
        "failures": [],
    }
