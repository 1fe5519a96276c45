"""The groupoid of a block algebra over its projection lattice.

An arbitrary element x acts as an arrow from its right support r(x) to its
left support l(x); composition is the algebra product on matching supports,
and the groupoid inverse is the Moore-Penrose pseudoinverse |x|^-1 u* (with
x = u|x| the minimal polar factorization). The same file carries the predual
side: trace-pairing functionals, their polar data, the left/right/inner
module actions on densities, and a generic action-groupoid constructor plus
an axiom verifier that works for any bundle of structure maps.
"""
from __future__ import annotations

import numpy as np

from . import core
from .core import (
    DEFAULT_TOL,
    Element,
    DomainError,
    ToleranceConfig,
)

COMPOSE_TOL = 1e-7


class NotComposable(DomainError):
    """Source/target mismatch beyond the composition tolerance."""


class MomentMismatch(DomainError):
    """Acting element does not match the moment of the acted-on point."""


class Arrow:
    """An algebra element together with its (lazily cached) supports."""

    __slots__ = ("elem", "_src", "_tgt", "_tol")

    def __init__(self, elem: Element, tol: ToleranceConfig | None = None):
        self.elem = elem
        self._src = None
        self._tgt = None
        self._tol = tol or DEFAULT_TOL

    @property
    def src(self) -> Element:
        if self._src is None:
            self._src = core.right_support(self.elem, self._tol)
        return self._src

    @property
    def tgt(self) -> Element:
        if self._tgt is None:
            self._tgt = core.left_support(self.elem, self._tol)
        return self._tgt

    def __repr__(self):
        return f"Arrow({self.elem!r})"


def _elem(x) -> Element:
    return x.elem if isinstance(x, Arrow) else x


def source(x, tol: ToleranceConfig | None = None) -> Element:
    """S(x) = r(x), the right support."""
    if isinstance(x, Arrow):
        return x.src
    return core.right_support(x, tol)


def target(x, tol: ToleranceConfig | None = None) -> Element:
    """T(x) = l(x), the left support."""
    if isinstance(x, Arrow):
        return x.tgt
    return core.left_support(x, tol)


def identity_section(p: Element, tol: ToleranceConfig | None = None) -> Arrow:
    """The unit arrow at a projection (the projection itself)."""
    if not core.is_projection(p, tol):
        raise DomainError("unit arrows sit at projections")
    a = Arrow(p, tol)
    a._src = p
    a._tgt = p
    return a


def compose(x, y, tol: ToleranceConfig | None = None,
            compose_tol: float = COMPOSE_TOL) -> Arrow:
    """x after y: defined when S(x) = T(y), value is the algebra product."""
    xa = x if isinstance(x, Arrow) else Arrow(x, tol)
    ya = y if isinstance(y, Arrow) else Arrow(y, tol)
    defect = core.dist(xa.src, ya.tgt)
    if defect > compose_tol:
        raise NotComposable(f"S(x) != T(y), defect {defect:.3e}")
    return Arrow(xa.elem * ya.elem, tol)


def groupoid_inverse(x, tol: ToleranceConfig | None = None) -> Arrow:
    """iota(x) = |x|^-1 u* for x = u|x|; the Moore-Penrose pseudoinverse.

    Satisfies iota(x) x = S(x) and x iota(x) = T(x). On the exact backend it
    is computed radical-free as pinv(x*x) x*.
    """
    e = _elem(x)
    tol = tol or DEFAULT_TOL
    if e.backend == core.QQI:
        inv = core.pinv_positive(e.adjoint() * e) * e.adjoint()
        return Arrow(inv, tol)
    svds, ranks = core._svd_data(e, tol)
    blocks = [
        (Vh[:r, :].conj().T * (1.0 / s[:r])) @ U[:, :r].conj().T
        for (U, s, Vh), r in zip(svds, ranks)
    ]
    return Arrow(Element(blocks, core.F64), tol)


def involution_J(x, tol: ToleranceConfig | None = None) -> Arrow:
    """J(x) = iota(x)* = iota(x*); fixed points are the partial isometries."""
    return Arrow(groupoid_inverse(x, tol).elem.adjoint(), tol)


def inner_action(x, y: Element, tol: ToleranceConfig | None = None,
                 compose_tol: float = COMPOSE_TOL) -> Element:
    """I_x y = x y iota(x), defined on y supported in the corner of S(x)."""
    xa = x if isinstance(x, Arrow) else Arrow(x, tol)
    p = xa.src
    if core.dist(p * y * p, y) > compose_tol:
        raise MomentMismatch("y is not supported in the source corner of x")
    return xa.elem * y * groupoid_inverse(xa, tol).elem


# --- predual functionals ----------------------------------------------------

class Functional:
    """omega(x) = sum_b tr(rho_b x_b) for a density element rho."""

    __slots__ = ("density",)

    def __init__(self, density: Element):
        self.density = density

    def pair(self, x: Element) -> complex:
        return (self.density * x).trace()

    def norm(self) -> float:
        return core.trace_norm(self.density)

    def is_hermitian(self, tol: ToleranceConfig | None = None) -> bool:
        return core.is_hermitian(self.density, tol)

    def is_state(self, tol: ToleranceConfig | None = None) -> bool:
        tol = tol or DEFAULT_TOL
        return (
            core.is_positive(self.density, tol)
            and abs(self.density.trace() - 1.0) <= 1e3 * tol.eps_eq
        )

    def __repr__(self):
        return f"Functional({self.density!r})"


def functional_polar(omega: Functional, tol: ToleranceConfig | None = None):
    """omega = v . |omega|: polar data (v, |omega|) of the density."""
    v, absd = core.polar_decompose(omega.density, tol)
    return v, Functional(absd)


def functional_supports(omega: Functional, tol: ToleranceConfig | None = None):
    """(r_*(omega), l_*(omega)) = (v* v, v v*) from the polar part."""
    rho = omega.density
    return core.right_support(rho, tol), core.left_support(rho, tol)


def support_star(omega: Functional, tol: ToleranceConfig | None = None) -> Element:
    """s_*(omega) for a positive functional."""
    if not core.is_positive(omega.density, tol):
        raise DomainError("s_* is defined for positive functionals")
    return core.right_support(omega.density, tol)


def L_star(a: Element, omega: Functional) -> Functional:
    """(L_*a omega)(x) = omega(x a); density rho -> a rho."""
    return Functional(a * omega.density)


def R_star(a: Element, omega: Functional) -> Functional:
    """(R_*a omega)(x) = omega(a x); density rho -> rho a."""
    return Functional(omega.density * a)


def I_star(u, omega: Functional, tol: ToleranceConfig | None = None,
           compose_tol: float = COMPOSE_TOL) -> Functional:
    """Inner action on functionals: density rho -> u rho u*.

    Defined when both supports of omega sit under the initial projection
    u* u of the acting partial isometry.
    """
    ue = _elem(u)
    q = core.right_support(ue, tol)
    r, l = functional_supports(omega, tol)
    if core.dist(q * l, l) > compose_tol or core.dist(r * q, r) > compose_tol:
        raise MomentMismatch("supports of omega are not dominated by u* u")
    return Functional(ue * omega.density * ue.adjoint())


def free_action_check(shape, gen, samples: int = 200, tol: float = 1e-8,
                      separation: float = 1e-6) -> dict:
    """Left translations by partial isometries act freely on elements.

    For x = v|x| and admissible arrows u (u* u = v v* = left support of x),
    the translate u x determines u, so distinct admissible arrows move x to
    distinct points; and the orbit of x meets the positive cone exactly at
    |x| (the translate by v*). Samples pairs of admissible arrows looking
    for collisions and checks the positive representative each time.
    """
    from . import sampling

    failures = []
    max_defect = 0.0
    for k in range(samples):
        x = sampling.random_element(shape, gen)
        v, absx = core.polar_decompose(x)
        lx = core.left_support(x)
        u1 = sampling.random_partial_isometry_onto(lx, gen)
        u2 = sampling.random_partial_isometry_onto(lx, gen)
        gap_arrows = core.dist(u1, u2)
        gap_moved = core.dist(u1 * x, u2 * x)
        if gap_arrows > separation and gap_moved <= tol:
            failures.append({"kind": "collision", "index": k,
                             "arrow_gap": gap_arrows,
                             "translate_gap": gap_moved})
        pos = v.adjoint() * x
        d = core.dist(pos, absx)
        max_defect = max(max_defect, d)
        if d > tol:
            failures.append({"kind": "positive-representative", "index": k,
                             "defect": d})
        if not core.is_positive(pos):
            failures.append({"kind": "representative-not-positive",
                             "index": k})
    zero = core.zeros(shape)
    v0, abs0 = core.polar_decompose(zero)
    d0 = max(core.dist(v0 * abs0, zero), core.dist(abs0, zero))
    max_defect = max(max_defect, d0)
    if d0 > tol:
        failures.append({"kind": "zero-orbit", "defect": d0})
    return {
        "check": "free-action",
        "params": {"shape": list(shape), "samples": samples},
        "samples": {"collision_attempts": samples,
                    "representatives": samples + 1},
        "max_defect": max_defect,
        "pass": not failures,
        "failures": failures[:10],
    }


# --- generic structures and the axiom verifier ------------------------------

class GroupoidStructure:
    """Structure maps of a groupoid over a base, for the generic verifier.

    source/target: arrow -> point; compose(x, y): arrows -> arrow;
    inverse: arrow -> arrow; identity: point -> arrow; dist_arrow/dist_point
    return floats (0.0 meaning equal).
    """

    def __init__(self, source, target, compose, inverse, identity,
                 dist_arrow, dist_point):
        self.source = source
        self.target = target
        self.compose = compose
        self.inverse = inverse
        self.identity = identity
        self.dist_arrow = dist_arrow
        self.dist_point = dist_point


def element_structure(tol: ToleranceConfig | None = None,
                      compose_tol: float = COMPOSE_TOL) -> GroupoidStructure:
    """The structure maps of the block-algebra groupoid on Elements."""
    return GroupoidStructure(
        source=lambda x: source(x, tol),
        target=lambda x: target(x, tol),
        compose=lambda x, y: compose(x, y, tol, compose_tol).elem,
        inverse=lambda x: groupoid_inverse(x, tol).elem,
        identity=lambda p: p,
        dist_arrow=lambda a, b: core.dist(_elem(a), _elem(b)),
        dist_point=core.dist,
    )


def verify_groupoid_axioms(structure: GroupoidStructure, arrows,
                           pairs=(), triples=(), tol: float = 1e-8,
                           check: str = "groupoid-axioms") -> dict:
    """Exercise the axioms on given samples and report the worst defect.

    arrows: list of arrows; pairs: composable (x, y); triples: composable
    (x, y, z). Every law is scored by the structure's distance functions.
    """
    st = structure
    failures = []
    max_defect = 0.0

    def law(name, idx, d):
        nonlocal max_defect
        max_defect = max(max_defect, d)
        if d > tol:
            failures.append({"law": name, "index": idx, "defect": d})

    for i, x in enumerate(arrows):
        sx, tx = st.source(x), st.target(x)
        ix = st.inverse(x)
        law("inverse-source", i, st.dist_point(st.source(ix), tx))
        law("inverse-target", i, st.dist_point(st.target(ix), sx))
        law("left-inverse", i, st.dist_arrow(st.compose(ix, x), st.identity(sx)))
        law("right-inverse", i, st.dist_arrow(st.compose(x, ix), st.identity(tx)))
        law("involutive", i, st.dist_arrow(st.inverse(ix), x))
        law("right-unit", i, st.dist_arrow(st.compose(x, st.identity(sx)), x))
        law("left-unit", i, st.dist_arrow(st.compose(st.identity(tx), x), x))

    for i, (x, y) in enumerate(pairs):
        xy = st.compose(x, y)
        law("product-source", i, st.dist_point(st.source(xy), st.source(y)))
        law("product-target", i, st.dist_point(st.target(xy), st.target(x)))

    for i, (x, y, z) in enumerate(triples):
        left = st.compose(st.compose(x, y), z)
        right = st.compose(x, st.compose(y, z))
        law("associativity", i, st.dist_arrow(left, right))

    return {
        "check": check,
        "samples": {
            "arrows": len(arrows),
            "pairs": len(list(pairs)),
            "triples": len(list(triples)),
        },
        "max_defect": max_defect,
        "pass": not failures,
        "failures": failures,
    }


# --- action groupoids --------------------------------------------------------

class ActionElement:
    """A pair (g, r): the arrow g of the acting groupoid applied at point r."""

    __slots__ = ("g", "r")

    def __init__(self, g, r):
        self.g = g
        self.r = r

    def __repr__(self):
        return f"ActionElement({self.g!r}, {self.r!r})"


class ActionGroupoid:
    """Action groupoid of a left groupoid action along a moment map.

    Elements are pairs (g, r) with S(g) = moment(r). Structure maps:
    source (g, r) -> r, target (g, r) -> g . r, product
    (g, r)(h, n) = (gh, n) when r = h . n, inverse (g, r) -> (iota g, g . r),
    unit at r -> (identity at moment(r), r).

    The acting structure defaults to the block-algebra groupoid; pass custom
    base maps to act with any other groupoid (e.g. a group).
    """

    def __init__(self, action, moment, *, tol: ToleranceConfig | None = None,
                 compose_tol: float = COMPOSE_TOL, base: GroupoidStructure | None = None,
                 dist_point=None):
        self.action = action
        self.moment = moment
        self.compose_tol = compose_tol
        self.base = base or element_structure(tol, compose_tol)
        self.dist_point = dist_point or self.base.dist_point

    def element(self, g, r) -> ActionElement:
        d = self.base.dist_point(self.base.source(g), self.moment(r))
        if d > self.compose_tol:
            raise MomentMismatch(f"S(g) != moment(r), defect {d:.3e}")
        return ActionElement(g, r)

    def src(self, el: ActionElement):
        return el.r

    def tgt(self, el: ActionElement):
        return self.action(el.g, el.r)

    def mul(self, a: ActionElement, b: ActionElement) -> ActionElement:
        d = self.dist_point(a.r, self.action(b.g, b.r))
        if d > self.compose_tol:
            raise NotComposable(f"r != h . n, defect {d:.3e}")
        return ActionElement(self.base.compose(a.g, b.g), b.r)

    def inv(self, el: ActionElement) -> ActionElement:
        return ActionElement(self.base.inverse(el.g), self.action(el.g, el.r))

    def unit(self, r) -> ActionElement:
        return ActionElement(self.base.identity(self.moment(r)), r)

    def structure(self, dist_arrow=None) -> GroupoidStructure:
        """Structure maps over pairs, for the generic axiom verifier."""
        if dist_arrow is None:
            def dist_arrow(a, b):
                return max(self.base.dist_arrow(a.g, b.g),
                           self.dist_point(a.r, b.r))
        return GroupoidStructure(
            source=self.src, target=self.tgt, compose=self.mul,
            inverse=self.inv, identity=self.unit,
            dist_arrow=dist_arrow, dist_point=self.dist_point,
        )
