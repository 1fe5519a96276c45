"""Lie-Poisson bracket on the predual and groupoid structures on tangent data.

The predual carries the bracket {f, g}(omega) = <omega, [Df(omega), Dg(omega)]>,
where the derivative Df(omega) is the algebra element pairing against density
directions. Linear fields f_a = <., a> have constant gradient a, so their
bracket is exactly the matrix commutator; other fields fall back to central
differences with a step scaled by the functional's norm.

On top of the invertible group the module builds two groupoids over the
algebra (respectively its predual): tangent pairs (g, A) with source g^-1 A,
target A g^-1, product (g, A)(h, B) = (gh, gB), and covector pairs (g, F)
pairing tangent vectors through trace(F A), with source Fg, target gF and
product (g, F)(h, H) = (gh, H g^-1). Both are checked against the generic
axiom verifier. Left trivialization identifies them with the action groupoids
of the adjoint and coadjoint actions; replacing the invertible base by the
partially invertible arrow g l(g^-1 A) immerses them into the action
groupoid of arrows acting by conjugation along the left-support moment map.

The two-form on covector pairs is evaluated in two sign modes: ``paper``
takes the displayed sum of two pairings minus a commutator term verbatim
(which is symmetric in the pairing terms), ``antisymmetrized`` flips the
second pairing's sign, the unique single-sign change making the form
alternating while keeping the commutator term.
"""
from __future__ import annotations

import numpy as np

from . import core
from .core import DomainError, Element, ToleranceConfig
from .groupoid import (
    ActionElement,
    ActionGroupoid,
    COMPOSE_TOL,
    Functional,
    GroupoidStructure,
    NotComposable,
    groupoid_inverse,
)

FD_STEP = 1e-5        # central-difference base step
SINGULAR_TOL = 1e-10  # relative smallest-singular-value cutoff


def invert(g: Element) -> Element:
    """Blockwise inverse; raises DomainError when a block is singular."""
    if g.backend != core.F64:
        g = g.as_float()
    blocks = []
    for b in g.blocks:
        s = np.linalg.svd(b, compute_uv=False)
        if b.size and s[-1] <= SINGULAR_TOL * max(s[0], 1.0):
            raise DomainError("element is singular within tolerance")
        blocks.append(np.linalg.inv(b))
    return Element(blocks, core.F64)


def is_invertible(g: Element, cutoff: float = SINGULAR_TOL) -> bool:
    if g.backend != core.F64:
        g = g.as_float()
    for b in g.blocks:
        s = np.linalg.svd(b, compute_uv=False)
        if b.size and s[-1] <= cutoff * max(s[0], 1.0):
            return False
    return True


# --- scalar fields and the bracket -------------------------------------------

class ScalarField:
    """Scalar function on the predual with an optional exact gradient.

    evaluator: Functional -> complex. gradient (optional): Functional ->
    Element, the algebra element Df(omega) satisfying
    d/dt f(omega + t delta) = <delta, Df(omega)> for every density direction
    delta. Fields without a gradient use central differences.
    """

    def __init__(self, evaluator, gradient=None, kind: str = "custom"):
        self.evaluator = evaluator
        self.gradient = gradient
        self.kind = kind
        self.coeff = None

    @staticmethod
    def linear(a: Element) -> "ScalarField":
        """f_a(omega) = <omega, a>, with constant gradient a."""
        field = ScalarField(lambda omega: omega.pair(a),
                            lambda omega: a, kind="linear")
        field.coeff = a
        return field

    @staticmethod
    def product(factors) -> "ScalarField":
        """Pointwise product of linear fields; gradient left to differences."""
        coeffs = [f.coeff if isinstance(f, ScalarField) else f for f in factors]
        if any(c is None for c in coeffs):
            raise DomainError("product factors must be linear fields or elements")

        def evaluator(omega):
            out = 1.0 + 0.0j
            for c in coeffs:
                out *= omega.pair(c)
            return out

        return ScalarField(evaluator, kind="product-of-linear")

    def __call__(self, omega: Functional) -> complex:
        return self.evaluator(omega)

    def gradient_at(self, omega: Functional, step: float | None = None) -> Element:
        if self.gradient is not None:
            return self.gradient(omega)
        return fd_gradient(self, omega, step)

    def __repr__(self):
        return f"ScalarField(kind={self.kind!r})"


def fd_gradient(field: ScalarField, omega: Functional,
                step: float | None = None) -> Element:
    """Central-difference Df(omega), recovered entrywise through the pairing.

    The (l, k) entry of block b is the derivative of f along the density
    direction e_kl of that block, since trace(e_kl x) = x_lk. The step is
    scaled by 1 + the predual norm of omega.
    """
    rho = omega.density.as_float()
    h = (FD_STEP if step is None else step) * (1.0 + omega.norm())
    blocks = [np.zeros((n, n), dtype=complex) for n in rho.shape]
    for b, n in enumerate(rho.shape):
        for k in range(n):
            for l in range(n):
                d = core.matrix_unit(rho.shape, b, k, l).scale(h)
                fp = field.evaluator(Functional(rho + d))
                fm = field.evaluator(Functional(rho - d))
                blocks[b][l, k] = (fp - fm) / (2.0 * h)
    return Element(blocks, core.F64)


def lie_poisson_bracket(f: ScalarField, g: ScalarField, omega: Functional,
                        step: float | None = None) -> complex:
    """{f, g}(omega) = <omega, [Df(omega), Dg(omega)]>."""
    df = f.gradient_at(omega, step)
    dg = g.gradient_at(omega, step)
    return omega.pair(df * dg - dg * df)


def bracket_field(f: ScalarField, g: ScalarField,
                  step: float | None = None) -> ScalarField:
    """The field omega -> {f, g}(omega); linear pairs close exactly."""
    if f.kind == "linear" and g.kind == "linear":
        return ScalarField.linear(f.coeff * g.coeff - g.coeff * f.coeff)
    return ScalarField(lambda omega: lie_poisson_bracket(f, g, omega, step))


def jacobi_defect(f: ScalarField, g: ScalarField, h: ScalarField,
                  omega: Functional, step: float | None = None) -> float:
    """|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| at omega."""
    total = (
        lie_poisson_bracket(f, bracket_field(g, h, step), omega, step)
        + lie_poisson_bracket(g, bracket_field(h, f, step), omega, step)
        + lie_poisson_bracket(h, bracket_field(f, g, step), omega, step)
    )
    return abs(total)


# --- adjoint and coadjoint actions --------------------------------------------

def ad_action(g: Element, x: Element) -> Element:
    """Ad_g x = g x g^-1."""
    return g * x * invert(g)


def ad_star_action(g: Element, omega: Functional) -> Functional:
    """<Ad*_g omega, x> = <omega, g^-1 x g>; on densities rho -> g rho g^-1."""
    return Functional(g * omega.density * invert(g))


def ad_star_pairing_defect(g: Element, omega: Functional) -> float:
    """Worst gap between the density formula and the defining pairing."""
    moved = ad_star_action(g, omega)
    gi = invert(g)
    return max(
        abs(moved.pair(x) - omega.pair(gi * x * g))
        for x in core.algebra_basis(g.shape)
    )


def ad_star_pullback(field: ScalarField, g: Element) -> ScalarField:
    """f o Ad*_g; linear fields stay linear with coefficient g^-1 a g."""
    if field.kind == "linear":
        gi = invert(g)
        return ScalarField.linear(gi * field.coeff * g)
    return ScalarField(lambda omega: field.evaluator(ad_star_action(g, omega)))


# --- the tangent-pair groupoid ------------------------------------------------

class TangentElement:
    """Pair (g, A): an ambient direction A attached to the invertible base g."""

    __slots__ = ("base", "vec")

    def __init__(self, base: Element, vec: Element, check: bool = True):
        if check and not is_invertible(base):
            raise DomainError("tangent base must be invertible")
        self.base = base
        self.vec = vec

    def __repr__(self):
        return f"TangentElement(shape={self.base.shape})"


def tg_source(a: TangentElement) -> Element:
    return invert(a.base) * a.vec


def tg_target(a: TangentElement) -> Element:
    return a.vec * invert(a.base)


def tg_identity(x: Element) -> TangentElement:
    return TangentElement(core.identity(x.shape), x)


def tg_inverse(a: TangentElement) -> TangentElement:
    gi = invert(a.base)
    return TangentElement(gi, gi * a.vec * gi)


def tg_compose(a: TangentElement, b: TangentElement,
               compose_tol: float = COMPOSE_TOL) -> TangentElement:
    d = core.dist(tg_source(a), tg_target(b))
    if d > compose_tol:
        raise NotComposable(f"source != target, defect {d:.3e}")
    return TangentElement(a.base * b.base, a.base * b.vec)


def tg_structure(compose_tol: float = COMPOSE_TOL) -> GroupoidStructure:
    """Structure maps of the tangent-pair groupoid for the axiom verifier."""
    return GroupoidStructure(
        source=tg_source,
        target=tg_target,
        compose=lambda a, b: tg_compose(a, b, compose_tol),
        inverse=tg_inverse,
        identity=tg_identity,
        dist_arrow=lambda a, b: max(core.dist(a.base, b.base),
                                    core.dist(a.vec, b.vec)),
        dist_point=core.dist,
    )


# --- the covector-pair groupoid ------------------------------------------------

class CotangentElement:
    """Pair (g, F): pairs the direction A at base g to trace(F A) blockwise."""

    __slots__ = ("base", "codensity")

    def __init__(self, base: Element, codensity: Element, check: bool = True):
        if check and not is_invertible(base):
            raise DomainError("covector base must be invertible")
        self.base = base
        self.codensity = codensity

    def pair(self, vec: Element) -> complex:
        return (self.codensity * vec).trace()

    def __repr__(self):
        return f"CotangentElement(shape={self.base.shape})"


def ctg_source(xi: CotangentElement) -> Functional:
    return Functional(xi.codensity * xi.base)


def ctg_target(xi: CotangentElement) -> Functional:
    return Functional(xi.base * xi.codensity)


def ctg_identity(omega: Functional) -> CotangentElement:
    return CotangentElement(core.identity(omega.density.shape), omega.density)


def ctg_inverse(xi: CotangentElement) -> CotangentElement:
    return CotangentElement(invert(xi.base), xi.base * xi.codensity * xi.base)


def ctg_compose(xi: CotangentElement, eta: CotangentElement,
                compose_tol: float = COMPOSE_TOL) -> CotangentElement:
    d = core.dist(ctg_source(xi).density, ctg_target(eta).density)
    if d > compose_tol:
        raise NotComposable(f"source != target, defect {d:.3e}")
    return CotangentElement(xi.base * eta.base, eta.codensity * invert(xi.base))


def ctg_structure(compose_tol: float = COMPOSE_TOL) -> GroupoidStructure:
    """Structure maps of the covector-pair groupoid for the axiom verifier."""
    return GroupoidStructure(
        source=ctg_source,
        target=ctg_target,
        compose=lambda a, b: ctg_compose(a, b, compose_tol),
        inverse=ctg_inverse,
        identity=ctg_identity,
        dist_arrow=lambda a, b: max(core.dist(a.base, b.base),
                                    core.dist(a.codensity, b.codensity)),
        dist_point=lambda v, w: core.dist(v.density, w.density),
    )


# --- trivializations onto the adjoint action groupoids -------------------------

def ad_action_groupoid(shape, compose_tol: float = COMPOSE_TOL) -> ActionGroupoid:
    """Invertibles acting on the algebra by conjugation, over a one-point base."""
    e = core.identity(shape)
    base = GroupoidStructure(
        source=lambda g: e, target=lambda g: e,
        compose=lambda g, h: g * h, inverse=invert,
        identity=lambda p: e,
        dist_arrow=core.dist, dist_point=core.dist,
    )
    return ActionGroupoid(
        action=lambda g, x: g * x * invert(g),
        moment=lambda x: e, base=base, compose_tol=compose_tol,
    )


def ad_star_action_groupoid(shape, compose_tol: float = COMPOSE_TOL) -> ActionGroupoid:
    """Invertibles acting on functionals coadjointly, over a one-point base."""
    e = core.identity(shape)
    base = GroupoidStructure(
        source=lambda g: e, target=lambda g: e,
        compose=lambda g, h: g * h, inverse=invert,
        identity=lambda p: e,
        dist_arrow=core.dist, dist_point=core.dist,
    )
    return ActionGroupoid(
        action=ad_star_action,
        moment=lambda omega: e, base=base, compose_tol=compose_tol,
        dist_point=lambda v, w: core.dist(v.density, w.density),
    )


def tg_trivialize(a: TangentElement) -> ActionElement:
    """(g, A) -> (g, g^-1 A): groupoid isomorphism onto the conjugation action."""
    return ActionElement(a.base, tg_source(a))


def tg_untrivialize(g: Element, x: Element) -> TangentElement:
    return TangentElement(g, g * x)


def ctg_trivialize(xi: CotangentElement) -> ActionElement:
    """(g, F) -> (g, Fg as a functional): isomorphism onto the coadjoint action."""
    return ActionElement(xi.base, ctg_source(xi))


def ctg_untrivialize(g: Element, omega: Functional) -> CotangentElement:
    return CotangentElement(g, omega.density * invert(g))


# --- immersions into the arrow action groupoids --------------------------------

def lambda_action_groupoid(shape, tol: ToleranceConfig | None = None,
                           compose_tol: float = COMPOSE_TOL) -> ActionGroupoid:
    """Arrows acting by conjugation along the left-support moment map."""
    return ActionGroupoid(
        action=lambda x, y: x * y * groupoid_inverse(x, tol).elem,
        moment=lambda y: core.left_support(y, tol),
        tol=tol, compose_tol=compose_tol,
    )


def lambda_immersion(a: TangentElement,
                     tol: ToleranceConfig | None = None) -> ActionElement:
    """(g, A) -> (g l(g^-1 A), g^-1 A) inside the arrow action groupoid."""
    x = tg_source(a)
    return ActionElement(a.base * core.left_support(x, tol), x)


def lambda_star_action_groupoid(shape, tol: ToleranceConfig | None = None,
                                compose_tol: float = COMPOSE_TOL) -> ActionGroupoid:
    """Arrows acting on functionals by conjugation along the density's left support."""
    return ActionGroupoid(
        action=lambda x, om: Functional(
            x * om.density * groupoid_inverse(x, tol).elem),
        moment=lambda om: core.left_support(om.density, tol),
        tol=tol, compose_tol=compose_tol,
        dist_point=lambda v, w: core.dist(v.density, w.density),
    )


def lambda_star_immersion(xi: CotangentElement,
                          tol: ToleranceConfig | None = None) -> ActionElement:
    """(g, F) -> (g l_*(Fg), Fg as a functional)."""
    om = ctg_source(xi)
    return ActionElement(xi.base * core.left_support(om.density, tol), om)


# --- the two-form on covector pairs --------------------------------------------

SIGN_MODES = ("paper", "antisymmetrized")


def symplectic_form(g: Element, rho: Functional, v, w,
                    sign_mode: str = "paper") -> complex:
    """Two-form at the point (g, rho) on tangent pairs v = (a, xi), w = (b, eta).

    a, b are ambient directions at g, xi, eta fiber directions (functionals).
    With the left-translated directions a_l = g^-1 a, b_l = g^-1 b:
    paper mode evaluates <eta, a_l> + <xi, b_l> - <rho, [a_l, b_l]> verbatim;
    antisymmetrized mode flips the second term's sign, which makes the form
    alternating while leaving the commutator term intact.
    """
    if sign_mode not in SIGN_MODES:
        raise ValueError(f"unknown sign_mode {sign_mode!r}")
    a, xi = v
    b, eta = w
    gi = invert(g)
    al = gi * a
    bl = gi * b
    comm = al * bl - bl * al
    first = eta.pair(al)
    second = xi.pair(bl)
    if sign_mode == "antisymmetrized":
        second = -second
    return first + second - rho.pair(comm)
