"""Verification suites: deterministic property runs behind `verify <suite>`.

Each suite draws samples from a seeded generator, exercises one family of
identities at its stated tolerance, and returns a report dictionary with the
common schema {check, params, seed, max_defect, pass, failures, ...}.  A
suite never aborts on the first violation; everything is collected so a
failing run still yields a complete report.
"""
from __future__ import annotations

import time

import numpy as np

from . import atlas, car, core, cuntz, gns, groupoid, lattice, poisson, \
    sampling, semigroups
from .core import Element
from .groupoid import Functional
from .poisson import CotangentElement, ScalarField, TangentElement

DEFAULT_SHAPES = [(2,), (3,), (2, 3)]

# Closure sizes and idempotent counts for the generated inverse semigroups,
# frozen from a standalone brute-force enumeration (matrix products with
# exact Gaussian-rational entries, deduplicated by value).
MONOGENIC_SIZES = {3: 14, 4: 30, 5: 55}
MONOGENIC_IDEMPOTENTS = {3: 7, 4: 11, 5: 16}
MATRIX_UNIT_CLOSURE_SIZES = {2: 5, 3: 10}


class _Tally:
    """Accumulates worst defects per law with a capped failure list."""

    def __init__(self, tol: float, cap: int = 20):
        self.tol = tol
        self.cap = cap
        self.max_defect = 0.0
        self.failures = []
        self.worst = {}

    def add(self, law, index, defect, tol=None):
        d = float(defect)
        limit = self.tol if tol is None else tol
        self.max_defect = max(self.max_defect, d)
        self.worst[law] = max(self.worst.get(law, 0.0), d)
        if d > limit and len(self.failures) < self.cap:
            self.failures.append({"law": law, "index": index, "defect": d})

    def require(self, law, index, ok, note=None):
        self.worst.setdefault(law, 0.0)
        if not ok:
            self.max_defect = max(self.max_defect, 1.0)
            self.worst[law] = max(self.worst[law], 1.0)
            if len(self.failures) < self.cap:
                entry = {"law": law, "index": index, "defect": 1.0}
                if note is not None:
                    entry["note"] = note
                self.failures.append(entry)

    @property
    def ok(self) -> bool:
        return not self.failures


def _shapes_arg(shapes):
    return [tuple(s) for s in (shapes if shapes is not None else DEFAULT_SHAPES)]


def _report(check, params, seed, tally: _Tally, **extra) -> dict:
    rep = {
        "check": check,
        "params": params,
        "seed": seed,
        "max_defect": tally.max_defect,
        "pass": tally.ok,
        "failures": tally.failures,
        "worst_by_law": tally.worst,
    }
    rep.update(extra)
    return rep


def _unit(x: Element) -> Element:
    return x.scale(1.0 / core.opnorm(x))


# --- 1. groupoid axioms -------------------------------------------------------

def suite_groupoid_axioms(samples: int = 500, seed: int = 1, tol: float = 1e-8,
                          shapes=None) -> dict:
    """All structure laws of the partially-invertible-element groupoid.

    Arrows mix generic (full-rank) elements, partial isometries, and
    rank-deficient products; composable pairs are built by right-translating
    a source projection with an invertible factor, which pins the target of
    the second leg exactly.
    """
    t0 = time.perf_counter()
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    st = groupoid.element_structure()
    t = _Tally(tol)
    parts = []
    for shape in shapes:
        arrows = []
        for k in range(samples):
            if k % 3 == 0:
                arrows.append(sampling.random_element(shape, gen))
            elif k % 3 == 1:
                arrows.append(sampling.random_partial_isometry(shape, gen))
            else:
                arrows.append(sampling.random_element(shape, gen)
                              * sampling.random_projection(shape, gen))
        pairs = []
        for x in arrows[: samples // 3]:
            y = groupoid.source(x) * sampling.random_invertible(shape, gen)
            pairs.append((x, y))
        triples = []
        for x in arrows[: samples // 5]:
            y = groupoid.source(x) * sampling.random_invertible(shape, gen)
            z = groupoid.source(y) * sampling.random_invertible(shape, gen)
            triples.append((x, y, z))
        rep = groupoid.verify_groupoid_axioms(st, arrows, pairs, triples,
                                              tol=tol)
        t.add("axioms[%s]" % (list(shape),), 0, rep["max_defect"])
        for f in rep["failures"][:5]:
            t.failures.append({"shape": list(shape), **f})
        parts.append({"shape": list(shape), "samples": rep["samples"],
                      "max_defect": rep["max_defect"], "pass": rep["pass"]})
    return _report("groupoid-axioms",
                   {"samples": samples, "tol": tol,
                    "shapes": [list(s) for s in shapes]},
                   seed, t, parts=parts,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 2. polar decomposition and supports ---------------------------------------

def suite_polar_support(samples: int = 1000, seed: int = 2, tol: float = 1e-8,
                        shapes=None) -> dict:
    """x = u|x| with u*u the support of |x|, |x*| = u|x|u*, and the left
    support has the rank of x.  Every third sample is rank-deficient."""
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    t = _Tally(tol)
    for shape in shapes:
        for k in range(samples):
            x = sampling.random_element(shape, gen)
            if k % 3 == 2:
                x = x * sampling.random_projection(shape, gen)
            u, absx = core.polar_decompose(x)
            t.add("x = u|x|", k, core.dist(u * absx, x))
            t.add("u*u = support(|x|)", k,
                  core.dist(u.adjoint() * u, core.support(absx)))
            absx_star = core.sqrt_positive(x * x.adjoint())
            t.add("|x*| = u|x|u*", k,
                  core.dist(absx_star, u * absx * u.adjoint()))
            t.require("rank(l(x)) = rank(x)", k,
                      core.rank_vector(core.left_support(x))
                      == core.rank_vector(x))
    return _report("polar-support",
                   {"samples": samples, "tol": tol,
                    "shapes": [list(s) for s in shapes]},
                   seed, t)


# --- 3. inner action on corners and functionals --------------------------------

def suite_inner_action(samples: int = 500, seed: int = 3, tol: float = 1e-7,
                       shapes=None) -> dict:
    """Transport by a partial isometry: modulus and operator norm of corner
    elements, trace norm and modulus of corner functionals."""
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    t = _Tally(tol)
    for k in range(samples):
        shape = shapes[k % len(shapes)]
        u = sampling.random_partial_isometry(shape, gen)
        p = u.adjoint() * u
        x = p * sampling.random_element(shape, gen) * p
        ix = groupoid.inner_action(u, x)
        absx = core.sqrt_positive(x.adjoint() * x)
        t.add("|I_u x| = I_u |x|", k,
              core.dist(core.sqrt_positive(ix.adjoint() * ix),
                        groupoid.inner_action(u, absx)))
        t.add("op norm preserved", k, abs(core.opnorm(ix) - core.opnorm(x)))
        h = p * sampling.random_hermitian(shape, gen) * p
        ih = groupoid.inner_action(u, h)
        t.add("hermitian preserved", k, core.dist(ih, ih.adjoint()))

        d = p * sampling.random_element(shape, gen) * p
        om = Functional(d)
        iom = groupoid.I_star(u, om)
        t.add("trace norm preserved", k, abs(iom.norm() - om.norm()))
        absd = core.sqrt_positive(d.adjoint() * d)
        t.add("|I_*u w| = I_*u |w|", k,
              core.dist(core.sqrt_positive(iom.density.adjoint() * iom.density),
                        groupoid.I_star(u, Functional(absd)).density))
    return _report("inner-action",
                   {"samples": samples, "tol": tol,
                    "shapes": [list(s) for s in shapes]},
                   seed, t)


# --- 4. freeness of left translations -------------------------------------------

def suite_free_action(samples: int = 200, seed: int = 4, tol: float = 1e-8,
                      shapes=None) -> dict:
    """Distinct admissible arrows translate an element to distinct points,
    and each orbit meets the positive cone exactly at |x|."""
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    per = -(-samples // len(shapes))
    t = _Tally(tol)
    parts = []
    for shape in shapes:
        rep = groupoid.free_action_check(shape, gen, per, tol)
        t.add("free-action[%s]" % (list(shape),), 0, rep["max_defect"])
        t.require("no collisions[%s]" % (list(shape),), 0, rep["pass"],
                  note=rep["failures"][:3])
        parts.append(rep)
    return _report("free-action",
                   {"samples": per * len(shapes), "tol": tol,
                    "shapes": [list(s) for s in shapes]},
                   seed, t, parts=parts)


# --- 5. fiber maps over a state family ------------------------------------------

def _pi_between(p: Element, q: Element, gen) -> Element:
    """Random partial isometry with initial projection p and final q
    (equal block ranks required)."""
    bi = lattice.range_basis(p)
    bo = lattice.range_basis(q)
    blocks = []
    for a, b in zip(bi, bo):
        r = a.shape[1]
        if b.shape[1] != r:
            raise core.ShapeError("projections must have equal block ranks")
        if r:
            m = gen.standard_normal((r, r)) + 1j * gen.standard_normal((r, r))
            w = np.linalg.qr(m)[0]
        else:
            w = np.zeros((0, 0), dtype=complex)
        blocks.append(b @ w @ a.conj().T)
    return Element(blocks, core.F64)


def suite_gns(seed: int = 5, tol: float = 1e-9, arrows_per_state: int = 3) -> dict:
    """Fiber maps over a five-state family on one full 3x3 block.

    Checks: each fiber map is an isometry, composition of arrows goes to
    composition of maps, the reversed arrow gives the inverse map, the
    family (support join = 1) represents faithfully, and embedded fiber
    maps between family members commute with the direct-sum representation.
    """
    shape = (3,)
    gen = sampling.rng(seed)
    t = _Tally(tol)

    rho0 = sampling.random_density(shape, gen, full_rank=True)
    rho1 = sampling.random_density(shape, gen, full_rank=False, max_rank=2)
    u12 = _pi_between(core.support(rho1),
                      sampling.random_projection(shape, gen, ranks=[2]), gen)
    rho2 = u12 * rho1 * u12.adjoint()
    rho3 = sampling.random_density(shape, gen, full_rank=False, max_rank=1)
    u34 = _pi_between(core.support(rho3),
                      sampling.random_projection(shape, gen, ranks=[1]), gen)
    rho4 = u34 * rho3 * u34.adjoint()
    states = [gns.State(r) for r in (rho0, rho1, rho2, rho3, rho4)]
    spaces = [gns.gns_space(s) for s in states]

    for i, sp in enumerate(spaces):
        eye_src = np.eye(sp.dim)
        for j in range(arrows_per_state):
            u = sampling.random_partial_isometry_onto(sp.state.support, gen)
            phi, _ = gns.groupoid_rep_phi(u, sp)
            t.add("unitarity", (i, j),
                  float(np.linalg.norm(phi.conj().T @ phi - eye_src, 2)))

        for j in range(2):
            v = sampling.random_partial_isometry_onto(sp.state.support, gen)
            mid = groupoid.I_star(v, sp.state.functional)
            mid_space = gns.gns_space(gns.State(mid.density))
            u = sampling.random_partial_isometry_onto(mid_space.state.support,
                                                      gen)
            phi_v, _ = gns.groupoid_rep_phi(v, sp, tgt=mid_space)
            phi_u, top = gns.groupoid_rep_phi(u, mid_space)
            phi_uv, _ = gns.groupoid_rep_phi(u * v, sp, tgt=top)
            t.add("functorial", (i, j),
                  float(np.linalg.norm(phi_uv - phi_u @ phi_v, 2)))
            phi_back, _ = gns.groupoid_rep_phi(v.adjoint(), mid_space, tgt=sp)
            t.add("inverse map", (i, j), max(
                float(np.linalg.norm(phi_back @ phi_v - eye_src, 2)),
                float(np.linalg.norm(phi_v @ phi_back
                                     - np.eye(mid_space.dim), 2))))

    faith = gns.faithfulness_check(spaces)
    t.require("faithful family", 0,
              faith["pass"] and faith["support_join_is_identity"]
              and faith["injective"])

    w, vecs = np.linalg.eigh(rho0.blocks[0])
    phases = np.exp(1j * gen.uniform(0.0, 2 * np.pi, size=len(w)))
    u00 = Element([vecs @ np.diag(phases) @ vecs.conj().T], core.F64)
    for (i, j, u) in ((1, 2, u12), (3, 4, u34), (0, 0, u00)):
        phi, _ = gns.groupoid_rep_phi(u, spaces[i], tgt=spaces[j])
        op = gns.embed_fiber_map(phi, spaces, i, j)
        t.require("fiber map in commutant", (i, j),
                  gns.commutant_check(op, spaces))
    y = core.matrix_unit(shape, 0, 0, 1)
    t.require("non-central element excluded", 0,
              not gns.commutant_check(gns.direct_sum_rep(y, spaces), spaces))

    return _report("gns",
                   {"states": len(states), "tol": tol, "shape": list(shape)},
                   seed, t,
                   fiber_dims=[sp.dim for sp in spaces],
                   support_ranks=[core.rank_vector(s.support)[0]
                                  for s in states],
                   faithfulness=faith)


# --- 6. inverse-semigroup engine -------------------------------------------------

def suite_semigroup(seed: int = 6, samples: int = 50) -> dict:
    """Closure of the matrix units is the expected inverse semigroup, and
    products of partial isometries close exactly on abelian shapes only."""
    t0 = time.perf_counter()
    gen = sampling.rng(seed)
    t = _Tally(0.0)
    sizes = {}
    for n in (2, 3):
        units = [core.matrix_unit((n,), 0, i, j, core.QQI)
                 for i in range(n) for j in range(n)]
        S = semigroups.generate_closure(units)
        sizes[n] = S.size
        t.require("matrix-unit closure size n=%d" % n, n,
                  S.size == MATRIX_UNIT_CLOSURE_SIZES[n],
                  note={"got": S.size,
                        "expected": MATRIX_UNIT_CLOSURE_SIZES[n]})
        ok, witness = semigroups.check_inverse_semigroup(S)
        t.require("inverse semigroup n=%d" % n, n, ok, note=witness)
        t.require("closure flags n=%d" % n, n,
                  S.flags["closed"] and S.flags["is_inverse_semigroup"])
    dichotomy = []
    for shape in ((1,), (1, 1, 1)):
        rep = semigroups.abelian_dichotomy_check(shape, gen, samples)
        dichotomy.append(rep)
        t.require("abelian shape closes %s" % (list(shape),), 0, rep["pass"])
    rep = semigroups.abelian_dichotomy_check((2,), gen, samples)
    dichotomy.append(rep)
    t.require("matrix block counterexample", 0, rep["pass"],
              note=rep["counterexample"] is not None)
    return _report("semigroup", {"samples": samples}, seed, t,
                   closure_sizes=sizes, dichotomy=dichotomy,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 7. monogenic inverse semigroups ----------------------------------------------

def suite_monogenic(seed: int = 7, dims=(3, 4, 5)) -> dict:
    """Truncated shifts: closure sizes and idempotent counts match the frozen
    enumeration, every element is a canonical normal form p_a q_b u^{+-c}
    bit-exactly, and the three-exponent bounds hold with bit-exact words."""
    t0 = time.perf_counter()
    t = _Tally(0.0)
    parts = []
    for n in dims:
        u = semigroups.truncated_shift(n)
        S = semigroups.generate_closure([u])
        t.require("closure size n=%d" % n, n, S.size == MONOGENIC_SIZES[n],
                  note={"got": S.size, "expected": MONOGENIC_SIZES[n]})
        # distinct p_a q_b matrices (identity = p_0 q_0 and zero included);
        # the closure holds all of them except the identity, which is not a
        # nonempty product of u and u*
        pq_keys = {semigroups.MonogenicForm(a, b, 0).evaluate(u).key()
                   for a in range(n + 1) for b in range(n + 1)}
        t.require("idempotent count n=%d" % n, n,
                  len(pq_keys) == MONOGENIC_IDEMPOTENTS[n],
                  note={"got": len(pq_keys),
                        "expected": MONOGENIC_IDEMPOTENTS[n]})
        closure_idem = {S.elements[i].key() for i in S.idempotent_indices()}
        one = core.identity(u.shape, u.backend).key()
        t.require("closure idempotents = p_a q_b minus identity n=%d" % n, n,
                  closure_idem == pq_keys - {one})

        lookup = {}
        for a in range(n + 1):
            for b in range(n + 1):
                for c in range(-n, n + 1):
                    form = semigroups.MonogenicForm(a, b, c)
                    canon = semigroups.monogenic_normal_form(form.word())
                    if (canon.p, canon.q, canon.power) != (a, b, c):
                        continue        # not a canonical triple
                    lookup.setdefault(form.evaluate(u).key(), form)

        matched = 0
        for idx, e in enumerate(S.elements):
            form = lookup.get(e.key())
            if form is None:
                t.require("normal form found n=%d" % n, idx, False)
                continue
            matched += 1
            k, l, m = semigroups.gluskin_form(form.word())
            t.require("triple bounds n=%d" % n, idx,
                      0 <= k <= l and 0 <= m <= l, note=(k, l, m))
            w = "u" * k + "U" * l + "u" * m
            t.require("triple word evaluates n=%d" % n, idx,
                      semigroups.evaluate_word(w, u).key() == e.key())
        parts.append({"n": n, "size": S.size, "idempotents": len(pq_keys),
                      "matched": matched, "canonical_forms": len(lookup)})
    return _report("monogenic", {"dims": list(dims)}, seed, t, parts=parts,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 8. word calculus over N isometries --------------------------------------------

def suite_cuntz(n_max: int = 3, depth: int = 3, seed: int = 8) -> dict:
    """Exhaustive word-calculus axioms for N <= n_max, and agreement of the
    N = 1 exponent pairs with the single-isometry reduction."""
    t0 = time.perf_counter()
    t = _Tally(0.0)
    parts = []
    for n in range(1, n_max + 1):
        rep = cuntz.cuntz_axiom_check(n, depth)
        t.require("axioms N=%d" % n, n, rep["pass"],
                  note=rep["failures"][:3])
        parts.append({"N": n, "samples": rep["samples"],
                      "pass": rep["pass"]})
    words = [w for w in cuntz.enumerate_words(1, depth) if not w.zero]
    pair_count = 0
    for x in words:
        a1, b1 = cuntz.toeplitz_pair(x)
        for y in words:
            a2, b2 = cuntz.toeplitz_pair(y)
            prod = cuntz.cuntz_mul(x, y)
            expected = semigroups.bicyclic_form(
                "u" * a1 + "U" * b1 + "u" * a2 + "U" * b2)
            pair_count += 1
            t.require("N=1 matches isometry reduction", (a1, b1, a2, b2),
                      cuntz.toeplitz_pair(prod) == expected)
    return _report("cuntz", {"n_max": n_max, "depth": depth}, seed, t,
                   parts=parts, n1_pairs=pair_count,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 9. fermionic word calculus vs matrices -------------------------------------------

def suite_car(n_max: int = 4, max_weight: int = 3, seed: int = 9) -> dict:
    """Bit-exact agreement of the fermionic word calculus with its matrix
    realization, plus the scorecard of circulating closed-form product rules
    (divergences are reported, never patched into the engine)."""
    t0 = time.perf_counter()
    t = _Tally(0.0)
    parts = []
    for n in range(1, n_max + 1):
        rep = car.car_axiom_check(n, max_weight)
        t.require("axioms N=%d" % n, n, rep["pass"], note=rep["failures"][:3])
        parts.append({"N": n, "samples": rep["samples"], "pass": rep["pass"]})
    divergences = car.alternative_rules_report(3)
    return _report("car", {"n_max": n_max, "max_weight": max_weight}, seed, t,
                   parts=parts, displayed_rule_analysis=divergences,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 10. chart atlas ------------------------------------------------------------------

def suite_atlas(points: int = 300, pi_samples: int = 20, seed: int = 10,
                shapes=((2,), (3,))) -> dict:
    """Round trips and transitions of the projection-lattice charts and the
    groupoid charts, plus the squared involution derivative at partial
    isometries."""
    t0 = time.perf_counter()
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    t = _Tally(1e-8)
    skipped = 0
    per_shape = points // len(shapes)
    for shape in shapes:
        one = core.identity(shape)
        for k in range(per_shape):
            p = sampling.random_projection(shape, gen)
            rv = core.rank_vector(p)
            y = (one - p) * sampling.random_element(shape, gen, 0.7) * p
            q = atlas.chart_phi_inv(p, y)
            t.add("chart round trip", k, core.dist(atlas.chart_phi(p, q), y),
                  tol=1e-9)
            q2 = sampling.random_projection(shape, gen, ranks=rv)
            if atlas.in_chart_domain(q2, p):
                t.add("chart inverse round trip", k,
                      core.dist(atlas.chart_phi_inv(p, atlas.chart_phi(p, q2)),
                                q2), tol=1e-9)
            else:
                skipped += 1
            p2 = sampling.random_projection(shape, gen, ranks=rv)
            if atlas.in_chart_domain(q, p2):
                t.add("transition closed form", k,
                      core.dist(atlas.lattice_transition(p, p2, y),
                                atlas.chart_phi(p2, q)), tol=1e-8)
            else:
                skipped += 1

            pt = sampling.random_projection(shape, gen, ranks=rv)
            x = (sampling.random_invertible(shape, gen)
                 * sampling.random_partial_isometry(shape, gen, ranks=rv)
                 * sampling.random_invertible(shape, gen))
            try:
                y_t, z, yy = atlas.groupoid_chart_psi(pt, p, x)
            except atlas.ChartDomainError:
                skipped += 1
                continue
            back = atlas.groupoid_chart_psi_inv(pt, p, y_t, z, yy)
            t.add("arrow chart round trip", k, core.dist(back, x), tol=1e-8)
            pt2 = sampling.random_projection(shape, gen, ranks=rv)
            p2b = sampling.random_projection(shape, gen, ranks=rv)
            try:
                direct = atlas.groupoid_chart_psi(pt2, p2b, x)
            except atlas.ChartDomainError:
                skipped += 1
                continue
            moved = atlas.groupoid_transition(pt, p, pt2, p2b, y_t, z, yy)
            t.add("arrow chart transition", k,
                  max(core.dist(a, b) for a, b in zip(moved, direct)),
                  tol=1e-7)

        for k in range(pi_samples // len(shapes)):
            ranks = [int(gen.integers(1, n + 1)) for n in shape]
            u = sampling.random_partial_isometry(shape, gen, ranks=ranks)
            rep = atlas.involution_derivative_check(u)
            t.add("squared involution derivative", k, rep["max_defect"],
                  tol=1e-3)
            t.add("involution closed form", k, rep["closed_form_defect"],
                  tol=1e-8)
    return _report("atlas",
                   {"points": points, "pi_samples": pi_samples,
                    "shapes": [list(s) for s in shapes]},
                   seed, t, skipped=skipped,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 11. predual bracket and pair groupoids ---------------------------------------------

def _tg_samples(shape, n, gen):
    arrows, pairs, triples = [], [], []
    for _ in range(n):
        g = sampling.random_invertible(shape, gen)
        arrows.append(TangentElement(g, sampling.random_element(shape, gen)))
        h = sampling.random_invertible(shape, gen)
        k = sampling.random_invertible(shape, gen)
        xc = sampling.random_element(shape, gen)
        c = poisson.tg_untrivialize(k, xc)
        b = poisson.tg_untrivialize(h, poisson.ad_action(k, xc))
        a = poisson.tg_untrivialize(g, poisson.ad_action(h * k, xc))
        pairs.append((a, b))
        triples.append((a, b, c))
    return arrows, pairs, triples


def _ctg_samples(shape, n, gen):
    arrows, pairs, triples = [], [], []
    for _ in range(n):
        g = sampling.random_invertible(shape, gen)
        arrows.append(CotangentElement(g, sampling.random_element(shape, gen)))
        h = sampling.random_invertible(shape, gen)
        k = sampling.random_invertible(shape, gen)
        kk = CotangentElement(k, sampling.random_element(shape, gen))
        eta = CotangentElement(h, poisson.ctg_target(kk).density
                               * poisson.invert(h))
        xi = CotangentElement(g, poisson.ctg_target(eta).density
                              * poisson.invert(g))
        pairs.append((xi, eta))
        triples.append((xi, eta, kk))
    return arrows, pairs, triples


def suite_poisson(seed: int = 11, shapes=None) -> dict:
    """Predual bracket identities, pair-groupoid axioms over the invertible
    elements, the immersions into the conjugation action groupoids, and the
    two-form's sign behavior."""
    t0 = time.perf_counter()
    shapes = _shapes_arg(shapes)
    gen = sampling.rng(seed)
    t = _Tally(1e-8)

    # bracket of coordinate fields closes on commutators
    for trial in range(200):
        shape = shapes[trial % len(shapes)]
        a = sampling.random_element(shape, gen)
        b = sampling.random_element(shape, gen)
        om = Functional(sampling.random_element(shape, gen))
        fa, fb = ScalarField.linear(a), ScalarField.linear(b)
        lhs = poisson.lie_poisson_bracket(fa, fb, om)
        t.add("linear bracket = commutator", trial,
              abs(lhs - om.pair(a * b - b * a)), tol=1e-12)
        t.add("alternating", trial,
              abs(poisson.lie_poisson_bracket(fa, fa, om)), tol=1e-12)
        closed = poisson.bracket_field(fa, fb)
        t.add("bracket field closes", trial,
              abs(closed(om) - lhs), tol=1e-12)

    # jacobi identity: exact for linear fields, finite-difference for products
    for trial in range(45):
        shape = shapes[trial % len(shapes)]
        om = Functional(sampling.random_element(shape, gen))
        fs = [ScalarField.linear(sampling.random_element(shape, gen))
              for _ in range(3)]
        t.add("jacobi linear", trial, poisson.jacobi_defect(*fs, om),
              tol=1e-12)
    for trial in range(24):
        shape = shapes[trial % len(shapes)]
        prods = [ScalarField.product([_unit(sampling.random_element(shape, gen)),
                                      _unit(sampling.random_element(shape, gen))])
                 for _ in range(3)]
        om = Functional(sampling.random_density(shape, gen))
        t.add("jacobi quadratic fd", trial,
              poisson.jacobi_defect(*prods, om), tol=1e-5)

    # bracket invariance under the conjugation action on densities
    for trial in range(30):
        shape = shapes[trial % len(shapes)]
        g = sampling.random_invertible(shape, gen)
        om = Functional(sampling.random_element(shape, gen))
        fa = ScalarField.linear(sampling.random_element(shape, gen))
        fb = ScalarField.linear(sampling.random_element(shape, gen))
        lhs = poisson.lie_poisson_bracket(poisson.ad_star_pullback(fa, g),
                                          poisson.ad_star_pullback(fb, g), om)
        rhs = poisson.lie_poisson_bracket(fa, fb,
                                          poisson.ad_star_action(g, om))
        t.add("bracket conjugation invariance", trial, abs(lhs - rhs),
              tol=1e-8)

    # pair groupoids over the invertible elements
    for shape in shapes:
        arrows, pairs, triples = _tg_samples(shape, 40, gen)
        rep = groupoid.verify_groupoid_axioms(
            poisson.tg_structure(), arrows, pairs[:25], triples[:15],
            tol=1e-9, check="tangent-axioms")
        t.add("tangent axioms[%s]" % (list(shape),), 0, rep["max_defect"],
              tol=1e-9)
        arrows, pairs, triples = _ctg_samples(shape, 40, gen)
        rep = groupoid.verify_groupoid_axioms(
            poisson.ctg_structure(), arrows, pairs[:25], triples[:15],
            tol=1e-9, check="cotangent-axioms")
        t.add("cotangent axioms[%s]" % (list(shape),), 0, rep["max_defect"],
              tol=1e-9)

    # immersions into the conjugation action groupoids
    for shape in shapes:
        gpd = poisson.lambda_action_groupoid(shape)
        st = gpd.structure()
        arrows, pairs, _ = _tg_samples(shape, 15, gen)
        for i, a in enumerate(arrows):
            la = poisson.lambda_immersion(a)
            try:
                gpd.element(la.g, la.r)
            except core.DomainError:
                t.require("immersion moment", i, False)
                continue
            t.add("immersion source", i,
                  core.dist(st.source(la), poisson.tg_source(a)), tol=1e-8)
            t.add("immersion target", i,
                  core.dist(st.target(la), poisson.tg_target(a)), tol=1e-8)
        for i, (a, b) in enumerate(pairs):
            lhs = poisson.lambda_immersion(poisson.tg_compose(a, b))
            rhs = st.compose(poisson.lambda_immersion(a),
                             poisson.lambda_immersion(b))
            t.add("immersion product", i, st.dist_arrow(lhs, rhs), tol=1e-8)
        for i in range(len(arrows)):
            for j in range(i + 1, len(arrows)):
                gap = st.dist_arrow(poisson.lambda_immersion(arrows[i]),
                                    poisson.lambda_immersion(arrows[j]))
                t.require("immersion injective", (i, j), gap > 1e-3)

        gpd2 = poisson.lambda_star_action_groupoid(shape)
        st2 = gpd2.structure()
        arrows, pairs, _ = _ctg_samples(shape, 15, gen)
        for i, x in enumerate(arrows):
            lx = poisson.lambda_star_immersion(x)
            try:
                gpd2.element(lx.g, lx.r)
            except core.DomainError:
                t.require("predual immersion moment", i, False)
                continue
            t.add("predual immersion source", i,
                  core.dist(lx.r.density, poisson.ctg_source(x).density),
                  tol=1e-8)
            t.add("predual immersion target", i,
                  core.dist(st2.target(lx).density,
                            poisson.ctg_target(x).density), tol=1e-8)
        for i, (x, y) in enumerate(pairs):
            lhs = poisson.lambda_star_immersion(poisson.ctg_compose(x, y))
            rhs = st2.compose(poisson.lambda_star_immersion(x),
                              poisson.lambda_star_immersion(y))
            t.add("predual immersion product", i, st2.dist_arrow(lhs, rhs),
                  tol=1e-8)

    # two-form sign behavior
    asymmetry = 0.0
    for trial in range(40):
        shape = shapes[trial % len(shapes)]
        g = sampling.random_invertible(shape, gen)
        rho = Functional(sampling.random_element(shape, gen))
        v = (sampling.random_element(shape, gen),
             Functional(sampling.random_element(shape, gen)))
        w = (sampling.random_element(shape, gen),
             Functional(sampling.random_element(shape, gen)))
        t.add("two-form alternating (antisymmetrized)", trial,
              abs(poisson.symplectic_form(g, rho, v, v, "antisymmetrized")),
              tol=1e-10)
        ovw = poisson.symplectic_form(g, rho, v, w, "antisymmetrized")
        owv = poisson.symplectic_form(g, rho, w, v, "antisymmetrized")
        t.add("two-form antisymmetric (antisymmetrized)", trial,
              abs(ovw + owv), tol=1e-10)
        pvw = poisson.symplectic_form(g, rho, v, w, "paper")
        pwv = poisson.symplectic_form(g, rho, w, v, "paper")
        asymmetry = max(asymmetry, abs(pvw + pwv))

    return _report("poisson",
                   {"shapes": [list(s) for s in shapes]},
                   seed, t, paper_mode_asymmetry=asymmetry,
                   elapsed_s=round(time.perf_counter() - t0, 3))


# --- 12. no isometry with a proper final projection ---------------------------------------

def suite_properly_infinite(seed: int = 12, samples: int = 20,
                            shapes=None) -> dict:
    """On every finite shape, s* s = 1 forces s s* = 1: the blockwise rank
    identity rank(s* s) = rank(s s*) is the certificate."""
    if shapes is None:
        shapes = [(1,), (2,), (3,), (1, 1), (1, 2), (2, 3)]
    shapes = [tuple(s) for s in shapes]
    gen = sampling.rng(seed)
    t = _Tally(0.0)
    parts = []
    for shape in shapes:
        rep = semigroups.properly_infinite_obstruction(shape, gen, samples)
        t.require("obstruction[%s]" % (list(shape),), 0, rep["pass"],
                  note=rep["failures"][:3])
        parts.append(rep)
    return _report("properly-infinite",
                   {"samples": samples, "shapes": [list(s) for s in shapes]},
                   seed, t, parts=parts,
                   certificate=parts[0]["reason"] if parts else "")


# --- registry ------------------------------------------------------------------------------

SUITES = {
    "groupoid-axioms": suite_groupoid_axioms,
    "polar-support": suite_polar_support,
    "inner-action": suite_inner_action,
    "free-action": suite_free_action,
    "gns": suite_gns,
    "semigroup": suite_semigroup,
    "monogenic": suite_monogenic,
    "cuntz": suite_cuntz,
    "car": suite_car,
    "atlas": suite_atlas,
    "poisson": suite_poisson,
    "properly-infinite": suite_properly_infinite,
}


def run_suite(name: str, **kwargs) -> dict:
    if name not in SUITES:
        raise core.DomainError(
            "unknown suite %r; available: %s" % (name, ", ".join(sorted(SUITES))))
    return SUITES[name](**kwargs)
