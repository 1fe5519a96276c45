"""Inverse semigroups of partial isometries, generated exactly.

Closure under product and adjoint runs on the Gaussian-rational backend so
that deduplication is bit-exact; float dedup of semigroup elements is
unsound. A closure carries its full multiplication table and involution as
index arrays, which makes the axiom checks cheap integer work. The same
module owns the symbolic side of the monogenic story: walk-based normal
forms p_a q_b u^{+-c} and triples u^k u*^l u^m for words in a power partial
isometry, plus the partial-bijection picture of matrix-unit semigroups.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import (
    DEFAULT_TOL,
    BackendError,
    DomainError,
    Element,
)

CLOSURE_CAP = 20000


# --- closure under product and adjoint ---------------------------------------

@dataclass
class ClosureResult:
    elements: list
    table: np.ndarray          # table[i, j] = index of elements[i] * elements[j]
    star: np.ndarray           # star[i] = index of elements[i].adjoint()
    flags: dict
    counterexample: tuple | None = None

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, x: Element):
        k = x.key()
        for i, e in enumerate(self.elements):
            if e.key() == k:
                return i
        return None

    def idempotent_indices(self):
        n = len(self.elements)
        return [i for i in range(n) if self.table[i, i] == i]

    def to_json_dict(self) -> dict:
        return {
            "elements": [core.to_json_dict(e) for e in self.elements],
            "table": self.table.tolist(),
            "star": self.star.tolist(),
            "flags": dict(self.flags),
        }


def generate_closure(generators, cap: int = CLOSURE_CAP) -> ClosureResult:
    """Smallest *-closed multiplicative set containing the generators.

    Breadth-first over products and adjoints; a vanishing product adjoins the
    zero element. The final element order is canonical (lexicographic on the
    serialized form), so identical generating sets give identical tables.
    """
    if cap < 1:
        raise DomainError("cap must be at least 1")
    for g in generators:
        if g.backend != core.QQI:
            raise BackendError("closure generation needs the exact backend")

    index: dict = {}
    elems: list = []
    overflow = False

    def add(el):
        nonlocal overflow
        k = el.key()
        if k in index:
            return False
        if len(elems) >= cap:
            overflow = True
            return False
        index[k] = len(elems)
        elems.append(el)
        return True

    for g in generators:
        add(g)

    frontier = list(elems)
    while frontier and not overflow:
        fresh = []
        for x in frontier:
            cands = [x.adjoint()]
            cands += [x * y for y in elems]
            cands += [y * x for y in elems if y is not x]
            for c in cands:
                if add(c):
                    fresh.append(elems[-1])
                if overflow:
                    break
            if overflow:
                break
        frontier = fresh

    order = sorted(range(len(elems)), key=lambda i: core.dumps(elems[i]))
    elems = [elems[i] for i in order]
    index = {e.key(): i for i, e in enumerate(elems)}

    n = len(elems)
    table = np.full((n, n), -1, dtype=int)
    star = np.full(n, -1, dtype=int)
    for i, x in enumerate(elems):
        star[i] = index.get(x.adjoint().key(), -1)
        for j, y in enumerate(elems):
            table[i, j] = index.get((x * y).key(), -1)

    closed = not overflow and bool(np.all(table >= 0)) and bool(np.all(star >= 0))
    result = ClosureResult(elems, table, star,
                           {"closed": closed,
                            "is_inverse_semigroup": False,
                            "is_clifford": False})
    ok, witness = check_inverse_semigroup(result)
    result.flags["is_inverse_semigroup"] = ok
    result.counterexample = witness
    if ok and closed:
        result.flags["is_clifford"] = _is_clifford(result)
    return result


def check_inverse_semigroup(S: ClosureResult):
    """(true, None) iff s s* s = s for all s and idempotents commute.

    The adjoint is then the unique generalized inverse of each element. On
    failure returns the first violation as (kind, indices). Runs on the
    matrices themselves, so capped (incomplete) closures can still be
    refuted; a `true` on an incomplete closure only covers the listed
    elements.
    """
    elems = S.elements
    for i, s in enumerate(elems):
        if not core.equal(s * s.adjoint() * s, s):
            return False, ("s s* s != s", (i,))
    idem = [i for i, s in enumerate(elems) if core.equal(s * s, s)]
    for a in idem:
        for b in idem:
            if a < b and not core.equal(elems[a] * elems[b],
                                        elems[b] * elems[a]):
                return False, ("idempotents do not commute", (a, b))
    return True, None


def _is_clifford(S: ClosureResult) -> bool:
    """Every idempotent commutes with every member."""
    t = S.table
    idem = S.idempotent_indices()
    return all(t[e, s] == t[s, e] for e in idem for s in range(len(S.elements)))


def check_UE_conditions(E, U) -> bool:
    """Conditions for projections E and partial isometries U to generate an
    inverse semigroup with zero adjoined: (i) pq = qp lies in E for all
    p, q in E; (ii) u p u* lies in E or vanishes, for u in U, p in E.
    """
    keys = {e.key() for e in E}
    for p in E:
        for q in E:
            pq = p * q
            if not core.equal(pq, q * p):
                return False
            if pq.key() not in keys:
                return False
    for u in U:
        for p in E:
            c = u * p * u.adjoint()
            if not core.is_zero(c) and c.key() not in keys:
                return False
    return True


def abelian_dichotomy_check(shape, gen=None, samples: int = 50) -> dict:
    """Products of partial isometries stay partial isometries exactly on
    abelian shapes; any block of size >= 2 admits two projections whose
    product is not a partial isometry.
    """
    from . import sampling

    abelian = all(n == 1 for n in shape)
    report = {"check": "abelian-dichotomy", "shape": list(shape),
              "abelian": abelian, "samples": 0, "failures": [],
              "counterexample": None}
    if abelian:
        if gen is not None:
            for k in range(samples):
                u = sampling.random_exact_partial_isometry(shape, gen)
                v = sampling.random_exact_partial_isometry(shape, gen)
                if not core.is_partial_isometry(u * v):
                    report["failures"].append(k)
            report["samples"] = samples
        report["pass"] = not report["failures"]
        return report

    from fractions import Fraction
    from .exact import QI

    b = next(i for i, n in enumerate(shape) if n >= 2)
    pmat = core.zeros(shape, core.QQI).blocks[b].copy()
    pmat[0, 0] = QI(1)
    hmat = core.zeros(shape, core.QQI).blocks[b].copy()
    for i in range(2):
        for j in range(2):
            hmat[i, j] = QI(Fraction(1, 2))
    p = core.embed_block(shape, b, pmat, core.QQI)
    h = core.embed_block(shape, b, hmat, core.QQI)
    prod = p * h
    not_pi = not core.is_partial_isometry(prod)
    report["counterexample"] = {
        "block": b,
        "projections": [core.to_json_dict(p), core.to_json_dict(h)],
        "product_is_partial_isometry": not not_pi,
    }
    report["pass"] = not_pi
    return report


# --- matrix units and partial bijections -------------------------------------

def matrix_unit_semigroup(p_list, u_choices) -> list:
    """Generators of the matrix-unit inverse semigroup over orthogonal
    projections p_i, from one witness u_ij per chosen pair (u_ij* u_ij = p_j,
    u_ij u_ij* = p_i). Closure of the result realizes
    u_ij u_kl = delta_jk u_ik u_kl with zero adjoined.
    """
    for i, p in enumerate(p_list):
        if not core.is_projection(p):
            raise DomainError(f"p_list[{i}] is not a projection")
        for j in range(i):
            if not core.is_zero(p_list[j] * p):
                raise DomainError("projections are not mutually orthogonal")
    for (i, j), u in u_choices.items():
        if not core.equal(u.adjoint() * u, p_list[j]):
            raise DomainError(f"witness ({i},{j}) has wrong initial projection")
        if not core.equal(u * u.adjoint(), p_list[i]):
            raise DomainError(f"witness ({i},{j}) has wrong final projection")
    return list(p_list) + list(u_choices.values())


@dataclass(frozen=True)
class PartialBijection:
    """Injective map between subsets of an index set."""

    mapping: tuple  # sorted tuple of (i, phi(i)) pairs

    @staticmethod
    def from_dict(d: dict) -> "PartialBijection":
        vals = list(d.values())
        if len(set(vals)) != len(vals):
            raise DomainError("mapping is not injective")
        return PartialBijection(tuple(sorted(d.items())))

    def as_dict(self) -> dict:
        return dict(self.mapping)

    @property
    def domain(self):
        return frozenset(i for i, _ in self.mapping)

    @property
    def image(self):
        return frozenset(j for _, j in self.mapping)

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self after other, on other^{-1}(domain of self)."""
        o = other.as_dict()
        s = self.as_dict()
        return PartialBijection(tuple(sorted(
            (i, s[o[i]]) for i in o if o[i] in s
        )))

    def inverse(self) -> "PartialBijection":
        return PartialBijection(tuple(sorted((j, i) for i, j in self.mapping)))


def partial_bijection_lift(phi: PartialBijection, reps: dict) -> Element:
    """u_phi = sum over the domain of the witnesses u_{phi(i) i}.

    reps[i] must be the partial isometry carrying p_i onto p_{phi(i)};
    domain/range orthogonality across distinct indices is enforced.
    """
    d = phi.as_dict()
    missing = [i for i in d if i not in reps]
    if missing:
        raise DomainError(f"no representative for indices {missing}")
    items = sorted(d)
    for a in items:
        if not core.is_partial_isometry(reps[a]):
            raise DomainError(f"rep for {a} is not a partial isometry")
        for b in items:
            if a == b:
                continue
            if not core.is_zero(reps[a].adjoint() * reps[b]):
                raise DomainError("representative initial supports overlap")
            if not core.is_zero(reps[a] * reps[b].adjoint()):
                raise DomainError("representative final supports overlap")
    if not items:
        raise DomainError("empty domain has no algebra representative here")
    out = reps[items[0]]
    for a in items[1:]:
        out = out + reps[a]
    return out


def morphism_to_partial_bijections(S: ClosureResult, p_list) -> dict:
    """Read each closure element as a partial bijection of the p_i indices.

    Element s maps i to the unique j with p_j s p_i != 0; returns
    {element index: PartialBijection} and skips elements whose support
    pattern is not functional (e.g. the zero element maps to the empty
    bijection).
    """
    out = {}
    for si, s in enumerate(S.elements):
        mapping = {}
        functional = True
        for i, pi in enumerate(p_list):
            hits = [j for j, pj in enumerate(p_list)
                    if not core.is_zero(pj * s * pi)]
            if len(hits) > 1:
                functional = False
                break
            if hits:
                mapping[i] = hits[0]
        if not functional:
            continue
        vals = list(mapping.values())
        if len(set(vals)) != len(vals):
            continue
        out[si] = PartialBijection.from_dict(mapping)
    return out


# --- monogenic semigroups -----------------------------------------------------

def truncated_shift(n: int, backend=core.QQI) -> Element:
    """u e_k = e_{k+1} for k < n, u e_n = 0, as a single block of size n."""
    m = core.zeros((n,), backend).blocks[0].copy()
    one = core.identity((1,), backend).blocks[0][0, 0]
    for k in range(n - 1):
        m[k + 1, k] = one
    return Element([m], backend)


def is_power_partial_isometry(u: Element, bound: int | None = None,
                              tol=None) -> bool:
    """u^k is a partial isometry for k = 1..bound (default: total dim + 2)."""
    if bound is None:
        bound = sum(u.shape) + 2
    x = u
    for _ in range(bound):
        if not core.is_partial_isometry(x, tol):
            return False
        x = x * u
    return True


def _word_walk(word: str):
    """Walk data (max, min, end) of a word over {u, U}, read right to left."""
    pos = mx = mn = 0
    for ch in reversed(word):
        if ch == "u":
            pos += 1
        elif ch == "U":
            pos -= 1
        else:
            raise DomainError(f"letters must be 'u' or 'U', got {ch!r}")
        mx = max(mx, pos)
        mn = min(mn, pos)
    return mx, mn, pos


@dataclass(frozen=True)
class MonogenicForm:
    """Canonical word p_a q_b u^c (c >= 0) or p_a q_b u*^{-c} (c < 0),
    where p_k = u*^k u^k and q_l = u^l u*^l.
    """

    p: int
    q: int
    power: int  # signed: negative means a starred power

    def evaluate(self, u: Element) -> Element:
        ustar = u.adjoint()
        out = core.identity(u.shape, u.backend)
        for _ in range(self.p):
            out = out * ustar
        for _ in range(self.p):
            out = out * u
        for _ in range(self.q):
            out = out * u
        for _ in range(self.q):
            out = out * ustar
        step = u if self.power >= 0 else ustar
        for _ in range(abs(self.power)):
            out = out * step
        return out

    def word(self) -> str:
        w = "U" * self.p + "u" * self.p + "u" * self.q + "U" * self.q
        w += ("u" if self.power >= 0 else "U") * abs(self.power)
        return w


def monogenic_normal_form(word: str) -> MonogenicForm:
    """Normal form of a word in a power partial isometry u and its adjoint.

    The rewriting relations (u p_{k+1} = p_k u and friends) preserve the walk
    profile of the word, and the profile (max, min, end) determines the
    canonical form: a = max - end, b = end - min, signed power = end.
    """
    mx, mn, end = _word_walk(word)
    return MonogenicForm(p=mx - end, q=end - mn, power=end)


def gluskin_form(word: str):
    """The unique triple (k, l, m) with the word equal to u^k u*^l u^m,
    0 <= k <= l and 0 <= m <= l."""
    mx, mn, end = _word_walk(word)
    return end - mn, mx - mn, mx


def bicyclic_form(word: str):
    """Reduction (j, k) with the word equal to u^j u*^k when u is an
    isometry (u* u = 1): only the part of the walk above its endpoint-free
    minimum survives."""
    j = k = 0
    for ch in word:
        if ch == "u":
            if k > 0:
                k -= 1
            else:
                j += 1
        elif ch == "U":
            k += 1
        else:
            raise DomainError(f"letters must be 'u' or 'U', got {ch!r}")
    return j, k


def evaluate_word(word: str, u: Element) -> Element:
    out = core.identity(u.shape, u.backend)
    for ch in word:
        if ch == "u":
            out = out * u
        elif ch == "U":
            out = out * u.adjoint()
        else:
            raise DomainError(f"letters must be 'u' or 'U', got {ch!r}")
    return out


def projection_unitary_generation_check(p: Element, w: Element,
                                        bound: int | None = None) -> bool:
    """True iff p commutes with all its unitary translates w^k p w*^k."""
    if not core.is_projection(p):
        raise DomainError("p must be a projection")
    if not core.is_unitary(w):
        raise DomainError("w must be a unitary")
    if bound is None:
        bound = sum(p.shape) + 2
    x = p
    for _ in range(bound):
        x = w * x * w.adjoint()
        if not core.equal(p * x, x * p):
            return False
    return True


def properly_infinite_obstruction(shape, gen=None, samples: int = 20) -> dict:
    """No isometry of a finite shape has a proper final projection.

    rank(s* s) and rank(s s*) agree blockwise, so s* s = 1 forces the final
    projection to have full rank, i.e. s s* = 1. Optionally exercises the
    rank identity on random samples.
    """
    from . import sampling

    checked = 0
    failures = []
    if gen is not None:
        for k in range(samples):
            s = sampling.random_element(shape, gen)
            rv_r = core.rank_vector(s.adjoint() * s)
            rv_l = core.rank_vector(s * s.adjoint())
            checked += 1
            if rv_r != rv_l:
                failures.append(k)
        for k in range(samples):
            s = sampling.random_unitary(shape, gen)
            checked += 1
            if not core.is_unitary(s):
                failures.append(("unitary", k))
    return {
        "check": "properly-infinite-obstruction",
        "shape": list(shape),
        "samples": checked,
        "pass": not failures,
        "failures": failures,
        "reason": "rank(s s*) = rank(s* s) blockwise, so s* s = 1 implies "
                  "s s* = 1 on any finite shape",
    }
