"""Symbolic semigroup of words in N fermionic generators.

Generators a_1..a_N and adjoints satisfy a_i a_j + a_j a_i = 0 and
a_i a_j* + a_j* a_i = delta_ij. Every nonzero product of generators reduces
to a signed canonical word

    x = sign * P_alpha Q_beta adag_gamma a_delta,

with P_i = a_i a_i*, Q_i = a_i* a_i and the four index sets pairwise
disjoint. The reduction engine works on letter strings: letters of distinct
modes anticommute (one sign flip per crossing), and a single mode's string
collapses to one of {1, a, a*, P, Q} or to zero via a^2 = 0. The symbolic
product is validated bit-exactly against an exact matrix realization of the
generators (sign-string construction on C^{2^N}), which is the ground truth
for every sign and vanishing rule and also settles the closed forms of
x x* and x* x (P over alpha and delta, Q over beta and gamma, for x x*).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import core
from .core import DomainError, Element
from .exact import QI, qzeros

JW_MAX_MODES = 6


@dataclass(frozen=True)
class CarWord:
    n: int
    sign: int = 1
    alpha: tuple = ()   # P factors
    beta: tuple = ()    # Q factors
    gamma: tuple = ()   # creation factors a*
    delta: tuple = ()   # annihilation factors a
    zero: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need at least one mode")
        if self.zero:
            if self.sign != 1 or any((self.alpha, self.beta, self.gamma,
                                      self.delta)):
                raise DomainError("zero carries no data")
            return
        if self.sign not in (1, -1):
            raise DomainError("sign must be +-1")
        seen = set()
        for s in (self.alpha, self.beta, self.gamma, self.delta):
            if list(s) != sorted(s):
                raise DomainError("index sets must be strictly increasing")
            for i in s:
                if not 1 <= i <= self.n:
                    raise DomainError(f"mode {i} outside 1..{self.n}")
                if i in seen:
                    raise DomainError("index sets must be pairwise disjoint")
                seen.add(i)

    @property
    def weight(self) -> int:
        return (len(self.alpha) + len(self.beta) + len(self.gamma)
                + len(self.delta))

    @staticmethod
    def unit(n: int) -> "CarWord":
        return CarWord(n)

    @staticmethod
    def zero_word(n: int) -> "CarWord":
        return CarWord(n, zero=True)

    @staticmethod
    def annihilator(n: int, i: int) -> "CarWord":
        return CarWord(n, delta=(i,))

    @staticmethod
    def creator(n: int, i: int) -> "CarWord":
        return CarWord(n, gamma=(i,))

    def letters(self):
        """(mode, is_creation) letters of the canonical product order."""
        out = []
        for m in self.alpha:
            out += [(m, False), (m, True)]
        for m in self.beta:
            out += [(m, True), (m, False)]
        out += [(m, True) for m in self.gamma]
        out += [(m, False) for m in self.delta]
        return out


def _mode_sort_sign(letters):
    """Stable sort by mode; sign is the parity of distinct-mode crossings."""
    inv = 0
    modes = [m for m, _ in letters]
    for i in range(len(modes)):
        for j in range(i + 1, len(modes)):
            if modes[i] > modes[j]:
                inv += 1
    order = sorted(range(len(letters)), key=lambda t: modes[t])
    return [letters[t] for t in order], (-1) ** inv


def _collapse_mode(seq):
    """Reduce one mode's letter string; None encodes the zero product.

    Nonzero strings alternate creation/annihilation, so first and last
    letter decide: (a, a*) -> P, (a*, a) -> Q, (a, a) -> a, (a*, a*) -> a*.
    """
    if not seq:
        return "1"
    for x, y in zip(seq, seq[1:]):
        if x == y:
            return None
    first, last = seq[0], seq[-1]
    if not first and last:
        return "P"
    if first and not last:
        return "Q"
    return "C" if first else "A"


def _perm_parity(current, target):
    pos = {v: i for i, v in enumerate(target)}
    seq = [pos[v] for v in current]
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq))
              if seq[i] > seq[j])
    return (-1) ** inv


def _reduce_letters(n: int, sign: int, letters) -> CarWord:
    letters, s = _mode_sort_sign(letters)
    sign *= s
    per_mode: dict = {}
    for m, dag in letters:
        per_mode.setdefault(m, []).append(dag)
    alpha, beta, gamma, delta = [], [], [], []
    odd_current = []
    for m in sorted(per_mode):
        tag = _collapse_mode(per_mode[m])
        if tag is None:
            return CarWord.zero_word(n)
        if tag == "P":
            alpha.append(m)
        elif tag == "Q":
            beta.append(m)
        elif tag == "C":
            gamma.append(m)
            odd_current.append(m)
        elif tag == "A":
            delta.append(m)
            odd_current.append(m)
    # odd letters sit in mode order; the canonical order lists creations
    # first, annihilations second (both ascending) -- each crossing flips
    odd_target = [m for m in sorted(gamma)] + [m for m in sorted(delta)]
    sign *= _perm_parity(odd_current, odd_target)
    return CarWord(n, sign, tuple(alpha), tuple(beta), tuple(gamma),
                   tuple(delta))


def car_mul(x: CarWord, y: CarWord) -> CarWord:
    if x.n != y.n:
        raise DomainError("words over different mode counts")
    if x.zero or y.zero:
        return CarWord.zero_word(x.n)
    return _reduce_letters(x.n, x.sign * y.sign, x.letters() + y.letters())


def car_star(x: CarWord) -> CarWord:
    if x.zero:
        return x
    rev = [(m, not dag) for m, dag in reversed(x.letters())]
    return _reduce_letters(x.n, x.sign, rev)


# --- exact matrix realization -------------------------------------------------

_GEN_CACHE: dict = {}


def jordan_wigner_generator(n: int, i: int) -> Element:
    """a_i on C^{2^n}: sign string on the first i-1 modes, lowering on mode i.

    Entries are exactly 0 and +-1, so the canonical anticommutation
    relations hold bit-exactly; a_i a_i* realizes P_i = diag(1, 0) patterns.
    """
    if not 1 <= n <= JW_MAX_MODES:
        raise DomainError(f"mode count must be 1..{JW_MAX_MODES}")
    if not 1 <= i <= n:
        raise DomainError(f"mode {i} outside 1..{n}")
    key = (n, i)
    if key not in _GEN_CACHE:
        one = QI(1)
        a = qzeros(2)
        a[0, 1] = one
        z = qzeros(2)
        z[0, 0] = one
        z[1, 1] = QI(-1)
        eye = qzeros(2)
        eye[0, 0] = one
        eye[1, 1] = one

        def kron(p, q):
            rp, cp = p.shape
            rq, cq = q.shape
            out = qzeros(rp * rq, cp * cq)
            for r in range(rp):
                for c in range(cp):
                    v = p[r, c]
                    if v:
                        for r2 in range(rq):
                            for c2 in range(cq):
                                w = q[r2, c2]
                                if w:
                                    out[r * rq + r2, c * cq + c2] = v * w
            return out

        m = np.array([[one]], dtype=object)
        for k in range(1, n + 1):
            if k < i:
                m = kron(m, z)
            elif k == i:
                m = kron(m, a)
            else:
                m = kron(m, eye)
        _GEN_CACHE[key] = Element([m], core.QQI)
    return _GEN_CACHE[key]


_WORD_CACHE: dict = {}


def jordan_wigner_realize(w: CarWord) -> Element:
    """Exact matrix of a canonical word (sign times the factor product)."""
    if w in _WORD_CACHE:
        return _WORD_CACHE[w]
    shape = (2 ** w.n,)
    if w.zero:
        out = core.zeros(shape, core.QQI)
    else:
        out = core.identity(shape, core.QQI)
        for m, dag in w.letters():
            g = jordan_wigner_generator(w.n, m)
            out = out * (g.adjoint() if dag else g)
        out = out.scale(QI(w.sign))
    _WORD_CACHE[w] = out
    return out


def _int_matrix(e: Element) -> np.ndarray:
    """Entries of a realization as machine integers (they are 0 and +-1).

    Integer matmul on these is bit-exact, which lets the exhaustive product
    check run as vectorized numpy arithmetic instead of rational arithmetic.
    """
    b = e.blocks[0]
    out = np.zeros(b.shape, dtype=np.int64)
    for i in range(b.shape[0]):
        for j in range(b.shape[1]):
            v = b[i, j]
            if v:
                if v.im != 0 or v.re.denominator != 1:
                    raise DomainError("realization entry is not an integer")
                out[i, j] = int(v.re)
    return out


def enumerate_car_words(n: int, max_weight: int | None = None,
                        signs=(1,)):
    """All valid canonical words (excluding zero) up to a weight bound."""
    max_weight = 4 * n if max_weight is None else max_weight
    assignments = [[]]
    for m in range(1, n + 1):
        assignments = [p + [s] for p in assignments
                       for s in ("", "P", "Q", "C", "A")]
    out = []
    for assign in assignments:
        alpha = tuple(m for m, s in enumerate(assign, 1) if s == "P")
        beta = tuple(m for m, s in enumerate(assign, 1) if s == "Q")
        gamma = tuple(m for m, s in enumerate(assign, 1) if s == "C")
        delta = tuple(m for m, s in enumerate(assign, 1) if s == "A")
        if len(alpha) + len(beta) + len(gamma) + len(delta) > max_weight:
            continue
        for s in signs:
            out.append(CarWord(n, s, alpha, beta, gamma, delta))
    return out


_RECOG_CACHE: dict = {}


def car_word_recognize(m: Element, n: int):
    """The unique canonical word realizing the matrix, or None.

    Builds (once per mode count) the full table of word realizations; the
    build asserts that distinct words have distinct matrices, which is the
    faithfulness of the realization on canonical words.
    """
    if n not in _RECOG_CACHE:
        table = {}
        for w in enumerate_car_words(n):
            k = jordan_wigner_realize(w).key()
            assert k not in table, "realization collision"
            table[k] = w
        _RECOG_CACHE[n] = table
    if m.backend != core.QQI:
        raise core.UnsupportedBackend("recognition works on exact matrices")
    if core.is_zero(m):
        return CarWord.zero_word(n)
    table = _RECOG_CACHE[n]
    k = m.key()
    if k in table:
        return table[k]
    km = (-m).key()
    w = table.get(km)
    if w is not None:
        return CarWord(n, -w.sign, w.alpha, w.beta, w.gamma, w.delta)
    return None


def car_axiom_check(n: int, max_weight: int = 3) -> dict:
    """Exhaustive bit-exact comparison of the word calculus with matrices.

    Over every valid word of weight <= max_weight: the symbolic product of
    each pair realizes to exactly the matrix product, the symbolic star
    realizes to exactly the conjugate transpose, x x* and x* x are
    idempotent words, and the generators satisfy the anticommutation
    relations exactly. Products may leave the weight bound, so realizations
    are tabulated over all words of the mode count.
    """
    words = enumerate_car_words(n, max_weight)
    full = enumerate_car_words(n)
    failures = []

    # defining relations of the generators, on the exact backend
    gens = [jordan_wigner_generator(n, i) for i in range(1, n + 1)]
    eye = core.identity((2 ** n,), core.QQI)
    zero_el = core.zeros((2 ** n,), core.QQI)
    for i in range(n):
        for j in range(n):
            if not core.equal(gens[i] * gens[j] + gens[j] * gens[i],
                              zero_el):
                failures.append(("anticommutator", i + 1, j + 1))
            want = eye if i == j else zero_el
            if not core.equal(
                    gens[i] * gens[j].adjoint() + gens[j].adjoint() * gens[i],
                    want):
                failures.append(("mixed-anticommutator", i + 1, j + 1))

    # star against the conjugate transpose
    for x in words:
        if not core.equal(jordan_wigner_realize(car_star(x)),
                          jordan_wigner_realize(x).adjoint()):
            failures.append(("star", car_dumps(x)))

    # integer images of the realizations, asserted entry by entry
    ints = {}
    for w in full:
        m = _int_matrix(jordan_wigner_realize(w))
        ints[w] = m
    zero_mat = np.zeros((2 ** n, 2 ** n), dtype=np.int64)

    def expected(w: CarWord) -> np.ndarray:
        if w.zero:
            return zero_mat
        base = ints[CarWord(w.n, 1, w.alpha, w.beta, w.gamma, w.delta)]
        return base if w.sign > 0 else -base

    stack = np.stack([ints[w] for w in words])
    pairs = 0
    for ix, x in enumerate(words):
        prods = ints[x] @ stack
        for iy, y in enumerate(words):
            pairs += 1
            if not np.array_equal(prods[iy], expected(car_mul(x, y))):
                failures.append(("product", car_dumps(x), car_dumps(y)))

    # x x* and x* x are self-adjoint idempotent, as words and as matrices
    for x in words:
        for w in (car_mul(x, car_star(x)), car_mul(car_star(x), x)):
            if car_mul(w, w) != w or car_star(w) != w:
                failures.append(("idempotent-word", car_dumps(x)))
                break
            e = expected(w)
            if not (np.array_equal(e @ e, e) and np.array_equal(e.T, e)):
                failures.append(("idempotent-matrix", car_dumps(x)))
                break

    return {
        "check": "car-axioms",
        "params": {"N": n, "max_weight": max_weight},
        "samples": {"words": len(words), "pairs": pairs,
                    "realizations": len(full)},
        "max_defect": 0.0 if not failures else 1.0,
        "pass": not failures,
        "failures": failures[:10],
    }


def alternative_rules_report(n: int, max_weight: int | None = None) -> dict:
    """Evaluate closed-form variants of the product data against matrices.

    Closed-form statements of the word product circulate in slightly
    different shapes (index-set recombinations for x x*, lists of
    disjointness conditions meant to characterize vanishing). This report
    scores each candidate on every word or pair in range and records the
    first counterexample of each failing one, so a divergence between a
    quoted form and the matrix ground truth stays visible instead of being
    silently corrected. The engine itself never uses these closed forms: its
    sign comes from letter transposition parity and is validated bit-exactly
    by car_axiom_check, so no closed-form sign exponent is asserted.
    """
    words = enumerate_car_words(n, max_weight)
    variants = {
        "xx*: P over alpha+delta, Q over beta+gamma":
            lambda w: (tuple(sorted(w.alpha + w.delta)),
                       tuple(sorted(w.beta + w.gamma))),
        "xx*: P over alpha+beta, Q over beta+gamma":
            lambda w: (tuple(sorted(set(w.alpha) | set(w.beta))),
                       tuple(sorted(w.beta + w.gamma))),
        "x*x: P over alpha+gamma, Q over beta+delta":
            lambda w: (tuple(sorted(w.alpha + w.gamma)),
                       tuple(sorted(w.beta + w.delta))),
    }
    scored = {}
    for name, rule in variants.items():
        star_first = name.startswith("x*x")
        holds = True
        counterexample = None
        for w in words:
            actual = (car_mul(car_star(w), w) if star_first
                      else car_mul(w, car_star(w)))
            try:
                p_set, q_set = rule(w)
                predicted = CarWord(n, 1, p_set, q_set, (), ())
            except DomainError:
                predicted = None  # sets collide: not even a valid word
            if predicted != actual:
                holds = False
                counterexample = {
                    "word": car_dumps(w),
                    "actual": car_dumps(actual),
                    "predicted": None if predicted is None
                    else car_dumps(predicted),
                }
                break
        scored[name] = {"holds": holds, "counterexample": counterexample}

    # candidate vanishing rule: x y = 0 exactly when one of the six listed
    # intersections is nonempty
    def listed_zero(x: CarWord, y: CarWord) -> bool:
        checks = [
            (x.alpha, y.gamma), (x.beta, y.delta), (x.alpha, y.beta),
            (x.beta, y.alpha), (x.gamma, y.gamma), (x.delta, y.delta),
        ]
        return any(set(a) & set(b) for a, b in checks)

    missed = []   # product vanishes, rule predicts nonzero
    unsound = []  # rule predicts zero, product does not vanish
    for x in words:
        for y in words:
            rule_zero = listed_zero(x, y)
            really_zero = car_mul(x, y).zero
            if really_zero and not rule_zero and len(missed) < 5:
                missed.append((car_dumps(x), car_dumps(y)))
            if rule_zero and not really_zero and len(unsound) < 5:
                unsound.append((car_dumps(x), car_dumps(y)))

    return {
        "check": "car-alternative-rules",
        "params": {"N": n, "max_weight": max_weight},
        "samples": {"words": len(words)},
        "idempotent_forms": scored,
        "vanishing_conditions": {
            "zero_products_missed_by_rule": missed,
            "rule_false_zeros": unsound,
            "complete": not missed,
            "sound": not unsound,
        },
        "sign_rule": "transposition parity, matrix-validated; no closed-form"
                     " exponent asserted",
        "pass": True,
    }


def idempotent_closed_forms(n: int, max_weight: int | None = None) -> dict:
    """Derive the index sets of x x* and x* x over all canonical words.

    Reports whether the patterns are uniform in the word's sets; the derived
    rule is xx* = P over alpha and delta, Q over beta and gamma, and
    x*x = P over alpha and gamma, Q over beta and delta.
    """
    xx_ok = xsx_ok = True
    first_bad = None
    count = 0
    for w in enumerate_car_words(n, max_weight):
        count += 1
        xx = car_mul(w, car_star(w))
        expected_xx = CarWord(
            n, 1, tuple(sorted(w.alpha + w.delta)),
            tuple(sorted(w.beta + w.gamma)), (), ())
        if xx != expected_xx:
            xx_ok = False
            first_bad = first_bad or ("xx*", car_dumps(w), car_dumps(xx))
        xsx = car_mul(car_star(w), w)
        expected_xsx = CarWord(
            n, 1, tuple(sorted(w.alpha + w.gamma)),
            tuple(sorted(w.beta + w.delta)), (), ())
        if xsx != expected_xsx:
            xsx_ok = False
            first_bad = first_bad or ("x*x", car_dumps(w), car_dumps(xsx))
    return {
        "check": "car-closed-forms",
        "params": {"N": n, "max_weight": max_weight},
        "samples": {"words": count},
        "xx_star": {"P": "alpha+delta", "Q": "beta+gamma", "uniform": xx_ok},
        "x_star_x": {"P": "alpha+gamma", "Q": "beta+delta", "uniform": xsx_ok},
        "max_defect": 0.0 if (xx_ok and xsx_ok) else 1.0,
        "pass": xx_ok and xsx_ok,
        "failures": [] if (xx_ok and xsx_ok) else [first_bad],
    }


# --- serialization -------------------------------------------------------------

def car_dumps(w: CarWord) -> str:
    if w.zero:
        return "0"
    s = "+" if w.sign > 0 else "-"
    for tag, idx in (("P", w.alpha), ("Q", w.beta), ("C", w.gamma),
                     ("A", w.delta)):
        s += tag + "{" + ",".join(map(str, idx)) + "}"
    return s


_CAR_RE = re.compile(
    r"^([+-])P\{([\d,]*)\}Q\{([\d,]*)\}C\{([\d,]*)\}A\{([\d,]*)\}$")


def car_loads(s: str, n: int) -> CarWord:
    s = s.strip()
    if s == "0":
        return CarWord.zero_word(n)
    m = _CAR_RE.match(s)
    if not m:
        raise DomainError(f"cannot parse word {s!r}")
    sign = 1 if m.group(1) == "+" else -1
    sets = [tuple(int(t) for t in m.group(g).split(",") if t)
            for g in range(2, 6)]
    return CarWord(n, sign, *sets)
