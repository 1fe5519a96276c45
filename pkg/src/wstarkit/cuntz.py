"""Symbolic inverse semigroup of isometry words s_alpha s_beta*.

Elements are pairs of multi-indices over {1..N} plus an absorbing zero. The
product keys on prefix matching: with x = s_alpha s_beta* and
y = s_gamma s_delta*,

  x y = s_{alpha ++ tail} s_delta*      when gamma = beta ++ tail,
  x y = s_alpha s_{delta ++ tail}*      when beta = gamma ++ tail,
  x y = 0                               otherwise,

which is forced by s_i* s_j = delta_ij 1; the starred multi-index grows by
appending the leftover tail (adjoints reverse written words, so the tail
lands at the end of the index). N = 1 gives the bicyclic monoid of a single
isometry: pairs of exponents (a, b) standing for u^a u*^b.

The axiom checker is exhaustive over all words up to a weight bound
(weight = |alpha| + |beta|, the length as a word in the 2N generators).
Associativity over all triples is done on an integer encoding of the words
(little-endian base-N codes), so the whole triple cube is a handful of
vectorized passes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .core import DomainError


@dataclass(frozen=True)
class CuntzWord:
    n: int
    alpha: tuple = ()
    beta: tuple = ()
    zero: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("alphabet size must be at least 1")
        for idx in (self.alpha, self.beta):
            for i in idx:
                if not 1 <= i <= self.n:
                    raise DomainError(f"index {i} outside 1..{self.n}")
        if self.zero and (self.alpha or self.beta):
            raise DomainError("zero carries no indices")

    @property
    def weight(self) -> int:
        return len(self.alpha) + len(self.beta)

    @staticmethod
    def unit(n: int) -> "CuntzWord":
        return CuntzWord(n)

    @staticmethod
    def zero_word(n: int) -> "CuntzWord":
        return CuntzWord(n, zero=True)


def cuntz_star(w: CuntzWord) -> CuntzWord:
    if w.zero:
        return w
    return CuntzWord(w.n, w.beta, w.alpha)


def cuntz_mul(x: CuntzWord, y: CuntzWord) -> CuntzWord:
    if x.n != y.n:
        raise DomainError("words over different alphabets")
    if x.zero or y.zero:
        return CuntzWord.zero_word(x.n)
    beta, gamma = x.beta, y.alpha
    if gamma[: len(beta)] == beta:
        tail = gamma[len(beta):]
        return CuntzWord(x.n, x.alpha + tail, y.beta)
    if beta[: len(gamma)] == gamma:
        tail = beta[len(gamma):]
        return CuntzWord(x.n, x.alpha, y.beta + tail)
    return CuntzWord.zero_word(x.n)


def cuntz_dumps(w: CuntzWord) -> str:
    if w.zero:
        return "0"
    return ("s[" + ",".join(map(str, w.alpha)) + "]S["
            + ",".join(map(str, w.beta)) + "]")


_WORD_RE = re.compile(r"^s\[([\d,]*)\]S\[([\d,]*)\]$")


def cuntz_loads(s: str, n: int) -> CuntzWord:
    s = s.strip()
    if s == "0":
        return CuntzWord.zero_word(n)
    m = _WORD_RE.match(s)
    if not m:
        raise DomainError(f"cannot parse word {s!r}")
    alpha = tuple(int(t) for t in m.group(1).split(",") if t)
    beta = tuple(int(t) for t in m.group(2).split(",") if t)
    return CuntzWord(n, alpha, beta)


def enumerate_words(n: int, depth: int):
    """All words of weight |alpha| + |beta| <= depth, zero last."""
    by_len = [[()]]
    for _ in range(depth):
        by_len.append([t + (i,) for t in by_len[-1] for i in range(1, n + 1)])
    words = []
    for s in range(depth + 1):
        for la in range(s + 1):
            for a in by_len[la]:
                for b in by_len[s - la]:
                    words.append(CuntzWord(n, a, b))
    words.append(CuntzWord.zero_word(n))
    return words


# --- integer encoding for the exhaustive checks ------------------------------

def _code(idx, n: int) -> int:
    """Little-endian base-n code with digits idx_t - 1; injective per length."""
    c = 0
    for t, i in enumerate(idx):
        c += (i - 1) * n ** t
    return c


def _encode(words, n: int):
    la = np.array([len(w.alpha) for w in words], dtype=np.int64)
    ca = np.array([_code(w.alpha, n) for w in words], dtype=np.int64)
    lb = np.array([len(w.beta) for w in words], dtype=np.int64)
    cb = np.array([_code(w.beta, n) for w in words], dtype=np.int64)
    z = np.array([w.zero for w in words], dtype=bool)
    return {"z": z, "la": la, "ca": ca, "lb": lb, "cb": cb}


def _vec_mul(x: dict, y: dict, pw: np.ndarray) -> dict:
    """Vectorized product on encoded words; inputs broadcast elementwise."""
    lb, cb = x["lb"], x["cb"]
    lg, cg = y["la"], y["ca"]
    both = ~(x["z"] | y["z"])
    c1 = both & (lg >= lb) & (cg % pw[np.minimum(lb, lg)] == cb)
    # c1 needs cg mod n^lb == cb with lb <= lg; the minimum guard keeps the
    # power lookup in range on rows where lb > lg (those rows fail lg >= lb)
    tail_l = lg - lb
    tail_c = np.where(c1, cg // pw[np.where(c1, lb, 0)], 0)
    out_la1 = x["la"] + tail_l
    out_ca1 = x["ca"] + tail_c * pw[x["la"]]
    c2 = both & ~c1 & (lb >= lg) & (cb % pw[np.minimum(lg, lb)] == cg)
    rest_l = lb - lg
    rest_c = np.where(c2, cb // pw[np.where(c2, lg, 0)], 0)
    out_lb2 = y["lb"] + rest_l
    out_cb2 = y["cb"] + rest_c * pw[y["lb"]]
    z = ~(c1 | c2)
    la = np.where(c1, out_la1, np.where(c2, x["la"], 0))
    ca = np.where(c1, out_ca1, np.where(c2, x["ca"], 0))
    lb_ = np.where(c1, y["lb"], np.where(c2, out_lb2, 0))
    cb_ = np.where(c1, y["cb"], np.where(c2, out_cb2, 0))
    return {"z": z, "la": la, "ca": ca, "lb": lb_, "cb": cb_}


def _enc_eq(a: dict, b: dict) -> np.ndarray:
    return ((a["z"] == b["z"]) & (a["la"] == b["la"]) & (a["ca"] == b["ca"])
            & (a["lb"] == b["lb"]) & (a["cb"] == b["cb"]))


def _take(e: dict, sel) -> dict:
    return {k: v[sel] for k, v in e.items()}


def cuntz_axiom_check(n: int, depth: int) -> dict:
    """Exhaustive inverse-semigroup axioms over words of bounded weight.

    Checks associativity over every triple, w w* w = w for every word, and
    pairwise commutation of the idempotents; also cross-checks the
    vectorized product against the plain one on every pair.
    """
    words = enumerate_words(n, depth)
    size = len(words)
    enc = _encode(words, n)
    pw = n ** np.arange(3 * depth + 2, dtype=np.int64)

    violations = []

    # plain and vectorized products agree on all pairs
    col = _take(enc, slice(None))
    row = {k: v[:, None] for k, v in enc.items()}
    grid = _vec_mul(row, {k: v[None, :] for k, v in col.items()}, pw)
    plain = _encode([cuntz_mul(x, y) for x in words for y in words], n)
    plain = {k: v.reshape(size, size) for k, v in plain.items()}
    if not bool(_enc_eq(grid, plain).all()):
        violations.append({"law": "vectorized/plain product mismatch"})

    # associativity over the full triple cube, one row of x at a time
    yz = grid  # (j, k) grid of y*z
    for i in range(size):
        xi = {k: v[i] for k, v in enc.items()}
        xy = _vec_mul(xi, enc, pw)              # vector over j
        left = _vec_mul({k: v[:, None] for k, v in xy.items()},
                        {k: v[None, :] for k, v in enc.items()}, pw)
        right = _vec_mul(xi, yz, pw)
        ok = _enc_eq(left, right)
        if not bool(ok.all()):
            j, k = np.argwhere(~ok)[0]
            violations.append({
                "law": "associativity",
                "triple": [cuntz_dumps(words[i]), cuntz_dumps(words[int(j)]),
                           cuntz_dumps(words[int(k)])],
            })
            break

    for w in words:
        if cuntz_mul(cuntz_mul(w, cuntz_star(w)), w) != w:
            violations.append({"law": "w w* w = w", "word": cuntz_dumps(w)})
            break

    idem = [w for w in words if cuntz_mul(w, w) == w]
    stop = False
    for a in idem:
        for b in idem:
            if cuntz_mul(a, b) != cuntz_mul(b, a):
                violations.append({
                    "law": "idempotents commute",
                    "pair": [cuntz_dumps(a), cuntz_dumps(b)],
                })
                stop = True
                break
        if stop:
            break

    return {
        "check": "cuntz-axioms",
        "params": {"N": n, "depth": depth},
        "samples": {"words": size, "idempotents": len(idem),
                    "triples": size ** 3},
        "max_defect": 0.0 if not violations else 1.0,
        "pass": not violations,
        "failures": violations,
    }


def toeplitz_pair(w: CuntzWord):
    """(a, b) exponents of the N = 1 picture u^a u*^b; None for zero."""
    if w.n != 1:
        raise DomainError("exponent pairs are the N = 1 picture")
    if w.zero:
        return None
    return len(w.alpha), len(w.beta)
