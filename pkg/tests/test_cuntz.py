"""Symbolic isometry-word calculus: s_i* s_j = delta_ij and its consequences."""
import pytest

from wstarkit import cuntz, semigroups
from wstarkit.cuntz import CuntzWord


def w(n, alpha=(), beta=()):
    return CuntzWord(n, tuple(alpha), tuple(beta))


def test_pinned_products():
    # s_1* s_1 = 1, s_1* s_2 = 0
    assert cuntz.cuntz_mul(w(2, (), (1,)), w(2, (1,), ())) == w(2)
    assert cuntz.cuntz_mul(w(2, (), (1,)), w(2, (2,), ())).zero
    # prefix absorption: (s_1 s_2*)(s_2 s_2*) = s_1 s_2*
    x = w(2, (1,), (2,))
    assert cuntz.cuntz_mul(x, w(2, (2,), (2,))) == x
    # range projections multiply by prefix comparison
    p1 = w(2, (1,), (1,))
    p12 = w(2, (1, 2), (1, 2))
    assert cuntz.cuntz_mul(p1, p12) == p12
    assert cuntz.cuntz_mul(p12, p1) == p12
    assert cuntz.cuntz_mul(w(2, (2,), (2,)), p12).zero


def test_star_and_projections():
    x = w(3, (1, 2), (3,))
    assert cuntz.cuntz_star(x) == w(3, (3,), (1, 2))
    # x x* x = x for every word
    for word in cuntz.enumerate_words(2, 3):
        again = cuntz.cuntz_mul(word, cuntz.cuntz_mul(
            cuntz.cuntz_star(word), word))
        assert again == word
    # zero is absorbing
    z = CuntzWord.zero_word(3)
    assert cuntz.cuntz_mul(z, x).zero and cuntz.cuntz_mul(x, z).zero


def test_serialization_round_trip():
    for word in cuntz.enumerate_words(3, 3):
        s = cuntz.cuntz_dumps(word)
        assert cuntz.cuntz_loads(s, 3) == word
    assert cuntz.cuntz_dumps(w(2, (1, 2), (1,))) == "s[1,2]S[1]"
    assert cuntz.cuntz_loads("0", 2).zero
    with pytest.raises(Exception):
        cuntz.cuntz_loads("garbage", 2)
    with pytest.raises(Exception):
        cuntz.cuntz_loads("s[4]S[]", 3)  # letter out of range


def test_axiom_check_exhaustive():
    for n in (1, 2, 3):
        rep = cuntz.cuntz_axiom_check(n, 3)
        assert rep["pass"], rep["failures"][:3]
        assert rep["max_defect"] == 0.0
        assert rep["params"] == {"N": n, "depth": 3}


def test_single_isometry_never_vanishes_and_matches_bicyclic():
    words = [x for x in cuntz.enumerate_words(1, 3) if not x.zero]
    for a in words:
        for b in words:
            prod = cuntz.cuntz_mul(a, b)
            assert not prod.zero  # N=1 words form the bicyclic monoid
            j, k = cuntz.toeplitz_pair(prod)
            letters = ("u" * len(a.alpha) + "U" * len(a.beta)
                       + "u" * len(b.alpha) + "U" * len(b.beta))
            assert (j, k) == semigroups.bicyclic_form(letters)


def test_enumerate_words_counts():
    # n=2: weight w has (2^(w+1) - 1) words spread over splits, plus zero
    words = cuntz.enumerate_words(2, 2)
    assert words[-1].zero
    nonzero = [x for x in words if not x.zero]
    assert len(nonzero) == len({cuntz.cuntz_dumps(x) for x in nonzero})
    by_weight = {}
    for x in nonzero:
        by_weight.setdefault(len(x.alpha) + len(x.beta), 0)
        by_weight[len(x.alpha) + len(x.beta)] += 1
    assert by_weight[0] == 1
    assert by_weight[1] == 4   # s_1, s_2, s_1*, s_2*
    assert by_weight[2] == 12  # 4 + 4 + 4 over the three splits
