"""Inverse semigroup closures, monogenic normal forms, structural checks."""
import numpy as np
import pytest

from wstarkit import core, sampling, semigroups

# closure sizes frozen from a standalone brute-force enumeration with exact
# Gaussian-rational arithmetic (products deduplicated by value)
SHIFT_CLOSURE_SIZES = {3: 14, 4: 30, 5: 55}
MATRIX_UNIT_CLOSURE_SIZES = {2: 5, 3: 10}


def _matrix_units(n):
    return [core.matrix_unit((n,), 0, i, j, core.QQI)
            for i in range(n) for j in range(n)]


def test_matrix_unit_closure_sizes_and_structure():
    for n, size in MATRIX_UNIT_CLOSURE_SIZES.items():
        S = semigroups.generate_closure(_matrix_units(n))
        assert S.size == size, (n, S.size)
        assert S.flags["closed"]
        ok, witness = semigroups.check_inverse_semigroup(S)
        assert ok and witness is None
        # n^2 units plus the zero element
        assert S.size == n * n + 1
        # idempotents: the n diagonal units and zero
        assert len(S.idempotent_indices()) == n + 1
        print(f"matrix units n={n}: closure {S.size}, "
              f"{len(S.idempotent_indices())} idempotents")


def test_closure_table_is_total_and_star_involutive():
    S = semigroups.generate_closure(_matrix_units(2))
    n = S.size
    assert S.table.shape == (n, n) and np.all(S.table >= 0)
    assert np.all(S.star[S.star] == np.arange(n))
    # table realizes the actual products
    for i in range(n):
        for j in range(n):
            prod = S.elements[i] * S.elements[j]
            assert S.elements[S.table[i, j]].key() == prod.key()


def test_closure_deterministic_order():
    a = semigroups.generate_closure(_matrix_units(2))
    b = semigroups.generate_closure(list(reversed(_matrix_units(2))))
    assert [e.key() for e in a.elements] == [e.key() for e in b.elements]
    assert np.array_equal(a.table, b.table)


def test_closure_cap_marks_incomplete():
    units = _matrix_units(3)
    S = semigroups.generate_closure(units, cap=4)
    assert not S.flags["closed"]
    assert S.size == 4


def test_truncated_shift_closure_sizes():
    for n, size in SHIFT_CLOSURE_SIZES.items():
        u = semigroups.truncated_shift(n)
        S = semigroups.generate_closure([u])
        assert S.size == size, (n, S.size)
        assert S.flags["closed"] and S.flags["is_inverse_semigroup"]
        print(f"shift n={n}: closure size {S.size}")


def test_truncated_shift_is_power_partial_isometry():
    u = semigroups.truncated_shift(4)
    w = u
    for _ in range(4):
        assert (w * w.adjoint() * w).key() == w.key()
        w = w * u
    # nilpotent of order n
    assert core.dist(w.as_float(), core.zeros((4,))) == 0.0


def test_monogenic_normal_form_pinned():
    # convention: p counts the u*^k u^k factor, q the u^l u*^l factor, so
    # Uu = p_1, uU = q_1, uuU = q_2 u, UUu = p_2 u^-1
    assert semigroups.monogenic_normal_form("Uu") == \
        semigroups.MonogenicForm(1, 0, 0)
    assert semigroups.monogenic_normal_form("uU") == \
        semigroups.MonogenicForm(0, 1, 0)
    assert semigroups.monogenic_normal_form("uuU") == \
        semigroups.MonogenicForm(0, 2, 1)
    assert semigroups.monogenic_normal_form("UUu") == \
        semigroups.MonogenicForm(2, 0, -1)
    assert semigroups.monogenic_normal_form("u") == \
        semigroups.MonogenicForm(0, 1, 1)
    assert semigroups.monogenic_normal_form("uUuuUU") == \
        semigroups.MonogenicForm(0, 2, 0)


def test_normal_form_matches_evaluation():
    u = semigroups.truncated_shift(5)
    gen = np.random.default_rng(0)
    letters = gen.choice(list("uU"), size=(40, 7))
    for row in letters:
        word = "".join(row)
        form = semigroups.monogenic_normal_form(word)
        lhs = semigroups.evaluate_word(word, u)
        assert lhs.key() == form.evaluate(u).key(), word


def test_gluskin_and_bicyclic_forms():
    u = semigroups.truncated_shift(4)
    gen = np.random.default_rng(1)
    for _ in range(30):
        word = "".join(gen.choice(list("uU"), size=6))
        k, l, m = semigroups.gluskin_form(word)
        assert 0 <= k <= l and 0 <= m <= l
        expanded = "u" * k + "U" * l + "u" * m
        assert semigroups.evaluate_word(expanded, u).key() == \
            semigroups.evaluate_word(word, u).key()
    # bicyclic reduction treats u as an isometry: only u* u cancels
    assert semigroups.bicyclic_form("Uu") == (0, 0)
    assert semigroups.bicyclic_form("uU") == (1, 1)
    assert semigroups.bicyclic_form("uUU") == (1, 2)
    assert semigroups.bicyclic_form("uUuU") == (1, 1)


def test_abelian_dichotomy():
    gen = sampling.rng(25)
    for shape in [(1,), (1, 1, 1)]:
        rep = semigroups.abelian_dichotomy_check(shape, gen)
        assert rep["pass"], shape
    rep = semigroups.abelian_dichotomy_check((2,), gen)
    assert rep["pass"]
    # a non-diagonal shape exhibits a concrete non-commuting witness
    assert rep["counterexample"] is not None


def test_properly_infinite_obstruction_all_small_shapes():
    gen = sampling.rng(26)
    for shape in [(1,), (2,), (3,), (1, 1), (2, 3)]:
        rep = semigroups.properly_infinite_obstruction(shape, gen)
        assert rep["pass"], shape
        assert "rank" in rep["reason"]
