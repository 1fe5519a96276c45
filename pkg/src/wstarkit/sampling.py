"""Seeded random generators used by the property tests and the CLI verifier.

Everything takes a numpy Generator so identical seeds give identical samples.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import core
from .core import Element
from .exact import QI
from .lattice import range_basis


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_element(shape, gen, scale: float = 1.0) -> Element:
    blocks = [
        (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n)))
        * (scale / np.sqrt(2.0))
        for n in shape
    ]
    return Element(blocks, core.F64)


def random_hermitian(shape, gen, scale: float = 1.0) -> Element:
    x = random_element(shape, gen, scale)
    return 0.5 * (x + x.adjoint())


def random_positive(shape, gen, scale: float = 1.0) -> Element:
    x = random_element(shape, gen, scale)
    return x * x.adjoint()


def random_density(shape, gen, full_rank: bool = True, max_rank=None) -> Element:
    """Positive element of unit trace; optionally rank-deficient."""
    if full_rank:
        x = random_positive(shape, gen)
    else:
        blocks = []
        for n in shape:
            r = int(gen.integers(1, n + 1)) if max_rank is None else min(max_rank, n)
            a = (gen.standard_normal((n, r)) + 1j * gen.standard_normal((n, r)))
            blocks.append(a @ a.conj().T)
        x = Element(blocks, core.F64)
    return x.scale(1.0 / x.trace().real)


def random_invertible(shape, gen, min_sv: float = 0.1, scale: float = 1.0) -> Element:
    """Gaussian element resampled until every block is safely invertible."""
    while True:
        x = random_element(shape, gen, scale)
        smallest = min(
            float(np.linalg.svd(b, compute_uv=False)[-1]) for b in x.blocks
        )
        if smallest >= min_sv * scale:
            return x


def random_unitary(shape, gen) -> Element:
    blocks = []
    for n in shape:
        a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        q, r = np.linalg.qr(a)
        d = np.diagonal(r)
        blocks.append(q * (d / np.abs(d)))
    return Element(blocks, core.F64)


def random_projection(shape, gen, ranks=None) -> Element:
    """Projection with the given (or random, possibly 0 or full) block ranks."""
    u = random_unitary(shape, gen)
    blocks = []
    for i, n in enumerate(shape):
        r = int(gen.integers(0, n + 1)) if ranks is None else ranks[i]
        b = u.blocks[i]
        blocks.append(b[:, :r] @ b[:, :r].conj().T)
    return Element(blocks, core.F64)


def random_partial_isometry(shape, gen, ranks=None) -> Element:
    """u with u*u, uu* projections of the given (or random nonzero-ish) ranks."""
    v = random_unitary(shape, gen)
    w = random_unitary(shape, gen)
    blocks = []
    for i, n in enumerate(shape):
        r = int(gen.integers(0, n + 1)) if ranks is None else ranks[i]
        blocks.append(v.blocks[i][:, :r] @ w.blocks[i][:, :r].conj().T)
    return Element(blocks, core.F64)


def random_partial_isometry_onto(initial: Element, gen) -> Element:
    """Random u with u*u = initial (up to roundoff) and a random final range."""
    basis_in = range_basis(initial)
    w = random_unitary(initial.shape, gen)
    blocks = []
    for bi, wb in zip(basis_in, w.blocks):
        r = bi.shape[1]
        blocks.append(wb[:, :r] @ bi.conj().T)
    return Element(blocks, core.F64)


def random_state(shape, gen, full_rank: bool = False) -> Element:
    """Density of a state; defaults to allowing rank-deficient supports."""
    return random_density(shape, gen, full_rank=full_rank)


# --- exact-backend samples -------------------------------------------------

# unit-modulus Gaussian rationals: Pythagorean phases and the fourth roots of 1
EXACT_PHASES = [
    QI(1), QI(-1), QI(0, 1), QI(0, -1),
    QI(Fraction(3, 5), Fraction(4, 5)), QI(Fraction(3, 5), Fraction(-4, 5)),
    QI(Fraction(-3, 5), Fraction(4, 5)), QI(Fraction(4, 5), Fraction(3, 5)),
    QI(Fraction(5, 13), Fraction(12, 13)), QI(Fraction(-5, 13), Fraction(12, 13)),
]


def random_exact_scalar(gen, span: int = 2, den: int = 3) -> QI:
    re = Fraction(int(gen.integers(-span, span + 1)), int(gen.integers(1, den + 1)))
    im = Fraction(int(gen.integers(-span, span + 1)), int(gen.integers(1, den + 1)))
    return QI(re, im)


def random_exact_element(shape, gen, span: int = 2, den: int = 3) -> Element:
    blocks = []
    for n in shape:
        rows = [[random_exact_scalar(gen, span, den) for _ in range(n)] for _ in range(n)]
        blocks.append(np.array(rows, dtype=object))
    return Element(blocks, core.QQI)


def random_exact_phase(gen) -> QI:
    return EXACT_PHASES[int(gen.integers(0, len(EXACT_PHASES)))]


def random_exact_partial_isometry(shape, gen) -> Element:
    """Exact partial isometry: a partial permutation matrix with exact phases."""
    blocks = []
    for n in shape:
        m = core.zeros((n,), core.QQI).blocks[0].copy()
        cols = list(range(n))
        rows = list(range(n))
        gen.shuffle(cols)
        gen.shuffle(rows)
        k = int(gen.integers(0, n + 1))
        for i, j in zip(rows[:k], cols[:k]):
            m[i, j] = random_exact_phase(gen)
        blocks.append(m)
    return Element(blocks, core.QQI)
