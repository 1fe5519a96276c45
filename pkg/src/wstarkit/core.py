"""Finite-dimensional W*-algebra arithmetic.

The algebra M is a direct sum of full complex matrix blocks
M_{n_1} + ... + M_{n_B}, fixed by its *shape* ``(n_1, ..., n_B)``. An
:class:`Element` carries one square matrix per block, all on the same scalar
backend:

* ``"f64"`` -- numpy complex128; norms, square roots, polar data, supports.
* ``"qq_i"`` -- exact Gaussian rationals (see :mod:`wstarkit.exact`); bit-exact
  ring arithmetic and hashable canonical forms for semigroup closure work.
  Spectral operations exist only when the relevant hermitian matrix has
  rational eigenvalues; otherwise they raise :class:`UnsupportedBackend`.

In this model every element has a polar decomposition x = u|x| with a minimal
partial isometry u (zero on the kernel of |x|), so every element is partially
invertible and the groupoid built on top of this module has all of M as its
arrow set.

Rank decisions use singular values >= eps_rank * (largest singular value of
the whole element); supports are assembled from the SVD singular vectors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .exact import QI, qi

F64 = "f64"
QQI = "qq_i"


class ShapeError(ValueError):
    """Mismatched algebra shapes or non-square blocks."""


class BackendError(TypeError):
    """Mixed or unknown scalar backends."""


class UnsupportedBackend(BackendError):
    """Operation not available on this backend (e.g. norms need radicals)."""


class DomainError(ValueError):
    """Input outside the operation's mathematical domain."""


@dataclass(frozen=True)
class ToleranceConfig:
    eps_eq: float = 1e-9    # entrywise equality
    eps_rank: float = 1e-9  # singular-value rank cutoff (relative)

    def __post_init__(self):
        if self.eps_eq <= 0 or self.eps_rank <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = ToleranceConfig()


class Element:
    """Member of the block algebra. Immutable after construction."""

    __slots__ = ("shape", "blocks", "backend")

    def __init__(self, blocks, backend=F64):
        if backend not in (F64, QQI):
            raise BackendError(f"unknown backend {backend!r}")
        mats = []
        dims = []
        for b in blocks:
            if backend == F64:
                m = np.asarray(b, dtype=complex)
            else:
                m = (
                    b
                    if isinstance(b, np.ndarray) and b.dtype == object
                    else exact.qmat(b)
                )
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeError("blocks must be square matrices")
            mats.append(m)
            dims.append(m.shape[0])
        if not mats:
            raise ShapeError("shape must have at least one block")
        object.__setattr__(self, "blocks", tuple(mats))
        object.__setattr__(self, "shape", tuple(dims))
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        _check_pair(self, other)
        return Element(
            [a + b for a, b in zip(self.blocks, other.blocks)], self.backend
        )

    def __sub__(self, other):
        _check_pair(self, other)
        return Element(
            [a - b for a, b in zip(self.blocks, other.blocks)], self.backend
        )

    def __neg__(self):
        return Element([-b for b in self.blocks], self.backend)

    def __mul__(self, other):
        if isinstance(other, Element):
            _check_pair(self, other)
            if self.backend == QQI:
                return Element(
                    [exact.qmul(a, b) for a, b in zip(self.blocks, other.blocks)],
                    QQI,
                )
            return Element(
                [a @ b for a, b in zip(self.blocks, other.blocks)], self.backend
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if self.backend == QQI:
            c = qi(c)
        else:
            c = complex(c)
        return Element([c * b for b in self.blocks], self.backend)

    def adjoint(self):
        if self.backend == F64:
            return Element([b.conj().T for b in self.blocks], F64)
        return Element([exact.qadjoint(b) for b in self.blocks], QQI)

    def trace(self):
        if self.backend == F64:
            return complex(sum(np.trace(b) for b in self.blocks))
        t = exact.ZERO
        for b in self.blocks:
            t = t + exact.qtrace(b)
        return t

    # -- conversions ------------------------------------------------------
    def as_float(self) -> "Element":
        if self.backend == F64:
            return self
        return Element([exact.qfloat(b) for b in self.blocks], F64)

    def key(self) -> tuple:
        """Canonical hashable form; exact backend only (bit-exact dedup)."""
        if self.backend != QQI:
            raise UnsupportedBackend("canonical keys need exact scalars")
        return tuple(exact.qkey(b) for b in self.blocks)

    def __repr__(self):
        return f"Element(shape={self.shape}, backend={self.backend!r})"


def _check_pair(x: Element, y: Element):
    if not isinstance(y, Element):
        raise TypeError("expected an Element")
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch: {x.shape} vs {y.shape}")
    if x.backend != y.backend:
        raise BackendError(f"backend mismatch: {x.backend} vs {y.backend}")


def zeros(shape, backend=F64) -> Element:
    if backend == F64:
        return Element([np.zeros((n, n), dtype=complex) for n in shape], F64)
    return Element([exact.qzeros(n) for n in shape], QQI)


def identity(shape, backend=F64) -> Element:
    if backend == F64:
        return Element([np.eye(n, dtype=complex) for n in shape], F64)
    return Element([exact.qeye(n) for n in shape], QQI)


def matrix_unit(shape, block, i, j, backend=F64) -> Element:
    """e_ij supported in one block, zero elsewhere."""
    e = zeros(shape, backend)
    blocks = [b.copy() for b in e.blocks]
    blocks[block][i, j] = exact.ONE if backend == QQI else 1.0
    return Element(blocks, backend)


def algebra_basis(shape, backend=F64):
    """All matrix units of every block, in block/row/column order."""
    out = []
    for b, n in enumerate(shape):
        for i in range(n):
            for j in range(n):
                out.append(matrix_unit(shape, b, i, j, backend))
    return out


def embed_block(shape, block, mat, backend=F64) -> Element:
    """Element equal to ``mat`` in one block and zero elsewhere."""
    z = zeros(shape, backend)
    blocks = list(z.blocks)
    if backend == F64:
        blocks[block] = np.asarray(mat, dtype=complex)
    else:
        blocks[block] = mat if isinstance(mat, np.ndarray) else exact.qmat(mat)
    return Element(blocks, backend)


# -- comparison and defects -----------------------------------------------

def equal(x: Element, y: Element, tol: ToleranceConfig | None = None) -> bool:
    """Entrywise equality: bit-exact on qq_i, within eps_eq on f64."""
    _check_pair(x, y)
    if x.backend == QQI:
        return x.key() == y.key()
    eps = (tol or DEFAULT_TOL).eps_eq
    return all(
        np.max(np.abs(a - b), initial=0.0) <= eps
        for a, b in zip(x.blocks, y.blocks)
    )


def dist(x: Element, y: Element) -> float:
    """Operator-norm distance (exact elements are projected to float)."""
    return opnorm(x.as_float() - y.as_float())


def is_zero(x: Element, tol: ToleranceConfig | None = None) -> bool:
    return equal(x, zeros(x.shape, x.backend), tol)


# -- norms and spectral calculus ------------------------------------------

def opnorm(x: Element) -> float:
    """Operator norm: max over blocks of the largest singular value."""
    if x.backend != F64:
        raise UnsupportedBackend("operator norm needs the float backend")
    return max(
        float(np.linalg.svd(b, compute_uv=False)[0]) if b.size else 0.0
        for b in x.blocks
    )


def trace_norm(x: Element) -> float:
    """Sum of all singular values across blocks (predual norm)."""
    if x.backend != F64:
        raise UnsupportedBackend("trace norm needs the float backend")
    return float(
        sum(np.sum(np.linalg.svd(b, compute_uv=False)) for b in x.blocks)
    )


def is_hermitian(x: Element, tol: ToleranceConfig | None = None) -> bool:
    return equal(x, x.adjoint(), tol)


def sqrt_positive(x: Element, tol: ToleranceConfig | None = None) -> Element:
    """Unique positive square root of a positive semidefinite element.

    Eigenvalues below the rank cutoff are zeroed (same convention as the
    SVD-based decompositions): the square root steepens roundoff noise at
    zero eigenvalues into O(sqrt(eps)) garbage otherwise.
    """
    if x.backend != F64:
        raise UnsupportedBackend("square roots need the float backend")
    tol = tol or DEFAULT_TOL
    if not is_hermitian(x, tol):
        raise DomainError("sqrt_positive: element is not hermitian")
    eigs = [np.linalg.eigh(b) for b in x.blocks]
    scale = max(((w[-1] if w.size else 0.0) for w, _ in eigs), default=0.0)
    cut = tol.eps_rank * scale
    out = []
    for w, v in eigs:
        if w.size and w[0] < -tol.eps_eq:
            raise DomainError(f"sqrt_positive: negative eigenvalue {w[0]}")
        w = np.where(w > cut, w, 0.0)
        out.append((v * np.sqrt(w)) @ v.conj().T)
    return Element(out, F64)


def _svd_data(x: Element, tol: ToleranceConfig):
    """Blockwise SVD with one global rank cutoff for the whole element."""
    svds = [np.linalg.svd(b) for b in x.blocks]
    smax = max((s[0] if s.size else 0.0) for _, s, _ in svds)
    cut = tol.eps_rank * smax
    ranks = [int(np.sum(s > cut)) for _, s, _ in svds]
    return svds, ranks


def polar_decompose(x: Element, tol: ToleranceConfig | None = None):
    """x = u |x| with the minimal polar isometry u (zero on ker |x|).

    Returns (u, absx); u*u equals the support projection of absx, and absx
    is positive with the below-cutoff singular values zeroed.
    """
    if x.backend != F64:
        raise UnsupportedBackend("polar decomposition needs the float backend")
    tol = tol or DEFAULT_TOL
    svds, ranks = _svd_data(x, tol)
    ublocks, pblocks = [], []
    for (U, s, Vh), r in zip(svds, ranks):
        ublocks.append(U[:, :r] @ Vh[:r, :])
        pblocks.append((Vh[:r, :].conj().T * s[:r]) @ Vh[:r, :])
    return Element(ublocks, F64), Element(pblocks, F64)


def rank_vector(x: Element, tol: ToleranceConfig | None = None):
    """Per-block ranks as a tuple of ints."""
    if x.backend == QQI:
        s = _exact_support(x.adjoint() * x)
        if s is None:
            raise UnsupportedBackend("exact rank needs rational eigenvalues")
        return tuple(int(exact.qtrace(b).re) for b in s.blocks)
    _, ranks = _svd_data(x, tol or DEFAULT_TOL)
    return tuple(ranks)


def _exact_support(h: Element):
    """Support projection of an exact hermitian element, or None."""
    outs = []
    for b in h.blocks:
        s = exact.support_projection(b)
        if s is None:
            return None
        outs.append(s)
    return Element(outs, QQI)


def left_support(x: Element, tol: ToleranceConfig | None = None) -> Element:
    """Smallest projection l(x) with l(x) x = x."""
    if x.backend == QQI:
        s = _exact_support(x * x.adjoint())
        if s is None:
            raise UnsupportedBackend(
                "exact supports need x x* with rational eigenvalues"
            )
        return s
    tol = tol or DEFAULT_TOL
    svds, ranks = _svd_data(x, tol)
    return Element(
        [U[:, :r] @ U[:, :r].conj().T for (U, _, _), r in zip(svds, ranks)], F64
    )


def right_support(x: Element, tol: ToleranceConfig | None = None) -> Element:
    """Smallest projection r(x) with x r(x) = x."""
    if x.backend == QQI:
        s = _exact_support(x.adjoint() * x)
        if s is None:
            raise UnsupportedBackend(
                "exact supports need x* x with rational eigenvalues"
            )
        return s
    tol = tol or DEFAULT_TOL
    svds, ranks = _svd_data(x, tol)
    return Element(
        [Vh[:r, :].conj().T @ Vh[:r, :] for (_, _, Vh), r in zip(svds, ranks)],
        F64,
    )


def support(x: Element, tol: ToleranceConfig | None = None) -> Element:
    """s(x) for hermitian x (where l = r)."""
    if not is_hermitian(x, tol):
        raise DomainError("support is defined for hermitian elements")
    return right_support(x, tol)


def pinv_positive(x: Element, tol: ToleranceConfig | None = None) -> Element:
    """Inverse on the support of a positive element, zero on its kernel."""
    if x.backend == QQI:
        outs = []
        for b in x.blocks:
            p = exact.pinv_hermitian(b)
            if p is None:
                raise UnsupportedBackend(
                    "exact pseudo-inverse needs rational eigenvalues"
                )
            outs.append(p)
        return Element(outs, QQI)
    tol = tol or DEFAULT_TOL
    if not is_hermitian(x, tol):
        raise DomainError("pinv_positive expects a hermitian element")
    out = []
    wmax = max(
        (float(np.max(np.abs(np.linalg.eigvalsh(b)))) if b.size else 0.0)
        for b in x.blocks
    )
    cut = tol.eps_rank * wmax
    for b in x.blocks:
        w, v = np.linalg.eigh(b)
        inv = np.where(np.abs(w) > cut, 1.0 / np.where(w == 0, 1.0, w), 0.0)
        out.append((v * inv) @ v.conj().T)
    return Element(out, F64)


# -- predicates ------------------------------------------------------------

def is_projection(x: Element, tol: ToleranceConfig | None = None) -> bool:
    return is_hermitian(x, tol) and equal(x * x, x, tol)


def is_partial_isometry(x: Element, tol: ToleranceConfig | None = None) -> bool:
    return equal(x * x.adjoint() * x, x, tol)


def is_unitary(x: Element, tol: ToleranceConfig | None = None) -> bool:
    one = identity(x.shape, x.backend)
    return equal(x.adjoint() * x, one, tol) and equal(x * x.adjoint(), one, tol)


def is_positive(x: Element, tol: ToleranceConfig | None = None) -> bool:
    if not is_hermitian(x, tol):
        return False
    if x.backend == QQI:
        for b in x.blocks:
            sys = exact.rational_eigensystem(b)
            if sys is None:
                raise UnsupportedBackend(
                    "exact positivity needs rational eigenvalues"
                )
            if any(lam < 0 for lam, _ in sys):
                return False
        return True
    eps = (tol or DEFAULT_TOL).eps_eq
    return all(
        (not b.size) or float(np.linalg.eigvalsh(b)[0]) >= -eps
        for b in x.blocks
    )


def is_central(x: Element, tol: ToleranceConfig | None = None) -> bool:
    """Commutation with all matrix units of every block."""
    for e in algebra_basis(x.shape, x.backend):
        if not equal(x * e, e * x, tol):
            return False
    return True


# -- JSON ------------------------------------------------------------------

def _entry_to_json(v, backend):
    if backend == F64:
        return [float(v.real), float(v.imag)]
    return [str(v.re), str(v.im)]


def _entry_from_json(pair, backend):
    if backend == F64:
        return complex(float(pair[0]), float(pair[1]))
    return QI(Fraction(str(pair[0])), Fraction(str(pair[1])))


def to_json_dict(x: Element) -> dict:
    return {
        "shape": list(x.shape),
        "backend": x.backend,
        "blocks": [
            [
                [_entry_to_json(b[i, j], x.backend) for j in range(b.shape[1])]
                for i in range(b.shape[0])
            ]
            for b in x.blocks
        ],
    }


def from_json_dict(d: dict) -> Element:
    backend = d.get("backend", F64)
    if backend not in (F64, QQI):
        raise BackendError(f"unknown backend {backend!r}")
    shape = tuple(int(n) for n in d["shape"])
    blocks = []
    for n, rows in zip(shape, d["blocks"]):
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeError("block data does not match declared shape")
        blocks.append(
            [[_entry_from_json(v, backend) for v in row] for row in rows]
        )
    if len(blocks) != len(shape):
        raise ShapeError("block count does not match declared shape")
    return Element(blocks, backend)


def dumps(x: Element) -> str:
    return json.dumps(to_json_dict(x), separators=(",", ":"), sort_keys=True)


def loads(s: str) -> Element:
    return from_json_dict(json.loads(s))
