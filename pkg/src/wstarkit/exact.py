"""Exact Gaussian-rational scalars and the little linear algebra they need.

The semigroup engine deduplicates matrices bit-exactly, which floating point
cannot do soundly, so the exact backend stores every entry as a + b*i with
``fractions.Fraction`` parts. Matrices are numpy object arrays of QI scalars;
``@`` and ``np.dot`` both work on those.

Spectral work (supports, pseudo-inverses) is only possible when the relevant
hermitian matrix has rational eigenvalues. We get candidate eigenvalues from
a float eigendecomposition and then *verify exactly*; a failed verification
raises rather than returning anything approximate.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


class QI:
    """Gaussian rational a + b*i, immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QI is immutable")

    # -- arithmetic -------------------------------------------------------
    # binary ops return NotImplemented on foreign operands so that, e.g.,
    # numpy object arrays get to handle QI * array elementwise
    def __add__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return QI(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return QI(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _qi_maybe(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def reciprocal(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("reciprocal of 0")
        return QI(self.re / n, -self.im / n)

    def conj(self):
        return QI(self.re, -self.im)

    # numpy's complex helpers look for .conjugate()
    conjugate = conj

    # -- structure --------------------------------------------------------
    def __eq__(self, other):
        try:
            other = qi(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return float(self.re) + 1j * float(self.im)

    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


ZERO = QI(0)
ONE = QI(1)
I = QI(0, 1)


def _qi_maybe(value):
    if isinstance(value, QI):
        return value
    if isinstance(value, (int, Fraction, str)):
        return QI(Fraction(value))
    if isinstance(value, tuple) and len(value) == 2:
        return QI(Fraction(value[0]), Fraction(value[1]))
    return None


def qi(value) -> QI:
    """Coerce ints, Fractions, 'p/q' strings, and (re, im) pairs to QI."""
    out = _qi_maybe(value)
    if out is None:
        raise TypeError(f"cannot coerce {value!r} to a Gaussian rational")
    return out


def qmat(rows) -> np.ndarray:
    """Object matrix from nested lists of QI-coercible entries."""
    return np.array([[qi(v) for v in row] for row in rows], dtype=object)


def qzeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out[:] = ZERO
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product skipping zero entries (closure elements are sparse)."""
    n, k = a.shape
    m = b.shape[1]
    out = qzeros(n, m)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            av = arow[t]
            if not av:
                continue
            brow = b[t]
            for j in range(m):
                bv = brow[j]
                if bv:
                    orow[j] = orow[j] + av * bv
    return out


def qadjoint(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.T.shape, dtype=object)
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            out[i, j] = a[j, i].conj()
    return out


def qtrace(a: np.ndarray) -> QI:
    t = ZERO
    for i in range(a.shape[0]):
        t = t + a[i, i]
    return t


def qkey(a: np.ndarray) -> tuple:
    """Hashable canonical form (tuple of tuples of (re, im) Fractions)."""
    return tuple(
        tuple((a[i, j].re, a[i, j].im) for j in range(a.shape[1]))
        for i in range(a.shape[0])
    )


def qfloat(a: np.ndarray) -> np.ndarray:
    return np.array([[complex(v) for v in row] for row in a], dtype=complex)


def _add_scalar(mat: np.ndarray, c: Fraction) -> np.ndarray:
    out = mat.copy()
    for i in range(mat.shape[0]):
        out[i, i] = out[i, i] + QI(c)
    return out


def rational_eigensystem(a: np.ndarray, max_den: int = 10**9):
    """Exact spectral decomposition of a hermitian object matrix with
    rational eigenvalues.

    Returns a list of (eigenvalue: Fraction, projection: object matrix) or
    None when the eigenvalues are not (detectably) rational. Candidates come
    from float eigenvalues rounded via limit_denominator and are then checked
    exactly: the product of (a - lam_i) over the distinct candidates must be
    exactly zero, and the Lagrange projections must resolve the identity.
    """
    n = a.shape[0]
    fl = qfloat(a)
    evals = np.linalg.eigvalsh(fl)
    cands: list[Fraction] = []
    for v in evals:
        f = Fraction(float(v)).limit_denominator(max_den)
        if f not in cands:
            cands.append(f)
    # exact verification that the candidates annihilate a
    prod = qeye(n)
    for lam in cands:
        prod = prod @ _add_scalar(a, -lam)
    if any(bool(prod[i, j]) for i in range(n) for j in range(n)):
        return None
    # Lagrange interpolation projections onto each eigenspace
    out = []
    for lam in cands:
        p = qeye(n)
        for mu in cands:
            if mu == lam:
                continue
            p = p @ _add_scalar(a, -mu)
            p = p * QI(Fraction(1) / (lam - mu))
        out.append((lam, p))
    return out


def support_projection(a: np.ndarray):
    """Exact support (sum of nonzero-eigenvalue projections) of a hermitian
    object matrix, or None when not rational-diagonalizable."""
    sys = rational_eigensystem(a)
    if sys is None:
        return None
    n = a.shape[0]
    s = qzeros(n, n)
    for lam, p in sys:
        if lam != 0:
            s = s + p
    return s


def pinv_hermitian(a: np.ndarray):
    """Exact pseudo-inverse of a hermitian object matrix (inverse on the
    support, zero on the kernel), or None when not rational-diagonalizable."""
    sys = rational_eigensystem(a)
    if sys is None:
        return None
    n = a.shape[0]
    out = qzeros(n, n)
    for lam, p in sys:
        if lam != 0:
            out = out + p * QI(Fraction(1) / lam)
    return out
