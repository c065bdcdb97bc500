"""Exact structural operations on complex matrices.

Kronecker products, column-stacking vectorization, the inner-index swap
involution, and the partial trace that contracts the first Kronecker factor.
Index conventions (1-based in formulas, 0-based in storage):

    vec E_{i,j}        = e_{i+(j-1)n}                (column stacking)
    swap:  E_{i+(j-1)n, k+(l-1)n} -> E_{i+(k-1)n, j+(l-1)n}
    ptrace: E_{i+(j-1)n, k+(l-1)n} -> [j == l] E_{i,k}

The swap is realized as a pure entry permutation (a 4-index transpose), so
applying it twice returns the input bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

__all__ = [
    "Superoperator",
    "kron",
    "vec",
    "unvec",
    "psi",
    "ptrace_q",
]


def _as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DimensionError(f"{name} has non-finite entries")
    return m


def _factor_dim(e: np.ndarray) -> int:
    side = e.shape[0]
    if e.shape[0] != e.shape[1]:
        raise DimensionError(f"superoperator matrix must be square, got {e.shape}")
    n = int(round(np.sqrt(side)))
    if n * n != side:
        raise DimensionError(f"superoperator side {side} is not a perfect square")
    return n


@dataclass(frozen=True)
class Superoperator:
    """An n^2 x n^2 matrix tagged with its Kronecker factor dimension n."""

    factor_dim: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _as_complex_matrix(self.mat, "superoperator")
        n = self.factor_dim
        if m.shape != (n * n, n * n):
            raise DimensionError(
                f"superoperator for factor_dim={n} must be {n*n}x{n*n}, got {m.shape}"
            )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_matrix(cls, mat) -> "Superoperator":
        m = _as_complex_matrix(mat, "superoperator")
        return cls(_factor_dim(m), m)

    def psi(self) -> "Superoperator":
        return Superoperator(self.factor_dim, psi(self.mat))

    def ptrace(self) -> np.ndarray:
        return ptrace_q(self.mat)


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result equals a[i, j] * b."""
    return np.kron(_as_complex_matrix(a, "a"), _as_complex_matrix(b, "b"))


def vec(a) -> np.ndarray:
    """Column-stacking vectorization: entry (i, j) lands at i + (j-1)n."""
    return _as_complex_matrix(a, "matrix").flatten(order="F")


def unvec(v, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an n x n matrix."""
    w = np.asarray(v, dtype=complex).ravel()
    if w.size != n * n:
        raise DimensionError(f"vector of length {w.size} cannot unvec to {n}x{n}")
    return w.reshape((n, n), order="F")


def _super_matrix(e) -> np.ndarray:
    if isinstance(e, Superoperator):
        return e.mat
    m = _as_complex_matrix(e, "superoperator")
    _factor_dim(m)
    return m


def psi(e):
    """Swap the inner indices of an n^2 x n^2 matrix.

    Linear extension of E_{i+(j-1)n, k+(l-1)n} -> E_{i+(k-1)n, j+(l-1)n};
    an involution, and it carries kron(conj(A), B) to vec(B) vec(A)^*.
    Implemented as a transpose of the 4-index reshape, hence bit-exact.
    """
    if isinstance(e, Superoperator):
        return e.psi()
    m = _super_matrix(e)
    n = _factor_dim(m)
    # entry (a+bn, p+qn) sits at [b, a, q, p] in the C-order reshape
    return np.ascontiguousarray(
        m.reshape(n, n, n, n).transpose(3, 1, 2, 0).reshape(n * n, n * n)
    )


def ptrace_q(e) -> np.ndarray:
    """Partial trace over the first Kronecker factor.

    Linear extension of E_{i+(j-1)n, k+(l-1)n} -> [j == l] E_{i,k}; positive,
    and Q(vec(A) vec(B)^*) = A B^*.
    """
    m = _super_matrix(e)
    n = _factor_dim(m)
    return np.einsum("babp->ap", m.reshape(n, n, n, n))
