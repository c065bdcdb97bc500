"""Constructive contraction certificates.

For an outer-contractive tuple the resolvent construction gives a positive
definite L with L - sum X_i L X_i^* = I exactly; S = L^(-1/2) then conjugates
the tuple to a row contraction.  Scaling the tuple first turns this into a
certificate for any target above the outer spectral radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import DomainError, NumericalFailureError
from .spectra import build_t, outer_spectral_radius
from .tensor_ops import Superoperator, psi, ptrace_q
from .tuples import MatrixTuple

__all__ = [
    "PickMatrix",
    "LyapunovCertificate",
    "pick_matrix",
    "lyapunov_certificate",
    "similarity_certificate",
    "row_norm",
    "col_norm",
]


@dataclass(frozen=True)
class PickMatrix:
    """psi of the resolvent (1 - T)^(-1); PSD, with rank = algebra dimension."""

    p: Superoperator
    x: MatrixTuple
    rank: int
    algebra_dim: int
    resolvent_cond: float
    hermitian_defect: float


@dataclass(frozen=True)
class LyapunovCertificate:
    l: np.ndarray = field(repr=False)       # positive definite, L >= I
    residual: float = 0.0                    # ||L - sum X L X^* - I||_F
    s: np.ndarray = field(default=None, repr=False)  # L^(-1/2)
    row_norm: float = 0.0                    # of the conjugated tuple
    resolvent_cond: float = 0.0
    target: float | None = None              # set by similarity_certificate


def row_norm(x: MatrixTuple) -> float:
    """2-norm of the block row [X_1 ... X_d] = sqrt(lambda_max(sum X X^*))."""
    g = sum(m @ m.conj().T for m in x)
    return float(np.sqrt(max(np.max(np.linalg.eigvalsh(g)), 0.0)))


def col_norm(x: MatrixTuple) -> float:
    """2-norm of the block column, sqrt(lambda_max(sum X^* X))."""
    g = sum(m.conj().T @ m for m in x)
    return float(np.sqrt(max(np.max(np.linalg.eigvalsh(g)), 0.0)))


def pick_matrix(x: MatrixTuple) -> PickMatrix:
    """psi((1 - T)^(-1)) for an outer-contractive tuple.

    Raises DomainError when rho_hat >= 1; the resolvent condition number is
    reported so certificate quality is visible as rho_hat approaches 1.
    """
    rho_hat = outer_spectral_radius(x)
    if rho_hat >= 1.0 - 1e-10:
        raise DomainError(
            f"tuple not outer-contractive (rho_hat = {rho_hat:.12g}); rescale first"
        )
    t = build_t(x).mat
    n2 = t.shape[0]
    resolvent = np.linalg.inv(np.eye(n2) - t)
    cond = float(np.linalg.cond(np.eye(n2) - t, 2))
    p = psi(resolvent)
    defect = float(
        np.linalg.norm(p - p.conj().T, "fro") / max(np.linalg.norm(p, "fro"), 1e-300)
    )
    if defect > 1e-9:
        raise NumericalFailureError(
            f"Pick matrix is not Hermitian within tolerance (defect {defect:.3e})"
        )
    sv = np.linalg.svd((p + p.conj().T) / 2.0, compute_uv=False)
    rank = int(np.sum(sv > DEFAULT_CONFIG.rank_tol * sv[0])) if sv[0] > 0 else 0
    return PickMatrix(
        p=Superoperator(x.n, p),
        x=x,
        rank=rank,
        algebra_dim=rank,
        resolvent_cond=cond,
        hermitian_defect=defect,
    )


def _inv_sqrt(l: np.ndarray) -> np.ndarray:
    """L^(-1/2) by Hermitian eigendecomposition; refuses near-singular input."""
    w, u = np.linalg.eigh((l + l.conj().T) / 2.0)
    if np.min(w) < 1e-12:
        raise NumericalFailureError(
            f"matrix not safely positive definite (min eigenvalue {np.min(w):.3e}); "
            "refusing to build the inverse square root"
        )
    return (u * (1.0 / np.sqrt(w))) @ u.conj().T


def lyapunov_certificate(x: MatrixTuple) -> LyapunovCertificate:
    """L = Q(P) with L - sum X_i L X_i^* = I, plus the row-contracting similarity."""
    pick = pick_matrix(x)
    l = ptrace_q(pick.p)
    l = (l + l.conj().T) / 2.0
    residual = float(
        np.linalg.norm(
            l - sum(m @ l @ m.conj().T for m in x) - np.eye(x.n), "fro"
        )
    )
    if residual > 1e-8 * (1.0 + np.linalg.norm(l, 2)):
        raise NumericalFailureError(
            f"Lyapunov residual {residual:.3e} exceeds tolerance; "
            f"resolvent condition was {pick.resolvent_cond:.3e}"
        )
    s = _inv_sqrt(l)
    conjugated = x.conjugated(s)
    return LyapunovCertificate(
        l=l,
        residual=residual,
        s=s,
        row_norm=row_norm(conjugated),
        resolvent_cond=pick.resolvent_cond,
    )


def similarity_certificate(x: MatrixTuple, target: float) -> LyapunovCertificate:
    """A similarity bringing the block-row norm of x under ``target``.

    Runs the Lyapunov construction on x / target; the reported row norm is
    for the original tuple conjugated by the resulting S, so it is < target.
    As target decreases to rho_hat this realizes the similarity infimum.
    """
    rho_hat = outer_spectral_radius(x)
    if not target > rho_hat:
        raise DomainError(
            f"target {target} must exceed the outer spectral radius {rho_hat:.12g}"
        )
    scaled_cert = lyapunov_certificate(x.scaled(1.0 / target))
    conjugated = x.conjugated(scaled_cert.s)
    return LyapunovCertificate(
        l=scaled_cert.l,
        residual=scaled_cert.residual,
        s=scaled_cert.s,
        row_norm=row_norm(conjugated),
        resolvent_cond=scaled_cert.resolvent_cond,
        target=target,
    )
