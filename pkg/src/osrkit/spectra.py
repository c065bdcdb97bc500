"""Eigenvalue machinery for matrix tuples.

Spectral radius, maximal spectrum with degeneracy indices, the outer spectral
radius rho_hat(X) = sqrt(rho(sum kron(conj(X_i), X_i))), and the two
equivalent root-of-norm sequences that converge to it (word enumeration and
superoperator powers).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import DimensionError, DomainError, NumericalFailureError, ResourceBudgetError
from .tensor_ops import Superoperator, kron, psi
from .tuples import MatrixTuple

__all__ = [
    "Spectrum",
    "MaximalSpectrum",
    "eigen_all",
    "eigen_pairs",
    "schur_factors",
    "spectral_radius",
    "build_t",
    "outer_spectral_radius",
    "degeneracy_index",
    "maximal_spectrum",
    "gelfand_seq_words",
    "gelfand_seq_power",
]


def _square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def _eigvals(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(
            f"eigenvalue solver failed on a {m.shape[0]}x{m.shape[1]} matrix: {exc}"
        ) from exc


def _cluster(values: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Greedy clustering of eigenvalues within an absolute tolerance.

    Returns (representative, multiplicity) pairs; the representative is the
    cluster mean.
    """
    remaining = list(values)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            center = np.mean(members)
            keep = []
            for z in remaining:
                if abs(z - center) <= tol:
                    members.append(z)
                    changed = True
                else:
                    keep.append(z)
            remaining = keep
        clusters.append((complex(np.mean(members)), len(members)))
    clusters.sort(key=lambda p: (-abs(p[0]), -p[0].real, -p[0].imag))
    return clusters


@dataclass(frozen=True)
class Spectrum:
    """Clustered eigenvalues with algebraic multiplicities."""

    values: tuple
    multiplicities: tuple
    tol: float

    def __post_init__(self):
        if len(self.values) != len(self.multiplicities):
            raise DimensionError("values and multiplicities differ in length")

    @property
    def dimension(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def radius(self) -> float:
        return max(abs(z) for z in self.values)


@dataclass(frozen=True)
class MaximalSpectrum:
    """Eigenvalues of maximum modulus attaining the maximal degeneracy index.

    ``elements`` pairs each such eigenvalue with the shared index; ``m_t`` is
    the element count.  ``has_real_nonnegative`` records whether one of them
    sits on the nonnegative real axis (expected always; a miss is surfaced in
    ``warnings``, never repaired).
    """

    radius: float
    elements: tuple          # of (eigenvalue, degeneracy_index)
    m_t: int
    nondegenerate: bool
    tol: float
    has_real_nonnegative: bool
    warnings: tuple = ()

    @property
    def eigenvalues(self) -> tuple:
        return tuple(lam for lam, _ in self.elements)

    @property
    def index(self) -> int:
        return self.elements[0][1]


def eigen_all(m, cluster_tol: float | None = None) -> Spectrum:
    """All eigenvalues, clustered into (value, multiplicity) pairs."""
    a = _square(m)
    w = _eigvals(a)
    scale = max(1.0, float(np.linalg.norm(a, 2))) if a.size else 1.0
    tol = DEFAULT_CONFIG.cluster_tol * scale if cluster_tol is None else cluster_tol
    clusters = _cluster(w, tol)
    return Spectrum(
        values=tuple(z for z, _ in clusters),
        multiplicities=tuple(k for _, k in clusters),
        tol=tol,
    )


def eigen_pairs(m) -> tuple[np.ndarray, np.ndarray]:
    """Raw eigenvalues and right eigenvectors (columns)."""
    a = _square(m)
    try:
        return np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(
            f"eigenvalue solver failed on a {a.shape[0]}x{a.shape[1]} matrix: {exc}"
        ) from exc


def schur_factors(m) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur form (R, U) with m = U R U^*, for projector builds."""
    import scipy.linalg as sla

    a = _square(m)
    try:
        r, u = sla.schur(a.astype(complex), output="complex")
    except sla.LinAlgError as exc:
        raise NumericalFailureError(
            f"Schur decomposition failed on a {a.shape[0]}x{a.shape[1]} matrix: {exc}"
        ) from exc
    return r, u


def spectral_radius(m) -> float:
    """Maximum modulus of the eigenvalues."""
    return float(np.max(np.abs(_eigvals(_square(m)))))


def build_t(x: MatrixTuple) -> Superoperator:
    """The superoperator T = sum_i kron(conj(X_i), X_i).

    Acts on vectorized matrices as vec(H) -> vec(sum_i X_i H X_i^*).
    """
    t = sum(kron(np.conj(m), m) for m in x)
    return Superoperator(x.n, t)


def outer_spectral_radius(x: MatrixTuple) -> float:
    """sqrt of the spectral radius of T = sum kron(conj(X_i), X_i)."""
    return float(np.sqrt(spectral_radius(build_t(x).mat)))


def degeneracy_index(m, lam: complex, tol: float | None = None) -> int:
    """Maximum Jordan block size for the eigenvalue ``lam``.

    Smallest j >= 1 with rank((M - lam I)^j) == rank((M - lam I)^(j+1)),
    ranks taken at a relative singular-value cutoff.
    """
    a = _square(m)
    n = a.shape[0]
    rank_tol = DEFAULT_CONFIG.rank_tol if tol is None else tol
    w = _eigvals(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.min(np.abs(w - lam)) > 1e-6 * scale:
        raise DomainError(f"{lam} is not an eigenvalue (closest distance "
                          f"{np.min(np.abs(w - lam)):.3e})")

    def _rank(b: np.ndarray) -> int:
        s = np.linalg.svd(b, compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > rank_tol * s[0]))

    shifted = a - lam * np.eye(n)
    power = shifted
    prev_rank = _rank(power)
    for j in range(1, n + 1):
        power = power @ shifted
        next_rank = _rank(power)
        if next_rank == prev_rank:
            return j
        prev_rank = next_rank
    return n


def maximal_spectrum(t, tol: float | None = None) -> MaximalSpectrum:
    """Maximal-modulus eigenvalues at the maximal degeneracy index.

    Eigenvalues are clustered within tol * max(1, rho); for a nilpotent input
    the single element 0 is reported with its degeneracy index.
    """
    a = t.mat if isinstance(t, Superoperator) else _square(t)
    cfg_tol = DEFAULT_CONFIG.cluster_tol if tol is None else tol
    if cfg_tol <= 0:
        raise DomainError("tolerance must be positive")
    w = _eigvals(a)
    rho = float(np.max(np.abs(w)))
    warnings: list[str] = []

    if rho <= cfg_tol:
        # nilpotent: the spectrum is {0}
        eta = degeneracy_index(a, 0.0)
        return MaximalSpectrum(
            radius=0.0,
            elements=((0j, eta),),
            m_t=1,
            nondegenerate=(eta == 1),
            tol=cfg_tol,
            has_real_nonnegative=True,
        )

    abs_tol = cfg_tol * max(1.0, rho)
    peripheral = w[np.abs(w) >= rho - abs_tol]
    clusters = _cluster(peripheral, abs_tol)
    indexed = [(lam, degeneracy_index(a, lam)) for lam, _ in clusters]
    eta_max = max(eta for _, eta in indexed)
    elements = tuple((lam, eta) for lam, eta in indexed if eta == eta_max)

    pf_tol = DEFAULT_CONFIG.pf_tol * max(1.0, rho)
    has_nonneg = any(
        abs(lam.imag) <= pf_tol and lam.real >= -pf_tol for lam, _ in elements
    )
    if not has_nonneg:
        warnings.append(
            "maximal spectrum has no eigenvalue within tolerance of the "
            "nonnegative real axis; expected one for T built from a tuple"
        )
    return MaximalSpectrum(
        radius=rho,
        elements=elements,
        m_t=len(elements),
        nondegenerate=(eta_max == 1),
        tol=cfg_tol,
        has_real_nonnegative=has_nonneg,
        warnings=tuple(warnings),
    )


def _word_products(x: MatrixTuple, k: int) -> np.ndarray:
    """All length-k word products as a (d**k, n, n) stack."""
    stack = x.as_stack()
    prods = stack
    for _ in range(k - 1):
        # (d, 1, n, n) @ (1, w, n, n) -> (d, w, n, n)
        prods = np.matmul(stack[:, None], prods[None]).reshape(-1, x.n, x.n)
    return prods


def gelfand_seq_words(x: MatrixTuple, k: int, budget: int | None = None) -> float:
    """k-th root of the largest singular value of the word matrix.

    The word matrix has a column vec(X_{i1} ... X_{ik}) for every length-k
    word; this is the finite-k term of the limit formula for the outer
    spectral radius, measured in the Frobenius norm.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    limit = DEFAULT_CONFIG.budget_words if budget is None else budget
    if x.d ** k > limit:
        raise ResourceBudgetError(
            f"word enumeration needs d^k = {x.d ** k} columns > budget {limit}; "
            "use gelfand_seq_power instead"
        )
    prods = _word_products(x, k)
    v_k = prods.reshape(prods.shape[0], -1).T  # columns are vec'd words (any
    # fixed entry order gives the same singular values)
    sigma = float(np.linalg.norm(v_k, 2))
    return sigma ** (1.0 / k)


def gelfand_seq_power(x: MatrixTuple, k: int) -> float:
    """(2k)-th root of the largest singular value of psi(T^k).

    Equals :func:`gelfand_seq_words` exactly in exact arithmetic, because the
    inner-index swap of T^k is the Gram matrix of the vectorized words.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    t = build_t(x).mat
    tk = np.linalg.matrix_power(t, k)
    sigma = float(np.linalg.norm(psi(tk), 2))
    return sigma ** (1.0 / (2.0 * k))
