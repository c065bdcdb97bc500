"""Joint spectral radius brackets.

Three routes: brute-force word enumeration (the classical reference oracle),
the Kronecker-power lift of the outer spectral radius, and the restriction of
the Kronecker lift to symmetric tensors, realized as the induced action on
homogeneous polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import DimensionError, DomainError, ResourceBudgetError
from .spectra import outer_spectral_radius, spectral_radius
from .tensor_ops import kron
from .tuples import MatrixTuple

__all__ = [
    "JsrBracket",
    "SymLiftOperator",
    "jsr_bracket_words",
    "jsr_bracket_osr",
    "kron_power_tuple",
    "jsr_bracket_kron",
    "sym_lift",
    "sum_sym_lift",
    "jsr_bracket_sym",
    "perm_commutation_check",
    "perm_top_eigenvector_sign",
]


@dataclass(frozen=True)
class JsrBracket:
    """A certified interval lower <= JSR <= upper, tagged with its method."""

    lower: float
    upper: float
    method: str  # words | kron_lift | sym_lift
    k: int

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise DomainError(
                f"invalid bracket [{self.lower}, {self.upper}] from {self.method}"
            )


@dataclass(frozen=True)
class SymLiftOperator:
    """Matrix of the induced degree-k action on homogeneous polynomials.

    Basis: monomials e^alpha with exponent vectors in descending
    lexicographic order (normative for golden outputs).  ``real_input``
    records whether the guarantee hypothesis (real entries) held.
    """

    n: int
    k: int
    dim: int
    mat: np.ndarray = field(repr=False)
    basis: tuple = ()
    real_input: bool = True

    def __post_init__(self):
        if self.dim != comb(self.n + self.k - 1, self.n - 1):
            raise DimensionError(
                f"symmetric lift dimension {self.dim} != C({self.n + self.k - 1},"
                f"{self.n - 1})"
            )


def jsr_bracket_words(
    x: MatrixTuple, k_max: int, budget: int | None = None
) -> JsrBracket:
    """Classical word bounds: spectral radii below, product norms above.

    lower = max over words w of length k <= k_max of rho(X_w)^(1/k);
    upper = min over k of (max_w ||X_w||_2)^(1/k).
    """
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    limit = DEFAULT_CONFIG.budget_words if budget is None else budget
    if x.d ** k_max > limit:
        raise ResourceBudgetError(
            f"word enumeration needs d^k_max = {x.d ** k_max} products > budget {limit}"
        )
    lower = 0.0
    upper = np.inf
    stack = x.as_stack()
    prods = stack
    for k in range(1, k_max + 1):
        if k > 1:
            prods = np.matmul(stack[:, None], prods[None]).reshape(-1, x.n, x.n)
        radii = np.max(np.abs(np.linalg.eigvals(prods)), axis=1)
        norms = np.linalg.svd(prods, compute_uv=False)[:, 0]
        lower = max(lower, float(np.max(radii)) ** (1.0 / k))
        upper = min(upper, float(np.max(norms)) ** (1.0 / k))
    return JsrBracket(lower=lower, upper=upper, method="words", k=k_max)


def jsr_bracket_osr(x: MatrixTuple) -> JsrBracket:
    """rho_hat / sqrt(d) <= JSR <= rho_hat."""
    rho_hat = outer_spectral_radius(x)
    return JsrBracket(
        lower=rho_hat / np.sqrt(x.d), upper=rho_hat, method="kron_lift", k=1
    )


def kron_power_tuple(x: MatrixTuple, k: int, budget: int | None = None) -> MatrixTuple:
    """(X_1^{kron k}, ..., X_d^{kron k}), members of size n^k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    limit = DEFAULT_CONFIG.budget_dim if budget is None else budget
    if x.n ** k > limit:
        raise ResourceBudgetError(
            f"Kronecker power size n^k = {x.n ** k} > budget {limit}"
        )
    lifted = []
    for m in x:
        p = m
        for _ in range(k - 1):
            p = kron(p, m)
        lifted.append(p)
    return MatrixTuple(tuple(lifted))


def jsr_bracket_kron(x: MatrixTuple, k: int, budget: int | None = None) -> JsrBracket:
    """Kronecker-power refinement: upper = rho_hat(X^{kron k})^(1/k)."""
    lifted = kron_power_tuple(x, k, budget=budget)
    upper = outer_spectral_radius(lifted) ** (1.0 / k)
    lower = upper / x.d ** (1.0 / (2.0 * k))
    return JsrBracket(lower=lower, upper=upper, method="kron_lift", k=k)


def _exponent_basis(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors summing to k, in descending lexicographic order."""
    out: list[tuple[int, ...]] = []

    def _fill(prefix: tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            _fill(prefix + (e,), remaining - e, slots - 1)

    _fill((), k, n)
    return out


def sym_lift(x_i, k: int, budget: int | None = None) -> SymLiftOperator:
    """Action of a single matrix on homogeneous degree-k polynomials.

    The variable vector e is substituted by X e, so column beta holds the
    monomial expansion of prod_j ((X e)_j)^(beta_j).
    """
    a = np.asarray(x_i, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"lift input must be square, got shape {a.shape}")
    if k < 1:
        raise DomainError("k must be >= 1")
    n = a.shape[0]
    h = comb(n + k - 1, n - 1)
    limit = DEFAULT_CONFIG.budget_sym if budget is None else budget
    if h > limit:
        raise ResourceBudgetError(f"symmetric lift dimension {h} > budget {limit}")
    basis = _exponent_basis(n, k)
    index = {b: i for i, b in enumerate(basis)}
    mat = np.zeros((h, h), dtype=complex)
    rows = [
        {m: a[j, m] for m in range(n) if a[j, m] != 0} for j in range(n)
    ]
    for col, beta in enumerate(basis):
        poly: dict[tuple[int, ...], complex] = {(0,) * n: 1.0 + 0j}
        for j, bj in enumerate(beta):
            for _ in range(bj):
                nxt: dict[tuple[int, ...], complex] = {}
                for expo, c in poly.items():
                    for m, a_jm in rows[j].items():
                        lifted = list(expo)
                        lifted[m] += 1
                        key = tuple(lifted)
                        nxt[key] = nxt.get(key, 0.0) + c * a_jm
                poly = nxt
        for expo, c in poly.items():
            mat[index[expo], col] += c
    real = bool(np.max(np.abs(a.imag)) == 0.0)
    return SymLiftOperator(n=n, k=k, dim=h, mat=mat, basis=tuple(basis), real_input=real)


def sum_sym_lift(x: MatrixTuple, k: int, budget: int | None = None) -> SymLiftOperator:
    """Sum of the single-matrix lifts over the tuple."""
    parts = [sym_lift(m, k, budget=budget) for m in x]
    mat = sum(p.mat for p in parts)
    return SymLiftOperator(
        n=x.n,
        k=k,
        dim=parts[0].dim,
        mat=mat,
        basis=parts[0].basis,
        real_input=all(p.real_input for p in parts),
    )


def jsr_bracket_sym(x: MatrixTuple, k: int, budget: int | None = None) -> JsrBracket:
    """Symmetric refinement at even degree 2k.

    upper = rho(degree-2k lift)^(1/2k) <= the Kronecker bound at k; the lower
    bound reuses the d^(-1/2k) factor of the bracket it refines (valid, but
    not sharper).  The upper-bound guarantee is stated for real tuples;
    complex input is accepted and flagged on the lift.
    """
    lift = sum_sym_lift(x, 2 * k, budget=budget)
    upper = spectral_radius(lift.mat) ** (1.0 / (2.0 * k))
    lower = upper / x.d ** (1.0 / (2.0 * k))
    return JsrBracket(lower=lower, upper=upper, method="sym_lift", k=k)


def _perm_operator(n: int, k: int, sigma: tuple[int, ...]) -> np.ndarray:
    """P_sigma on (C^n)^{tensor k}: v_1 x ... x v_k -> v_sigma(1) x ... x v_sigma(k)."""
    dim = n ** k
    p = np.zeros((dim, dim))
    # column = multi-index (i_1..i_k); row = (i_sigma(1)..i_sigma(k))
    for col in range(dim):
        digits = []
        rest = col
        for _ in range(k):
            digits.append(rest % n)
            rest //= n
        digits.reverse()  # digits[m] = i_{m+1}, most significant first
        row = 0
        for m in range(k):
            row = row * n + digits[sigma[m]]
        p[row, col] = 1.0
    return p


def perm_commutation_check(
    x: MatrixTuple,
    k: int,
    sigma,
    tol: float = 1e-10,
    budget: int | None = None,
) -> bool:
    """Check that the factor permutation commutes with sum X_i^{kron k}."""
    sig = tuple(int(s) for s in sigma)
    if sorted(sig) != list(range(k)):
        raise DomainError(f"sigma must be a permutation of 0..{k - 1}, got {sig}")
    lifted = kron_power_tuple(x, k, budget=budget)
    y_k = sum(m for m in lifted)
    p = _perm_operator(x.n, k, sig)
    comm = p @ y_k - y_k @ p
    scale = np.linalg.norm(y_k, "fro")
    if scale == 0.0:
        return True
    return bool(np.linalg.norm(comm, "fro") <= tol * scale)


def perm_top_eigenvector_sign(
    x: MatrixTuple, k: int, sigma, budget: int | None = None
) -> int | None:
    """Sign s with P_sigma v = s v for the top eigenvector v of sum X_i^{kron k}.

    Observed to be +1 in practice for even k; recorded, never asserted.
    Returns None when the top eigenvalue is not simple real or the
    eigenvector is not a P_sigma eigenvector within 1e-6.
    """
    sig = tuple(int(s) for s in sigma)
    if sorted(sig) != list(range(k)):
        raise DomainError(f"sigma must be a permutation of 0..{k - 1}, got {sig}")
    lifted = kron_power_tuple(x, k, budget=budget)
    y_k = sum(m for m in lifted)
    w, v = np.linalg.eig(y_k)
    order = np.argsort(-np.abs(w))
    top = w[order[0]]
    if abs(top.imag) > 1e-8 * max(1.0, abs(top)):
        return None
    if len(order) > 1 and abs(w[order[1]] - top) <= 1e-8 * max(1.0, abs(top)):
        return None
    vec_top = v[:, order[0]]
    permuted = _perm_operator(x.n, k, sig) @ vec_top
    for sign in (1, -1):
        if np.linalg.norm(permuted - sign * vec_top) <= 1e-6 * np.linalg.norm(vec_top):
            return sign
    return None
