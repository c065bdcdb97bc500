"""Asymptotics of the completely positive map H -> sum X_i H X_i^*.

The normalized powers T^n / ||T^n||_2 of the associated superoperator settle
onto a set of limit points indexed by the phases of the maximal spectrum.
Their average T_hat is computed two ways: by running the power sequence (the
defining route) and from spectral projectors (the structural route), and the
two are cross-checked.  The Kraus family of T_hat spans an ideal in the
algebra generated by the tuple, which this module extracts and verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import DimensionError, DomainError, NumericalFailureError
from .spectra import (
    MaximalSpectrum,
    build_t,
    maximal_spectrum,
    outer_spectral_radius,
    spectral_radius,
)
from .tensor_ops import Superoperator, kron, psi, unvec, vec
from .tuples import MatrixTuple

__all__ = [
    "CpMap",
    "CesaroResult",
    "SpectralProjection",
    "LambdaMember",
    "LambdaFamily",
    "DynamicsReport",
    "PfConjugation",
    "apply_cp",
    "cesaro_t_hat",
    "spectral_t_hat",
    "kraus_from_superoperator",
    "verify_ideal",
    "generated_algebra_basis",
    "analyze_dynamics",
    "pf_conjugation",
]


@dataclass(frozen=True)
class CpMap:
    """A completely positive map given by its Kraus family."""

    kraus: MatrixTuple
    t: Superoperator
    unital: bool
    trace_preserving: bool

    @classmethod
    def from_kraus(cls, x: MatrixTuple, tol: float | None = None) -> "CpMap":
        eps = DEFAULT_CONFIG.channel_tol if tol is None else tol
        eye = np.eye(x.n)
        unital = np.linalg.norm(sum(m @ m.conj().T for m in x) - eye, 2) <= eps
        tp = np.linalg.norm(sum(m.conj().T @ m for m in x) - eye, 2) <= eps
        return cls(kraus=x, t=build_t(x), unital=bool(unital), trace_preserving=bool(tp))


def apply_cp(m, h) -> np.ndarray:
    """Apply the map: sum_i X_i h X_i^*."""
    x = m.kraus if isinstance(m, CpMap) else m
    a = np.asarray(h, dtype=complex)
    if a.shape != (x.n, x.n):
        raise DimensionError(f"argument must be {x.n}x{x.n}, got {a.shape}")
    return sum(mi @ a @ mi.conj().T for mi in x)


@dataclass(frozen=True)
class CesaroResult:
    t_hat: np.ndarray = field(repr=False)
    converged: bool = False
    n_used: int = 0
    achieved: float = np.inf
    period: int | None = None
    note: str | None = None


def _spec_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def _advance(mat: np.ndarray, cur: np.ndarray) -> np.ndarray:
    """One normalized power step; T^n vanishing exactly means nilpotency."""
    nxt = mat @ cur
    norm = _spec_norm(nxt)
    if norm == 0.0:
        raise NumericalFailureError(
            "T^n vanished during power iteration: the superoperator is "
            "nilpotent despite a nonzero computed spectral radius"
        )
    return nxt / norm


def cesaro_t_hat(
    t: Superoperator | np.ndarray,
    n_terms: int | None = None,
    tol: float | None = None,
    window: int = 48,
) -> CesaroResult:
    """Limit of the averaged normalized powers (1/N) sum T^n / ||T^n||_2.

    The power sequence is run with per-term spectral-norm normalization until
    it settles onto a cycle (successive window averages agreeing within
    ``tol``); the cycle mean is the Cesaro limit.  Requires rho(T) = 1; the
    caller rescales the tuple by 1/rho_hat first.  If no cycle is found
    within ``n_terms`` the best available average is returned flagged
    unconverged.
    """
    mat = t.mat if isinstance(t, Superoperator) else np.asarray(t, dtype=complex)
    n_terms = DEFAULT_CONFIG.cesaro_terms if n_terms is None else n_terms
    tol = DEFAULT_CONFIG.cesaro_tol if tol is None else tol
    rho = spectral_radius(mat)
    if abs(rho - 1.0) > 1e-8:
        raise DomainError(
            f"spectral radius must be normalized to 1 (got {rho:.12g}); "
            "rescale the tuple by 1/rho_hat first"
        )
    cur = mat / _spec_norm(mat)
    total = cur.copy()
    history: list[np.ndarray] = [cur]
    half_snapshot: np.ndarray | None = None
    for n in range(2, n_terms + 1):
        cur = _advance(mat, cur)
        total += cur
        for q in range(1, min(window, n - 1) + 1):
            delta = float(np.linalg.norm(cur - history[-q], "fro"))
            if delta <= tol:
                cycle = history[-(q - 1):] + [cur] if q > 1 else [cur]
                t_hat = sum(cycle) / q
                return CesaroResult(
                    t_hat=t_hat, converged=True, n_used=n, achieved=delta, period=q
                )
        history.append(cur)
        if len(history) > window + 1:
            history.pop(0)
        if n == n_terms // 2:
            half_snapshot = cur.copy()
    # no exact cycle: distinguish a slow one-sided drift (extrapolatable)
    # from genuine oscillation
    if half_snapshot is not None:
        drift = float(np.linalg.norm(cur - half_snapshot, "fro"))
        if drift < 0.05:
            return CesaroResult(
                t_hat=2.0 * cur - half_snapshot,
                converged=False,
                n_used=n_terms,
                achieved=drift,
                note="slow drift: returned endpoint extrapolation",
            )
    avg = total / n_terms
    return CesaroResult(
        t_hat=avg,
        converged=False,
        n_used=n_terms,
        achieved=float(np.linalg.norm(cur - avg, "fro")),
        note="no cycle within n_terms: returned partial average",
    )


def _sector_projector(mat: np.ndarray, lam: complex, abs_tol: float) -> np.ndarray:
    """Spectral projector for the eigenvalue cluster at ``lam``.

    Sorted complex Schur form plus a Sylvester solve for the off-diagonal
    coupling; works for defective eigenvalues.
    """
    import scipy.linalg as sla

    r, u, sdim = sla.schur(
        mat.astype(complex), output="complex", sort=lambda z: abs(z - lam) <= abs_tol
    )
    if sdim == 0:
        raise NumericalFailureError(f"no eigenvalues found near {lam}")
    if sdim == mat.shape[0]:
        return np.eye(mat.shape[0], dtype=complex)
    r11 = r[:sdim, :sdim]
    r12 = r[:sdim, sdim:]
    r22 = r[sdim:, sdim:]
    y = sla.solve_sylvester(r11, -r22, r12)
    pi = np.zeros_like(r)
    pi[:sdim, :sdim] = np.eye(sdim)
    pi[:sdim, sdim:] = y
    return u @ pi @ u.conj().T


@dataclass(frozen=True)
class SpectralProjection:
    """T_hat computed from spectral projectors, with phase-average metadata."""

    t_hat: np.ndarray = field(repr=False)
    finite_order: int | None = None
    warnings: tuple = ()


def _finite_phase_order(phases: np.ndarray, q_max: int, phase_tol: float) -> int | None:
    for q in range(1, q_max + 1):
        if np.max(np.abs(phases ** q - 1.0)) <= phase_tol:
            return q
    return None


def spectral_t_hat(
    t: Superoperator | np.ndarray,
    config: AnalysisConfig = DEFAULT_CONFIG,
    n_phase: int = 8192,
) -> SpectralProjection:
    """T_hat from the Jordan structure of the maximal spectrum.

    Every sector except the maximal-index peripheral ones is annihilated in
    the limit; what survives is the phase average of the normalized dominant
    parts.  For finite phase order the average is exact; otherwise a long
    discrete phase average is used and a warning attached.
    """
    mat = t.mat if isinstance(t, Superoperator) else np.asarray(t, dtype=complex)
    rho = spectral_radius(mat)
    if abs(rho - 1.0) > 1e-8:
        raise DomainError(
            f"spectral radius must be normalized to 1 (got {rho:.12g})"
        )
    warnings: list[str] = []
    ms = maximal_spectrum(mat, config.cluster_tol)
    eta = ms.index
    abs_tol = config.cluster_tol * max(1.0, rho)
    # flag close calls just inside the peripheral cutoff
    w = np.linalg.eigvals(mat)
    inner = w[np.abs(w) < rho - abs_tol]
    if inner.size and np.max(np.abs(inner)) > rho - 10.0 * abs_tol:
        warnings.append(
            "eigenvalues close to the peripheral clustering cutoff; "
            "maximal-spectrum membership may be ambiguous"
        )
    parts = []
    phases = []
    for lam, _ in ms.elements:
        proj = _sector_projector(mat, lam, max(abs_tol, 10 * abs(lam) * 1e-12))
        if eta == 1:
            k_part = proj
        else:
            nilp = (mat - lam * np.eye(mat.shape[0])) @ proj
            k_part = lam ** (1 - eta) * np.linalg.matrix_power(nilp, eta - 1)
        parts.append(k_part)
        phases.append(lam / abs(lam))
    phases_arr = np.array(phases)

    if len(parts) == 1:
        t_hat = parts[0] / _spec_norm(parts[0])
        return SpectralProjection(t_hat=t_hat, finite_order=1, warnings=tuple(warnings))

    order = _finite_phase_order(phases_arr, config.q_max, config.phase_tol)
    if order is not None:
        terms = []
        for m in range(1, order + 1):
            s_m = sum(ph ** m * part for ph, part in zip(phases_arr, parts))
            terms.append(s_m / _spec_norm(s_m))
        t_hat = sum(terms) / order
        return SpectralProjection(
            t_hat=t_hat, finite_order=order, warnings=tuple(warnings)
        )

    warnings.append(
        f"phase group not finite within q_max={config.q_max}; "
        f"used a discrete average over {n_phase} phases"
    )
    acc = np.zeros_like(mat)
    for m in range(1, n_phase + 1):
        s_m = sum(ph ** m * part for ph, part in zip(phases_arr, parts))
        acc += s_m / _spec_norm(s_m)
    return SpectralProjection(
        t_hat=acc / n_phase, finite_order=None, warnings=tuple(warnings)
    )


def kraus_from_superoperator(
    t: Superoperator | np.ndarray, tol: float | None = None
) -> MatrixTuple:
    """Kraus family of a completely positive superoperator.

    The inner-index swap of t must be Hermitian PSD (exactly the complete
    positivity condition); its scaled eigenvectors above the relative cutoff
    ``tol`` become the Kraus operators, in descending weight order, each
    phase-fixed so its first significant entry is real positive.
    """
    mat = t.mat if isinstance(t, Superoperator) else np.asarray(t, dtype=complex)
    n2 = mat.shape[0]
    n = int(round(np.sqrt(n2)))
    cut = DEFAULT_CONFIG.kraus_tol if tol is None else tol
    m = psi(mat)
    scale = float(np.linalg.norm(m, "fro"))
    if scale == 0.0:
        raise DomainError("zero superoperator has no Kraus family")
    herm_defect = float(np.linalg.norm(m - m.conj().T, "fro") / scale)
    if herm_defect > max(cut, 1e-10) * 10:
        raise DomainError(
            f"not a completely positive superoperator: psi(t) is not Hermitian "
            f"(defect {herm_defect:.3e})"
        )
    w, u = np.linalg.eigh((m + m.conj().T) / 2.0)
    mu_max = float(np.max(w))
    if mu_max <= 0.0 or float(np.min(w)) < -max(cut, 1e-10) * max(mu_max, scale):
        raise DomainError(
            f"not a completely positive superoperator: psi(t) has eigenvalue "
            f"{np.min(w):.3e}"
        )
    keep = [i for i in range(len(w)) if w[i] > cut * mu_max]
    keep.sort(key=lambda i: -w[i])
    ops = []
    for i in keep:
        b = np.sqrt(w[i]) * unvec(u[:, i], n)
        flat = b.ravel()
        sig = np.flatnonzero(np.abs(flat) > 1e-12 * np.max(np.abs(flat)))
        if sig.size:
            phase = flat[sig[0]] / abs(flat[sig[0]])
            b = b * np.conj(phase)
        ops.append(b)
    if not ops:
        raise DomainError("no Kraus weight above the cutoff")
    family = MatrixTuple(tuple(ops))
    recon = sum(kron(np.conj(b), b) for b in family)
    rec_err = float(np.linalg.norm(recon - mat, "fro") / scale)
    if rec_err > max(np.sqrt(max(cut, 0.0)), 1e-8) * 10:
        raise NumericalFailureError(
            f"Kraus reconstruction error {rec_err:.3e} exceeds tolerance"
        )
    return family


def verify_ideal(b: MatrixTuple, x: MatrixTuple, tol: float | None = None) -> bool:
    """Is span{B_k} invariant under left/right multiplication by every X_i?"""
    eps = DEFAULT_CONFIG.ideal_tol if tol is None else tol
    if b.n != x.n:
        raise DimensionError(f"size mismatch: basis n={b.n}, tuple n={x.n}")
    v = np.stack([vec(m) for m in b], axis=1)
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    rank = int(np.sum(s > max(eps, 1e-12) * s[0])) if s[0] > 0 else 0
    if rank == 0:
        raise DomainError("basis spans only the zero matrix")
    q = u[:, :rank]
    for xi in x:
        for bk in b:
            scale = float(np.linalg.norm(xi, "fro") * np.linalg.norm(bk, "fro"))
            for prod in (xi @ bk, bk @ xi):
                pv = vec(prod)
                norm = float(np.linalg.norm(pv))
                if norm <= eps * max(scale, 1e-300):
                    continue
                resid = float(np.linalg.norm(pv - q @ (q.conj().T @ pv)))
                if resid > eps * norm:
                    return False
    return True


def generated_algebra_basis(
    x: MatrixTuple, tol: float | None = None
) -> tuple[MatrixTuple, int]:
    """Orthonormal basis of the algebra generated by the tuple (no unit adjoined).

    Span closure: start from span{X_i}, adjoin all pairwise products of the
    current basis, re-orthonormalize at the cutoff, repeat to a fixpoint.
    """
    eps = DEFAULT_CONFIG.rank_tol if tol is None else tol
    n = x.n

    def _orthonormal(cols: np.ndarray) -> np.ndarray:
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        if s.size == 0 or s[0] == 0.0:
            raise DomainError("tuple spans only the zero matrix")
        rank = int(np.sum(s > eps * s[0]))
        return u[:, :rank]

    basis = _orthonormal(np.stack([vec(m) for m in x], axis=1))
    while True:
        mats = [unvec(basis[:, i], n) for i in range(basis.shape[1])]
        prods = [a @ b for a in mats for b in mats]
        cand = np.concatenate(
            [basis, np.stack([vec(p) for p in prods], axis=1)], axis=1
        )
        new_basis = _orthonormal(cand)
        if new_basis.shape[1] == basis.shape[1]:
            basis = new_basis
            break
        basis = new_basis
    mats = tuple(unvec(basis[:, i], n) for i in range(basis.shape[1]))
    return MatrixTuple(mats), len(mats)


@dataclass(frozen=True)
class LambdaMember:
    residue: int                      # the class n = residue (mod order)
    t_lambda: np.ndarray = field(repr=False)
    kraus_count: int = 0
    kraus_in_span: bool = False


@dataclass(frozen=True)
class LambdaFamily:
    order: int
    members: tuple                    # of LambdaMember
    relation_verified: bool           # T T_lambda = T_{tau lambda} checks


@dataclass(frozen=True)
class DynamicsReport:
    rho_hat: float
    classification: str               # full_algebra_rank1 | ideal_proper | nilpotent_limit
    t_hat: Superoperator | None
    t_hat_idempotent: bool
    t_hat_square_zero: bool
    t_hat_rank: int
    b_family: MatrixTuple | None
    kraus_weights: tuple
    ideal_verified: bool
    algebra_dim: int
    lambda_family: LambdaFamily | None
    maximal: MaximalSpectrum | None
    unital: bool
    trace_preserving: bool
    cesaro: CesaroResult | None
    cross_check_delta: float | None
    warnings: tuple = ()


def _residue_class_limits(
    mat: np.ndarray, order: int, burn: int, reps: int = 8
) -> dict[int, np.ndarray]:
    """Tail averages of T^n/||T^n|| grouped by n mod order."""
    cur = mat / _spec_norm(mat)
    sums: dict[int, np.ndarray] = {m: np.zeros_like(mat) for m in range(order)}
    counts: dict[int, int] = {m: 0 for m in range(order)}
    total = burn + reps * order
    for n in range(2, total + 1):
        cur = _advance(mat, cur)
        if n > burn:
            sums[n % order] += cur
            counts[n % order] += 1
    return {m: sums[m] / counts[m] for m in range(order) if counts[m]}


def analyze_dynamics(
    x: MatrixTuple, config: AnalysisConfig = DEFAULT_CONFIG
) -> DynamicsReport:
    """Full asymptotic analysis of the map induced by the tuple.

    Rescales to rho_hat = 1, computes T_hat by both routes (cross-checked),
    extracts and verifies its Kraus ideal, classifies the idempotent /
    square-zero dichotomy, and enumerates the finite phase family when the
    maximal-spectrum phases have order <= q_max.
    """
    warnings: list[str] = []
    cp = CpMap.from_kraus(x, config.channel_tol)
    _, algebra_dim = generated_algebra_basis(x, config.rank_tol)
    rho_hat = outer_spectral_radius(x)
    n = x.n

    if rho_hat <= 1e-12:
        warnings.append("superoperator is nilpotent: T_hat = 0, no Kraus family")
        return DynamicsReport(
            rho_hat=rho_hat,
            classification="nilpotent_limit",
            t_hat=None,
            t_hat_idempotent=False,
            t_hat_square_zero=True,
            t_hat_rank=0,
            b_family=None,
            kraus_weights=(),
            ideal_verified=False,
            algebra_dim=algebra_dim,
            lambda_family=None,
            maximal=maximal_spectrum(build_t(x), config.cluster_tol),
            unital=cp.unital,
            trace_preserving=cp.trace_preserving,
            cesaro=None,
            cross_check_delta=None,
            warnings=tuple(warnings),
        )

    y = x.scaled(1.0 / rho_hat)
    t = build_t(y)
    ms = maximal_spectrum(t, config.cluster_tol)
    warnings.extend(ms.warnings)

    ces = cesaro_t_hat(t, n_terms=config.cesaro_terms, tol=config.cesaro_tol)
    spectral = spectral_t_hat(t, config)
    warnings.extend(spectral.warnings)

    a_c = ces.t_hat / np.linalg.norm(ces.t_hat, "fro")
    a_s = spectral.t_hat / np.linalg.norm(spectral.t_hat, "fro")
    delta = float(np.linalg.norm(a_c - a_s, "fro"))
    if ces.converged:
        if delta > config.cross_check_tol:
            raise NumericalFailureError(
                f"averaging and spectral routes disagree: delta = {delta:.3e} "
                f"(cesaro n={ces.n_used}, achieved {ces.achieved:.3e})"
            )
        t_hat_mat = ces.t_hat
    else:
        warnings.append(
            f"power averaging unconverged after {ces.n_used} terms "
            f"({ces.note}); reporting the spectral-projection value"
        )
        if delta > 1e-2:
            warnings.append(
                f"unconverged averaging route differs from spectral route by "
                f"{delta:.3e}"
            )
        t_hat_mat = spectral.t_hat

    a_hat = t_hat_mat / np.linalg.norm(t_hat_mat, "fro")
    a_sq = a_hat @ a_hat
    c = complex(np.trace(a_hat.conj().T @ a_sq))
    sq_norm = float(np.linalg.norm(a_sq, "fro"))
    idem_resid = float(np.linalg.norm(a_sq - c * a_hat, "fro"))
    square_zero = sq_norm <= config.dichotomy_tol
    idempotent = (
        not square_zero
        and idem_resid <= config.dichotomy_tol
        and c.real > 0
        and abs(c.imag) <= config.dichotomy_tol
    )
    if not (square_zero or idempotent):
        msg = (
            f"T_hat dichotomy violated: ||A^2|| = {sq_norm:.3e}, "
            f"idempotent residual {idem_resid:.3e}"
        )
        if ces.converged:
            raise NumericalFailureError(msg)
        warnings.append(msg)

    kraus_cut = max(config.kraus_tol_dynamics, 30.0 * delta if not ces.converged else 0.0)
    b_family = kraus_from_superoperator(Superoperator(n, t_hat_mat), tol=kraus_cut)
    weights = tuple(float(np.linalg.norm(b, "fro")) ** 2 for b in b_family)

    sv = np.linalg.svd(t_hat_mat, compute_uv=False)
    t_hat_rank = int(np.sum(sv > config.kraus_tol_dynamics * sv[0]))

    ideal_ok = verify_ideal(b_family, y, config.ideal_tol)

    if algebra_dim == n * n:
        if t_hat_rank != 1:
            raise NumericalFailureError(
                f"tuple generates the full algebra but T_hat has rank "
                f"{t_hat_rank}; expected 1"
            )
        classification = "full_algebra_rank1"
    else:
        classification = "ideal_proper"

    lam_family = None
    phases = np.array([lam / abs(lam) for lam in ms.eigenvalues])
    order = _finite_phase_order(phases, config.q_max, config.phase_tol)
    if order is not None:
        burn = min(max(ces.n_used, 64), config.cesaro_terms)
        limits = _residue_class_limits(t.mat, order, burn=burn)
        members = []
        relation_ok = True
        span_cols = np.stack([vec(b) for b in b_family], axis=1)
        uq, sq_, _ = np.linalg.svd(span_cols, full_matrices=False)
        rank_b = int(np.sum(sq_ > 1e-10 * sq_[0]))
        qb = uq[:, :rank_b]
        for m in sorted(limits):
            t_lam = limits[m]
            advanced = t.mat @ t_lam
            advanced = advanced / _spec_norm(advanced)
            nxt = limits[(m + 1) % order]
            if float(np.linalg.norm(advanced - nxt, "fro")) > max(
                10.0 * config.cross_check_tol, 100.0 * ces.achieved
            ):
                relation_ok = False
            try:
                a_fam = kraus_from_superoperator(
                    Superoperator(n, t_lam), tol=kraus_cut
                )
                in_span = all(
                    float(
                        np.linalg.norm(
                            vec(a) - qb @ (qb.conj().T @ vec(a))
                        )
                    )
                    <= config.ideal_tol * max(float(np.linalg.norm(vec(a))), 1e-300)
                    for a in a_fam
                )
                members.append(
                    LambdaMember(
                        residue=m,
                        t_lambda=t_lam,
                        kraus_count=a_fam.d,
                        kraus_in_span=bool(in_span),
                    )
                )
            except DomainError as exc:
                warnings.append(f"Kraus extraction failed for residue {m}: {exc}")
                members.append(
                    LambdaMember(residue=m, t_lambda=t_lam, kraus_count=0,
                                 kraus_in_span=False)
                )
        lam_family = LambdaFamily(
            order=order, members=tuple(members), relation_verified=relation_ok
        )
    else:
        warnings.append(
            f"phase group not enumerated (infinite or order > q_max={config.q_max})"
        )

    return DynamicsReport(
        rho_hat=rho_hat,
        classification=classification,
        t_hat=Superoperator(n, t_hat_mat),
        t_hat_idempotent=idempotent,
        t_hat_square_zero=square_zero,
        t_hat_rank=t_hat_rank,
        b_family=b_family,
        kraus_weights=weights,
        ideal_verified=ideal_ok,
        algebra_dim=algebra_dim,
        lambda_family=lam_family,
        maximal=ms,
        unital=cp.unital,
        trace_preserving=cp.trace_preserving,
        cesaro=ces,
        cross_check_delta=delta,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class PfConjugation:
    """Rank-one factorization T_hat = vec(V) vec(W)^* and its conjugations.

    Either direction may individually fail when its factor is singular; the
    corresponding tuple is None and the error message recorded.
    """

    v: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    co_isometry: MatrixTuple | None = None    # V^(-1/2) X V^(1/2): unital
    isometry: MatrixTuple | None = None       # W^(1/2) X W^(-1/2): trace preserving
    co_isometry_error: str | None = None
    isometry_error: str | None = None
    unital_defect: float | None = None
    trace_defect: float | None = None
    rho_hat: float = 1.0


def _fix_psd_phase(m: np.ndarray, label: str) -> np.ndarray:
    """Rotate a global phase so the matrix is Hermitian PSD, and verify."""
    tr = complex(np.trace(m))
    if abs(tr) > 1e-12 * np.linalg.norm(m, "fro"):
        m = m * (np.conj(tr) / abs(tr))
    scale = float(np.linalg.norm(m, "fro"))
    herm = float(np.linalg.norm(m - m.conj().T, "fro") / max(scale, 1e-300))
    if herm > 1e-6:
        raise NumericalFailureError(
            f"{label} factor of T_hat is not Hermitian (defect {herm:.3e})"
        )
    m = (m + m.conj().T) / 2.0
    w = np.linalg.eigvalsh(m)
    if np.min(w) < -1e-7 * max(np.max(w), scale):
        raise NumericalFailureError(
            f"{label} factor of T_hat is not PSD (min eigenvalue {np.min(w):.3e})"
        )
    return m


def _half_powers(m: np.ndarray, label: str) -> tuple[np.ndarray, np.ndarray]:
    """(M^(1/2), M^(-1/2)), refusing when M is singular at the 1e-10 floor."""
    w, u = np.linalg.eigh(m)
    w = np.maximum(w, 0.0)
    if np.min(w) < 1e-10 * np.max(w):
        raise NumericalFailureError(
            f"{label} factor is singular at the 1e-10 floor "
            f"(min/max eigenvalue ratio {np.min(w) / np.max(w):.3e})"
        )
    return (u * np.sqrt(w)) @ u.conj().T, (u / np.sqrt(w)) @ u.conj().T


def pf_conjugation(x: MatrixTuple, config: AnalysisConfig = DEFAULT_CONFIG) -> PfConjugation:
    """Conjugate a rank-one-limit tuple to a row co-isometry / column isometry.

    Requires T_hat of rank 1 (as for full-algebra tuples).  The factors are
    taken from the left/right eigenvectors of the rescaled superoperator when
    the peripheral eigenvalue is simple, which keeps them at eigensolver
    accuracy; both must be positive semidefinite.
    """
    rho_hat = outer_spectral_radius(x)
    if rho_hat <= 1e-12:
        raise DomainError("nilpotent tuple has no rank-one limit")
    y = x.scaled(1.0 / rho_hat)
    mat = build_t(y).mat
    n = x.n
    w, vr = np.linalg.eig(mat)
    peripheral = np.flatnonzero(np.abs(w) >= 1.0 - 1e-8)
    if peripheral.size == 1:
        i = int(peripheral[0])
        v_vec = vr[:, i]
        wl, vl = np.linalg.eig(mat.conj().T)
        j = int(np.argmin(np.abs(wl - np.conj(w[i]))))
        u_vec = vl[:, j]
        u_vec = u_vec / np.conj(u_vec.conj() @ v_vec)
    else:
        spectral = spectral_t_hat(Superoperator(n, mat), config)
        uu, ss, vv = np.linalg.svd(spectral.t_hat)
        rank = int(np.sum(ss > config.kraus_tol_dynamics * ss[0]))
        if rank != 1:
            raise DomainError(
                f"T_hat has rank {rank}, not 1; conjugation requires a "
                "rank-one limit (full-algebra case)"
            )
        v_vec = uu[:, 0] * ss[0]
        u_vec = vv[0].conj()
    v = _fix_psd_phase(unvec(v_vec, n), "state (V)")
    w_fac = _fix_psd_phase(unvec(u_vec, n), "functional (W)")

    co_tuple = None
    iso_tuple = None
    co_err = None
    iso_err = None
    unital_defect = None
    trace_defect = None
    eye = np.eye(n)
    try:
        v_half, v_mhalf = _half_powers(v, "state (V)")
        co_tuple = MatrixTuple(tuple(v_mhalf @ m @ v_half for m in y))
        unital_defect = float(
            np.linalg.norm(sum(m @ m.conj().T for m in co_tuple) - eye, 2)
        )
    except NumericalFailureError as exc:
        co_err = str(exc)
    try:
        w_half, w_mhalf = _half_powers(w_fac, "functional (W)")
        iso_tuple = MatrixTuple(tuple(w_half @ m @ w_mhalf for m in y))
        trace_defect = float(
            np.linalg.norm(sum(m.conj().T @ m for m in iso_tuple) - eye, 2)
        )
    except NumericalFailureError as exc:
        iso_err = str(exc)
    if co_tuple is None and iso_tuple is None:
        raise NumericalFailureError(
            f"both factors singular: V: {co_err}; W: {iso_err}"
        )
    return PfConjugation(
        v=v,
        w=w_fac,
        co_isometry=co_tuple,
        isometry=iso_tuple,
        co_isometry_error=co_err,
        isometry_error=iso_err,
        unital_defect=unital_defect,
        trace_defect=trace_defect,
        rho_hat=rho_hat,
    )
