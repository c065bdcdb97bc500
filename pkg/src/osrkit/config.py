"""Tolerances and size budgets with documented defaults.

Every threshold used by the analysis pipeline is a field here so reports can
echo the effective configuration and reruns are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class AnalysisConfig:
    # eigenvalue clustering: clusters are merged within cluster_tol * max(1, ||T||_2)
    cluster_tol: float = 1e-8
    # singular-value cutoff for numerical ranks (degeneracy indices, Pick rank)
    rank_tol: float = 1e-10
    # Kraus extraction: eigenvalues of psi(T) below kraus_tol * mu_max are dropped
    kraus_tol: float = 1e-10
    # Kraus cutoff used on averaged dynamics matrices, whose entries are only
    # accurate to the cross-check level; must sit above cross_check_tol
    kraus_tol_dynamics: float = 1e-5
    # phase group: enumerate only when all maximal phases are q-th roots of
    # unity for some q <= q_max, tested within phase_tol
    q_max: int = 24
    phase_tol: float = 1e-6
    # distance of the maximal spectrum from the nonnegative real axis
    pf_tol: float = 1e-7
    # word enumeration budget: d**k columns
    budget_words: int = 10**6
    # Kronecker power budget: lifted matrix size n**k
    budget_dim: int = 4096
    # symmetric lift budget: matrix size h = C(n+k-1, n-1)
    budget_sym: int = 5000
    # averaged-dynamics iteration
    cesaro_terms: int = 6000
    cesaro_tol: float = 1e-9
    # agreement required between the averaging and spectral-projection routes
    cross_check_tol: float = 1e-5
    # idempotent-versus-square-zero classification threshold
    dichotomy_tol: float = 1e-6
    # ideal membership residual (relative)
    ideal_tol: float = 1e-6
    # unital / trace-preserving flags
    channel_tol: float = 1e-8

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = AnalysisConfig()
