"""osrkit: outer spectral radius analysis for tuples of complex matrices.

Computes and certifies the outer spectral radius, brackets the joint
spectral radius through Kronecker-power and symmetric-power lifts, builds
Lyapunov/similarity contraction certificates, and analyzes the asymptotic
dynamics of the completely positive map induced by a tuple.

Ships as a library, a FastAPI service (``osrkit.service.app``), and a CLI
(``osrkit``) that is a thin client over the same handlers.
"""

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import (
    DimensionError,
    DomainError,
    NumericalFailureError,
    OsrkitError,
    ResourceBudgetError,
    TupleFileError,
)
from .tensor_ops import Superoperator, kron, psi, ptrace_q, unvec, vec
from .tuples import MatrixTuple
from .spectra import (
    MaximalSpectrum,
    Spectrum,
    build_t,
    degeneracy_index,
    eigen_all,
    eigen_pairs,
    gelfand_seq_power,
    gelfand_seq_words,
    maximal_spectrum,
    outer_spectral_radius,
    schur_factors,
    spectral_radius,
)
from .jsr import (
    JsrBracket,
    SymLiftOperator,
    jsr_bracket_kron,
    jsr_bracket_osr,
    jsr_bracket_sym,
    jsr_bracket_words,
    kron_power_tuple,
    perm_commutation_check,
    perm_top_eigenvector_sign,
    sum_sym_lift,
    sym_lift,
)
from .lyapunov import (
    LyapunovCertificate,
    PickMatrix,
    col_norm,
    lyapunov_certificate,
    pick_matrix,
    row_norm,
    similarity_certificate,
)
from .dynamics import (
    CpMap,
    DynamicsReport,
    PfConjugation,
    analyze_dynamics,
    apply_cp,
    cesaro_t_hat,
    generated_algebra_basis,
    kraus_from_superoperator,
    pf_conjugation,
    spectral_t_hat,
    verify_ideal,
)
from .tuplefile import TupleFile, load_tuple_file, parse_tuple_document

__version__ = "0.1.0"
