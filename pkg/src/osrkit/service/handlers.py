"""Command handlers shared by the HTTP routes and the CLI.

Each handler takes a validated request model, runs the analysis, and returns
a Report.  All numeric payloads are serialized as [re, im] pairs or plain
floats so structured output is deterministic byte-for-byte (timings aside).
"""

from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from ..config import DEFAULT_CONFIG, AnalysisConfig
from ..dynamics import analyze_dynamics
from ..errors import ResourceBudgetError
from ..jsr import (
    jsr_bracket_kron,
    jsr_bracket_osr,
    jsr_bracket_sym,
    jsr_bracket_words,
    perm_top_eigenvector_sign,
    sum_sym_lift,
)
from ..lyapunov import lyapunov_certificate, similarity_certificate
from ..spectra import (
    build_t,
    gelfand_seq_power,
    maximal_spectrum,
    outer_spectral_radius,
    spectral_radius,
)
from ..tuplefile import TupleFile, matrix_to_pairs, parse_tuple_document
from .schemas import (
    CertifyRequest,
    CommonOptions,
    DynamicsRequest,
    InputEcho,
    JsrRequest,
    OsrRequest,
    Report,
    SymliftRequest,
)

__all__ = [
    "tuple_from_request",
    "run_osr",
    "run_jsr",
    "run_certify",
    "run_dynamics",
    "run_symlift",
]


def tuple_from_request(doc) -> TupleFile:
    return parse_tuple_document(doc.model_dump(exclude_none=True))


def _config_from(options: CommonOptions) -> AnalysisConfig:
    overrides = {}
    if options.tol is not None:
        overrides["cluster_tol"] = options.tol
    if options.q_max is not None:
        overrides["q_max"] = options.q_max
    if options.budget_words is not None:
        overrides["budget_words"] = options.budget_words
    if options.budget_dim is not None:
        overrides["budget_dim"] = options.budget_dim
    if options.budget_sym is not None:
        overrides["budget_sym"] = options.budget_sym
    return replace(DEFAULT_CONFIG, **overrides)


def _pair(z: complex) -> list[float]:
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _echo_config(config: AnalysisConfig, options: CommonOptions, **params) -> dict:
    doc = config.as_dict()
    doc.update(params)
    doc["seed"] = options.seed
    return doc


def _report(command: str, tf: TupleFile, config: dict, results: dict,
            warnings: list[str], started: float) -> Report:
    return Report(
        command=command,
        input=InputEcho(digest=tf.digest, name=tf.name, n=tf.n, d=tf.d),
        config=config,
        results=results,
        warnings=warnings,
        timings={"total_seconds": time.perf_counter() - started},
    )


def _maximal_spectrum_doc(ms) -> dict:
    return {
        "radius": float(ms.radius),
        "elements": [
            {"eigenvalue": _pair(lam), "degeneracy_index": int(eta)}
            for lam, eta in ms.elements
        ],
        "m_t": int(ms.m_t),
        "nondegenerate": bool(ms.nondegenerate),
        "has_real_nonnegative": bool(ms.has_real_nonnegative),
    }


def run_osr(req: OsrRequest) -> Report:
    started = time.perf_counter()
    tf = tuple_from_request(req.matrix_tuple)
    config = _config_from(req.options)
    x = tf.matrix_tuple
    warnings: list[str] = []

    t = build_t(x)
    rho_t = spectral_radius(t.mat)
    ms = maximal_spectrum(t, config.cluster_tol)
    warnings.extend(ms.warnings)
    gelfand = [
        {"k": int(k), "value": float(gelfand_seq_power(x, int(k)))}
        for k in sorted(set(req.k))
    ]
    results = {
        "outer_spectral_radius": float(np.sqrt(rho_t)),
        "t_spectral_radius": float(rho_t),
        "maximal_spectrum": _maximal_spectrum_doc(ms),
        "gelfand_sequence": gelfand,
    }
    return _report(
        "osr", tf, _echo_config(config, req.options, k=sorted(set(req.k))),
        results, warnings, started,
    )


def _bracket_row(bracket, skipped: bool = False, reason: str | None = None) -> dict:
    if skipped:
        return {"method": None, "k": None, "lower": None, "upper": None,
                "skipped": True, "reason": reason}
    return {
        "method": bracket.method,
        "k": int(bracket.k),
        "lower": float(bracket.lower),
        "upper": float(bracket.upper),
        "skipped": False,
        "reason": None,
    }


def run_jsr(req: JsrRequest) -> Report:
    started = time.perf_counter()
    tf = tuple_from_request(req.matrix_tuple)
    config = _config_from(req.options)
    x = tf.matrix_tuple
    warnings: list[str] = []
    known = {"words", "osr", "kron", "sym"}
    methods = [m for m in req.methods if m in known]
    for m in req.methods:
        if m not in known:
            warnings.append(f"unknown method '{m}' ignored")
    ks = sorted(set(int(k) for k in req.k))
    rows: list[dict] = []

    if "words" in methods:
        try:
            rows.append(_bracket_row(
                jsr_bracket_words(x, req.k_max, budget=config.budget_words)
            ))
        except ResourceBudgetError as exc:
            rows.append({"method": "words", "k": int(req.k_max), "lower": None,
                         "upper": None, "skipped": True, "reason": str(exc)})
    if "osr" in methods:
        rows.append(_bracket_row(jsr_bracket_osr(x)))
    if "kron" in methods:
        for k in ks:
            try:
                rows.append(_bracket_row(
                    jsr_bracket_kron(x, k, budget=config.budget_dim)
                ))
            except ResourceBudgetError as exc:
                rows.append({"method": "kron_lift", "k": k, "lower": None,
                             "upper": None, "skipped": True, "reason": str(exc)})
    if "sym" in methods:
        if not x.is_real():
            warnings.append(
                "symmetric-lift guarantee stated for real matrices; "
                "complex input treated as a heuristic"
            )
        for k in ks:
            try:
                rows.append(_bracket_row(
                    jsr_bracket_sym(x, k, budget=config.budget_sym)
                ))
            except ResourceBudgetError as exc:
                rows.append({"method": "sym_lift", "k": k, "lower": None,
                             "upper": None, "skipped": True, "reason": str(exc)})

    results = {"brackets": rows}
    return _report(
        "jsr", tf,
        _echo_config(config, req.options, methods=methods, k=ks, k_max=req.k_max),
        results, warnings, started,
    )


def run_certify(req: CertifyRequest) -> Report:
    started = time.perf_counter()
    tf = tuple_from_request(req.matrix_tuple)
    config = _config_from(req.options)
    x = tf.matrix_tuple
    warnings: list[str] = []

    rho_hat = outer_spectral_radius(x)
    if req.target is None:
        cert = lyapunov_certificate(x)
        bound = 1.0
    else:
        cert = similarity_certificate(x, req.target)
        bound = float(req.target)
    residual_ok = cert.residual <= 1e-8 * (1.0 + float(np.linalg.norm(cert.l, 2)))
    row_ok = cert.row_norm < bound or np.isclose(cert.row_norm, bound)
    results = {
        "outer_spectral_radius": float(rho_hat),
        "target": bound,
        "lyapunov_matrix": matrix_to_pairs(cert.l),
        "similarity": matrix_to_pairs(cert.s),
        "residual": float(cert.residual),
        "row_norm": float(cert.row_norm),
        "resolvent_condition": float(cert.resolvent_cond),
        "contracts_hold": bool(residual_ok and row_ok),
    }
    return _report(
        "certify", tf, _echo_config(config, req.options, target=req.target),
        results, warnings, started,
    )


def run_dynamics(req: DynamicsRequest) -> Report:
    started = time.perf_counter()
    tf = tuple_from_request(req.matrix_tuple)
    config = _config_from(req.options)
    rep = analyze_dynamics(tf.matrix_tuple, config)
    warnings = list(rep.warnings)

    lam_doc = None
    if rep.lambda_family is not None:
        lam_doc = {
            "order": int(rep.lambda_family.order),
            "relation_verified": bool(rep.lambda_family.relation_verified),
            "members": [
                {
                    "residue": int(m.residue),
                    "kraus_count": int(m.kraus_count),
                    "kraus_in_span": bool(m.kraus_in_span),
                }
                for m in rep.lambda_family.members
            ],
        }
    results = {
        "outer_spectral_radius": float(rep.rho_hat),
        "classification": rep.classification,
        "t_hat_rank": int(rep.t_hat_rank),
        "t_hat_idempotent": bool(rep.t_hat_idempotent),
        "t_hat_square_zero": bool(rep.t_hat_square_zero),
        "algebra_dim": int(rep.algebra_dim),
        "ideal_verified": bool(rep.ideal_verified),
        "unital": bool(rep.unital),
        "trace_preserving": bool(rep.trace_preserving),
        "kraus_weights": [float(w) for w in rep.kraus_weights],
        "kraus_family": (
            [matrix_to_pairs(b) for b in rep.b_family]
            if rep.b_family is not None else []
        ),
        "maximal_spectrum": (
            _maximal_spectrum_doc(rep.maximal) if rep.maximal is not None else None
        ),
        "lambda_family": lam_doc,
        "averaging": (
            {
                "converged": bool(rep.cesaro.converged),
                "n_used": int(rep.cesaro.n_used),
                "achieved": float(rep.cesaro.achieved),
                "period": (int(rep.cesaro.period)
                           if rep.cesaro.period is not None else None),
            }
            if rep.cesaro is not None else None
        ),
        "cross_check_delta": (
            float(rep.cross_check_delta) if rep.cross_check_delta is not None else None
        ),
    }
    return _report(
        "dynamics", tf, _echo_config(config, req.options), results, warnings, started
    )


def run_symlift(req: SymliftRequest) -> Report:
    started = time.perf_counter()
    tf = tuple_from_request(req.matrix_tuple)
    config = _config_from(req.options)
    x = tf.matrix_tuple
    warnings: list[str] = []
    if not x.is_real():
        warnings.append(
            "symmetric-lift guarantee stated for real matrices; "
            "complex input treated as a heuristic"
        )
    rows = []
    lifts = []
    for k in sorted(set(int(k) for k in req.k)):
        try:
            bracket = jsr_bracket_sym(x, k, budget=config.budget_sym)
            rows.append(_bracket_row(bracket))
            lift = sum_sym_lift(x, 2 * k, budget=config.budget_sym)
            entry = {"degree": 2 * k, "dim": int(lift.dim)}
            if req.dump_basis:
                entry["basis"] = [list(map(int, b)) for b in lift.basis]
            # observed-only: sign of the factor swap on the top eigenvector
            if x.n ** (2 * k) <= config.budget_dim and 2 * k >= 2:
                swap = (1, 0) + tuple(range(2, 2 * k))
                entry["perm_sign"] = perm_top_eigenvector_sign(
                    x, 2 * k, swap, budget=config.budget_dim
                )
            lifts.append(entry)
        except ResourceBudgetError as exc:
            rows.append({"method": "sym_lift", "k": k, "lower": None,
                         "upper": None, "skipped": True, "reason": str(exc)})
    results = {"brackets": rows, "lifts": lifts}
    return _report(
        "symlift", tf,
        _echo_config(config, req.options, k=sorted(set(req.k)),
                     dump_basis=req.dump_basis),
        results, warnings, started,
    )
