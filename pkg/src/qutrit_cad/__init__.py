"""
Two-qutrit entanglement under correlated amplitude damping.

Basis ordering throughout: |ij> (first qutrit i, second j) sits at index 3*i + j.
"""

from __future__ import annotations

from .channels import ChannelParams, KrausSet, RateParams, cad_apply, damping_from_rates
from .errors import (
    DimensionMismatch,
    IncompleteGrid,
    NoConvergence,
    NotHermitian,
    NotNormalized,
    OutOfRange,
    ParseError,
    QutritCADError,
    ValidationError,
    ZeroProbability,
)
from .linalg import hermitian_eigenvalues, kron, partial_transpose, trace_norm
from .protection import (
    ProtectionParams,
    ProtocolOutcome,
    eam_optimal_outcome,
    eam_qmr_pipeline,
    optimal_qmr_eam,
    optimal_qmr_wm,
    wm_optimal_outcome,
    wm_qmr_pipeline,
)
from .states import StateAmplitudes, StateClass, make_state, negativity, validate_density

__all__ = [
    "ChannelParams",
    "DimensionMismatch",
    "IncompleteGrid",
    "KrausSet",
    "NoConvergence",
    "NotHermitian",
    "NotNormalized",
    "OutOfRange",
    "ParseError",
    "ProtectionParams",
    "ProtocolOutcome",
    "QutritCADError",
    "RateParams",
    "StateAmplitudes",
    "StateClass",
    "ValidationError",
    "ZeroProbability",
    "cad_apply",
    "damping_from_rates",
    "eam_optimal_outcome",
    "eam_qmr_pipeline",
    "hermitian_eigenvalues",
    "kron",
    "make_state",
    "negativity",
    "optimal_qmr_eam",
    "optimal_qmr_wm",
    "partial_transpose",
    "trace_norm",
    "validate_density",
    "wm_optimal_outcome",
    "wm_qmr_pipeline",
]
