"""
LS canceller: weight estimation, SI subtraction and the RSI ledger
"""

from .estimation import (
    qr_solve,
    ls_estimate,
    build_mimo_system,
    estimate_weights,
    reconstruct,
    cancel
)
from .rsi import (
    MseTerms,
    RsiComponents,
    rsi_components,
    decompose_rsi,
    measured_report,
    analytic_mse,
    conditional_bias
)

__all__ = [
    "qr_solve",
    "ls_estimate",
    "build_mimo_system",
    "estimate_weights",
    "reconstruct",
    "cancel",
    "MseTerms",
    "RsiComponents",
    "rsi_components",
    "decompose_rsi",
    "measured_report",
    "analytic_mse",
    "conditional_bias"
]
