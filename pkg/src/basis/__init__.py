"""
Canceller bases and measurement matrices
"""

from .polynomials import (
    phi,
    laguerre_l1,
    coeff_l,
    psi,
    psi_monomial,
    iq_monomial,
    branch_matrix,
    build_transform
)
from .measurement import build_measurement_matrix

__all__ = [
    "phi",
    "laguerre_l1",
    "coeff_l",
    "psi",
    "psi_monomial",
    "iq_monomial",
    "branch_matrix",
    "build_transform",
    "build_measurement_matrix"
]
