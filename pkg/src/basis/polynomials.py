"""
Polynomial basis functions for the PH, GLP and PH+IQ cancellers

phi_p(x) = |x|^(p-1) x
psi_p(x) = sqrt(2/(p+1)) L^1_{(p-1)/2}(|x|^2) x, orthonormal for x ~ CN(0, 1)
psi_p(x) = sum_q l_{p,q} phi_q(x), so Psi = Phi T with T = I kron L
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy.special import eval_genlaguerre

from shared.config.constants import SIGNAL_CONFIG
from shared.models.data_models import BasisConfig, BasisKind, TransformMatrix
from shared.utils.error_handling import (
    InvalidOrderError, UnsupportedBasisError, ValidationError, validate_odd_order
)

Number = Union[complex, float, np.ndarray]


def _scalar_or_array(value: np.ndarray, like: Number) -> Number:
    if np.ndim(like) == 0:
        return value.item()
    return value


def phi(x: Number, p: int) -> Number:
    """PH branch |x|^(p-1) x"""
    validate_odd_order(p, "p")
    x_arr = np.asarray(x, dtype=np.complex128)
    return _scalar_or_array(np.abs(x_arr) ** (p - 1) * x_arr, x)


@lru_cache(maxsize=None)
def _laguerre_coefficients(i: int) -> Tuple[float, ...]:
    """Exact (-1)^k / k! * C(i+1, k+1), k = 0..i"""
    return tuple(
        float(Fraction((-1) ** k, math.factorial(k)) * math.comb(i + 1, k + 1))
        for k in range(i + 1)
    )


def laguerre_l1(i: int, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Generalized Laguerre polynomial L^1_i(t)"""
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or i < 0:
        raise ValidationError(f"Laguerre index must be a non-negative integer, got {i}.", "i")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("Laguerre argument must be >= 0.", "t")

    if i <= SIGNAL_CONFIG['max_horner_laguerre_index']:
        coefficients = _laguerre_coefficients(int(i))
        result = np.full_like(t_arr, coefficients[-1])
        for coefficient in reversed(coefficients[:-1]):
            result = result * t_arr + coefficient
    else:
        # Three-term recurrence inside scipy; the explicit sum cancels badly here
        result = eval_genlaguerre(int(i), 1.0, t_arr)

    if np.ndim(t) == 0:
        return float(result)
    return result


def coeff_l(p: int, q: int) -> float:
    """l_{p,q}: weight of phi_q in psi_p"""
    validate_odd_order(p, "p")
    validate_odd_order(q, "q")
    if q > p:
        raise InvalidOrderError(f"coeff_l needs p >= q, got p={p}, q={q}.", "q")
    return _coeff_l(p, q)


@lru_cache(maxsize=None)
def _coeff_l(p: int, q: int) -> float:
    k = (q - 1) // 2
    exact = Fraction((-1) ** k, math.factorial(k)) * math.comb((p + 1) // 2, (q + 1) // 2)
    return math.sqrt(2.0 / (p + 1)) * float(exact)


def psi(x: Number, p: int) -> Number:
    """GLP branch in Laguerre form"""
    validate_odd_order(p, "p")
    x_arr = np.asarray(x, dtype=np.complex128)
    value = math.sqrt(2.0 / (p + 1)) * laguerre_l1((p - 1) // 2, np.abs(x_arr) ** 2) * x_arr
    return _scalar_or_array(np.asarray(value), x)


def psi_monomial(x: Number, p: int) -> Number:
    """GLP branch as the triangular sum of PH branches"""
    validate_odd_order(p, "p")
    x_arr = np.asarray(x, dtype=np.complex128)
    power = np.abs(x_arr) ** 2
    value = np.zeros_like(x_arr)
    term = x_arr.copy()
    for q in range(1, p + 1, 2):
        value = value + _coeff_l(p, q) * term
        term = term * power
    return _scalar_or_array(value, x)


def iq_monomial(x: Number, p: int, q: int) -> Number:
    """x^q (x*)^(p-q) for the widely-linear PH+IQ basis"""
    validate_odd_order(p, "p")
    if q < 0 or q > p:
        raise InvalidOrderError(f"iq_monomial needs 0 <= q <= p, got p={p}, q={q}.", "q")
    x_arr = np.asarray(x, dtype=np.complex128)
    return _scalar_or_array(x_arr ** q * np.conj(x_arr) ** (p - q), x)


def branch_matrix(x: np.ndarray, config: BasisConfig) -> np.ndarray:
    """Per-sample basis outputs, shape (len(x), branches_per_delay)"""
    x = np.asarray(x, dtype=np.complex128)
    if config.kind is BasisKind.PH:
        columns = [phi(x, p) for p in config.orders]
    elif config.kind is BasisKind.GLP:
        columns = [psi(x, p) for p in config.orders]
    else:
        columns = [iq_monomial(x, p, q) for p in config.orders for q in range(p + 1)]
    return np.column_stack(columns) if x.size else np.zeros((0, config.branches_per_delay), np.complex128)


def build_transform(config: BasisConfig) -> TransformMatrix:
    """T = I_{M(L_h+1)} kron L with L[i, j] = l_{p_j, p_i}"""
    if config.kind is BasisKind.PH_IQ:
        raise UnsupportedBasisError("No GLP counterpart exists for the PH+IQ basis.", config.kind.value)
    orders = config.orders
    block = np.zeros((len(orders), len(orders)))
    for j, p in enumerate(orders):
        for i, q in enumerate(orders[: j + 1]):
            block[i, j] = _coeff_l(p, q)
    blocks = config.taps * config.antennas_m
    entries = np.kron(np.eye(blocks), block).astype(np.complex128)
    return TransformMatrix(entries=entries, block=block, basis=config)
