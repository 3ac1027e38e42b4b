"""
RSI power ledger

Splits the residual after cancellation into truncation, bias-induced (BIRE),
noise-induced (NIRE) and receiver-noise terms using the simulation oracle.
All arithmetic is in linear mW; dBm appears only in the returned report.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np
from scipy import linalg

from shared.models.data_models import ComplexSequence, OracleBundle, RsiReport, WeightVector
from shared.utils.error_handling import (
    DimensionMismatchError, OracleMismatchError, ValidationError, validate_positive
)
from shared.utils.rng import make_rng
from shared.utils.units import linear_to_db, mw_to_dbm

from .estimation import qr_solve

Signal = Union[ComplexSequence, np.ndarray]


@dataclass
class MseTerms:
    """Per-sample LS MSE split for Gaussian data (G_d ~ L_d I)"""
    truncation: float
    bias: float
    noise_enhancement: float
    noise: float

    @property
    def total(self) -> float:
        return self.truncation + self.bias + self.noise_enhancement + self.noise

    @property
    def mmse_floor(self) -> float:
        return self.truncation + self.noise

    def to_dict(self) -> Dict[str, float]:
        return {
            'truncation': self.truncation,
            'bias': self.bias,
            'noise_enhancement': self.noise_enhancement,
            'noise': self.noise,
            'total': self.total,
            'mmse_floor': self.mmse_floor
        }


@dataclass
class RsiComponents:
    """Linear-domain ledger, normalised per data sample and Rx antenna"""
    measured: float
    truncation: float
    bire: float
    nire: float
    noise: float
    exact: float
    bound: float
    trace_ratio: float
    bire_energy: float

    @property
    def excess(self) -> float:
        return self.exact - self.noise


def _as_columns(values: Signal) -> np.ndarray:
    array = values.samples if isinstance(values, ComplexSequence) else np.asarray(values, dtype=np.complex128)
    return array.reshape(array.shape[0], -1)


def _triangular_inverse(r: np.ndarray) -> np.ndarray:
    return linalg.solve_triangular(r, np.eye(r.shape[0], dtype=r.dtype))


def rsi_components(truth: OracleBundle, residual: Signal) -> RsiComponents:
    """Evaluate the exact conditional expectation of the RSI and its four-term split"""
    e_d = _as_columns(residual)
    eps_d = _as_columns(truth.eps_data)
    eps_p = _as_columns(truth.eps_pilot)
    if eps_d.shape != e_d.shape:
        raise DimensionMismatchError(
            f"Oracle data error shape {eps_d.shape} does not match residual shape {e_d.shape}."
        )
    psi_d = np.asarray(truth.psi_data, dtype=np.complex128)
    psi_p = np.asarray(truth.psi_pilot, dtype=np.complex128)
    rows_d, antennas = e_d.shape
    scale = 1.0 / (rows_d * antennas)
    rho = float(truth.noise_power_mw)
    measured = float(np.sum(np.abs(e_d) ** 2)) * scale
    truncation = float(np.sum(np.abs(eps_d) ** 2)) * scale

    if truth.global_ls:
        columns = psi_d.shape[1]
        q, _ = linalg.qr(psi_d, mode='economic')
        projected = q @ (q.conj().T @ eps_d)
        bire = float(np.sum(np.abs(projected) ** 2)) * scale
        nire = rho * columns / rows_d
        exact = truncation - bire + rho * (rows_d - columns) / rows_d
        return RsiComponents(
            measured=measured, truncation=truncation, bire=bire, nire=nire, noise=rho,
            exact=exact, bound=truncation + rho, trace_ratio=float(columns),
            bire_energy=bire / scale
        )

    q, r = linalg.qr(psi_p, mode='economic')
    bias_weights = linalg.solve_triangular(r, q.conj().T @ eps_p)
    bire_vector = psi_d @ bias_weights
    # tr(G_p^-1 G_d) = ||Psi_d R^-1||_F^2
    trace_ratio = float(np.sum(np.abs(psi_d @ _triangular_inverse(r)) ** 2))

    bire_energy = float(np.sum(np.abs(bire_vector) ** 2))
    bire = bire_energy * scale
    nire = rho * trace_ratio / rows_d
    exact = float(np.sum(np.abs(eps_d - bire_vector) ** 2)) * scale + nire + rho
    return RsiComponents(
        measured=measured, truncation=truncation, bire=bire, nire=nire, noise=rho,
        exact=exact, bound=2.0 * truncation + 2.0 * bire + nire + rho,
        trace_ratio=trace_ratio, bire_energy=bire_energy
    )


def decompose_rsi(truth: OracleBundle, weights: WeightVector, residual: Signal) -> RsiReport:
    """Measured RSI plus the analytic ledger for the same trial"""
    if weights.run_id != truth.run_id:
        raise OracleMismatchError(expected_run=truth.run_id, actual_run=weights.run_id)
    parts = rsi_components(truth, residual)
    return RsiReport(
        rsi_dbm=mw_to_dbm(parts.measured),
        truncation_dbm=mw_to_dbm(parts.truncation),
        bire_dbm=mw_to_dbm(parts.bire),
        nire_dbm=mw_to_dbm(parts.nire),
        noise_dbm=mw_to_dbm(parts.noise),
        analytic_expected_dbm=mw_to_dbm(parts.exact),
        bound_dbm=mw_to_dbm(parts.bound),
        excess_dbm=mw_to_dbm(max(parts.excess, 0.0)),
        cancellation_db=_cancellation_db(truth.rx_power_mw, parts.measured),
        run_id=truth.run_id
    )


def measured_report(residual: Signal, noise_power_mw: float, rx_power_mw: float,
                    run_id: Optional[str] = None) -> RsiReport:
    """Report without an oracle; only RSI, noise and excess are populated"""
    e_d = _as_columns(residual)
    measured = float(np.mean(np.abs(e_d) ** 2))
    return RsiReport(
        rsi_dbm=mw_to_dbm(measured),
        truncation_dbm=math.nan,
        bire_dbm=math.nan,
        nire_dbm=math.nan,
        noise_dbm=mw_to_dbm(noise_power_mw),
        analytic_expected_dbm=math.nan,
        bound_dbm=math.nan,
        excess_dbm=mw_to_dbm(max(measured - noise_power_mw, 0.0)),
        cancellation_db=_cancellation_db(rx_power_mw, measured),
        run_id=run_id
    )


def _cancellation_db(rx_power_mw: float, rsi_mw: float) -> float:
    if rx_power_mw <= 0.0:
        return math.nan
    return float(linear_to_db(rx_power_mw / max(rsi_mw, 1e-300), floor=1e-300))


def analytic_mse(truth_tail_power: float, psi_pilot: np.ndarray, eps_pilot: np.ndarray,
                 rho_noise: float) -> MseTerms:
    """Per-sample LS MSE: tail + ||Psi_p^+ eps_p||^2 + rho tr(G_p^-1) + rho"""
    validate_positive(truth_tail_power, "truth_tail_power", allow_zero=True)
    validate_positive(rho_noise, "rho_noise", allow_zero=True)
    psi_pilot = np.asarray(psi_pilot, dtype=np.complex128)
    q, r = linalg.qr(psi_pilot, mode='economic')
    bias_weights = linalg.solve_triangular(r, q.conj().T @ _as_columns(eps_pilot))
    trace_inverse = float(np.sum(np.abs(_triangular_inverse(r)) ** 2))
    return MseTerms(
        truncation=float(truth_tail_power),
        bias=float(np.sum(np.abs(bias_weights) ** 2)),
        noise_enhancement=rho_noise * trace_inverse,
        noise=float(rho_noise)
    )


def conditional_bias(psi_pilot: np.ndarray, rx_clean: np.ndarray, true_weights: np.ndarray,
                     noise_power: float, realizations: int, seed: int) -> float:
    """||mean over noise of w_hat - w|| with the pilot held fixed"""
    psi_pilot = np.asarray(psi_pilot, dtype=np.complex128)
    rx_clean = np.asarray(rx_clean, dtype=np.complex128).ravel()
    if rx_clean.size != psi_pilot.shape[0]:
        raise DimensionMismatchError(
            f"Clean pilot response has {rx_clean.size} samples for {psi_pilot.shape[0]} rows."
        )
    if realizations < 1:
        raise ValidationError(f"realizations must be >= 1, got {realizations}.", "realizations")

    rng = make_rng(seed, 'bias_noise')
    shape = (rx_clean.size, realizations)
    noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(noise_power / 2.0)
    estimates, _, _ = qr_solve(psi_pilot, rx_clean[:, None] + noise)
    mean_estimate = estimates.mean(axis=1)
    return float(np.linalg.norm(mean_estimate - np.asarray(true_weights, dtype=np.complex128).ravel()))
