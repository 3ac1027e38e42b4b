"""
LS weight estimation and SI subtraction

Every solve goes through an economic QR factorization of the measurement
matrix; the right-hand side may hold one column per Rx antenna.
"""

from dataclasses import replace
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from shared.config.constants import ERROR_MESSAGES
from shared.config.settings import get_config
from shared.models.data_models import (
    BasisConfig, BasisKind, ComplexSequence, MeasurementMatrix, SourceKind, WeightVector
)
from shared.utils.error_handling import DimensionMismatchError, RankDeficiencyError
from shared.utils.logging_utils import get_logger

from ..basis.measurement import build_measurement_matrix
from ..basis.polynomials import build_transform

logger = get_logger(__name__)

Signal = Union[ComplexSequence, np.ndarray]

# Relative diagonal size of R below which the unpivoted factor is not trusted
_PIVOT_THRESHOLD = 1e-8


def _as_array(signal: Signal) -> np.ndarray:
    if isinstance(signal, ComplexSequence):
        return signal.samples
    return np.asarray(signal, dtype=np.complex128)


def qr_solve(entries: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, float, bool]:
    """Least-squares solution of entries @ w = rhs, with cond2(R) and whether pivoting was used"""
    rows, columns = entries.shape
    if rows < columns:
        raise RankDeficiencyError(
            f"{ERROR_MESSAGES['pilot_too_short']} Got {rows} rows for {columns} weights."
        )

    q, r = linalg.qr(entries, mode='economic')
    condition = float(np.linalg.cond(r)) if columns else 1.0
    if not np.isfinite(condition) or condition > get_config().numerics.condition_limit:
        raise RankDeficiencyError(condition_estimate=condition)

    diagonal = np.abs(np.diag(r))
    pivoted = bool(columns and diagonal.min() < _PIVOT_THRESHOLD * diagonal.max())
    if pivoted:
        q, r, permutation = linalg.qr(entries, mode='economic', pivoting=True)
        solution = np.empty((columns,) + rhs.shape[1:], dtype=np.complex128)
        solution[permutation] = linalg.solve_triangular(r, q.conj().T @ rhs)
    else:
        solution = linalg.solve_triangular(r, q.conj().T @ rhs)
    return solution, condition, pivoted


def ls_estimate(pilot_matrix: MeasurementMatrix, rx_pilot: Signal) -> WeightVector:
    """Minimise ||r_p - Phi_p w||; one weight column per column of rx_pilot"""
    rhs = _as_array(rx_pilot)
    if rhs.shape[0] != pilot_matrix.rows:
        raise DimensionMismatchError(
            f"Received pilot has {rhs.shape[0]} samples, measurement matrix has {pilot_matrix.rows} rows."
        )

    weights, condition, pivoted = qr_solve(pilot_matrix.entries, rhs)
    residual_norm = float(np.linalg.norm(rhs - pilot_matrix.entries @ weights))
    logger.log_ls_solve(pilot_matrix.rows, pilot_matrix.columns, condition, residual_norm, pivoted)
    return WeightVector(
        weights=weights,
        basis=pilot_matrix.basis,
        residual_norm=residual_norm,
        condition_number=condition,
        pivoted=pivoted
    )


def build_mimo_system(sequences: Sequence[ComplexSequence], config: BasisConfig,
                      source_kind: SourceKind = SourceKind.PILOT) -> MeasurementMatrix:
    """[Phi_1 ... Phi_M] for M per-antenna Tx sequences of equal length"""
    sequences = list(sequences)
    if not sequences:
        raise DimensionMismatchError("At least one Tx antenna sequence is required.")
    lengths = {seq.length for seq in sequences}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"Tx antenna sequences differ in length: {sorted(lengths)}.")

    blocks = [build_measurement_matrix(seq, config, source_kind).entries for seq in sequences]
    return MeasurementMatrix(
        entries=np.hstack(blocks),
        basis=replace(config, antennas_m=len(sequences)),
        source_kind=SourceKind(source_kind)
    )


def estimate_weights(pilot_sequences: Union[ComplexSequence, List[ComplexSequence]], rx_pilot: Signal,
                     config: BasisConfig) -> WeightVector:
    """Solve in the GLP basis and map to PH weights when config asks for PH"""
    if isinstance(pilot_sequences, ComplexSequence):
        pilot_sequences = [pilot_sequences]
    solve_config = config if config.kind is BasisKind.PH_IQ else config.with_kind(BasisKind.GLP)

    matrix = build_mimo_system(pilot_sequences, solve_config)
    estimate = ls_estimate(matrix, rx_pilot)
    if config.kind is not BasisKind.PH:
        return estimate

    transform = build_transform(matrix.basis)
    return WeightVector(
        weights=transform.to_ph(estimate.weights),
        basis=matrix.basis.with_kind(BasisKind.PH),
        residual_norm=estimate.residual_norm,
        condition_number=estimate.condition_number,
        run_id=estimate.run_id,
        pivoted=estimate.pivoted
    )


def reconstruct(data_matrix: MeasurementMatrix, weights: WeightVector) -> np.ndarray:
    """Phi_d w"""
    if data_matrix.columns != weights.weights.shape[0]:
        raise DimensionMismatchError(
            f"Data matrix has {data_matrix.columns} columns, weights have {weights.weights.shape[0]} rows."
        )
    if data_matrix.basis.kind is not weights.basis.kind:
        raise DimensionMismatchError(
            f"Data matrix basis '{data_matrix.basis.kind.value}' does not match weight basis "
            f"'{weights.basis.kind.value}'."
        )
    return data_matrix.entries @ weights.weights


def cancel(data_matrix: MeasurementMatrix, weights: WeightVector, rx_data: Signal) -> Signal:
    """e_d = r_d - Phi_d w; returns the same container type as rx_data"""
    received = _as_array(rx_data)
    if received.shape[0] != data_matrix.rows:
        raise DimensionMismatchError(
            f"Received data has {received.shape[0]} samples, data matrix has {data_matrix.rows} rows."
        )
    estimate = reconstruct(data_matrix, weights)
    if estimate.shape != received.shape:
        raise DimensionMismatchError(
            f"Reconstruction shape {estimate.shape} does not match received shape {received.shape}."
        )
    residual = received - estimate
    if isinstance(rx_data, ComplexSequence):
        return ComplexSequence(residual)
    return residual
