"""
Tests for LS estimation, MIMO stacking and cancellation
"""

import pytest
import numpy as np

from shared.models.data_models import BasisConfig, BasisKind, ComplexSequence, SourceKind, WeightVector
from shared.utils.error_handling import DimensionMismatchError, RankDeficiencyError
from src.basis.measurement import build_measurement_matrix
from src.basis.polynomials import build_transform
from src.canceller.estimation import (
    qr_solve, ls_estimate, build_mimo_system, estimate_weights, reconstruct, cancel
)
from src.signals.sequences import gen_gaussian_sequence

def _random_weights(rng, size, columns=None):
    shape = (size,) if columns is None else (size, columns)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

def test_qr_solve_matches_lstsq(rng):
    """Test QR solution against numpy least squares"""
    entries = rng.standard_normal((40, 6)) + 1j * rng.standard_normal((40, 6))
    rhs = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    solution, condition, pivoted = qr_solve(entries, rhs)

    expected = np.linalg.lstsq(entries, rhs, rcond=None)[0]
    np.testing.assert_allclose(solution, expected, rtol=1e-10, atol=1e-12)
    assert condition >= 1.0
    assert not pivoted

def test_qr_solve_underdetermined(rng):
    """Test fewer rows than weights is rejected"""
    with pytest.raises(RankDeficiencyError) as exc_info:
        qr_solve(rng.standard_normal((4, 6)).astype(complex), np.zeros(4, dtype=complex))
    assert 'too short' in exc_info.value.message

def test_constant_envelope_pilot_is_rank_deficient():
    """Test |x| = 1 makes every PH branch collinear with x"""
    pilot = ComplexSequence(np.exp(1j * np.random.default_rng(3).uniform(0, 2 * np.pi, 200)))
    matrix = build_measurement_matrix(pilot, BasisConfig(order_p=3, memory_lh=1, kind=BasisKind.PH))
    with pytest.raises(RankDeficiencyError):
        ls_estimate(matrix, np.zeros(matrix.rows, dtype=complex))

def test_ls_estimate_recovers_noise_free_weights(gaussian_pilot, small_basis, rng):
    """Test exact recovery when the SI lies in the basis span"""
    matrix = build_measurement_matrix(gaussian_pilot, small_basis)
    weights = _random_weights(rng, small_basis.weight_count)
    estimate = ls_estimate(matrix, matrix.entries @ weights)

    np.testing.assert_allclose(estimate.weights, weights, rtol=1e-8, atol=1e-10)
    assert estimate.residual_norm < 1e-8
    assert estimate.basis.kind is BasisKind.GLP

def test_ls_estimate_row_mismatch(gaussian_pilot, small_basis):
    """Test received pilot length must match the matrix"""
    matrix = build_measurement_matrix(gaussian_pilot, small_basis)
    with pytest.raises(DimensionMismatchError):
        ls_estimate(matrix, np.zeros(matrix.rows + 1, dtype=complex))

def test_estimate_weights_ph_equals_transformed_glp(gaussian_pilot, small_basis, rng):
    """Test PH weights are T times the GLP solve and rebuild the same SI"""
    glp_matrix = build_measurement_matrix(gaussian_pilot, small_basis)
    rx = glp_matrix.entries @ _random_weights(rng, small_basis.weight_count)
    rx = rx + 1e-3 * _random_weights(rng, rx.size)

    glp = estimate_weights(gaussian_pilot, rx, small_basis)
    ph = estimate_weights(gaussian_pilot, rx, small_basis.with_kind(BasisKind.PH))
    transform = build_transform(small_basis.with_kind(BasisKind.PH))

    assert ph.basis.kind is BasisKind.PH
    np.testing.assert_allclose(ph.weights, transform.to_ph(glp.weights), rtol=1e-10)
    ph_matrix = build_measurement_matrix(gaussian_pilot, small_basis.with_kind(BasisKind.PH))
    np.testing.assert_allclose(ph_matrix.entries @ ph.weights, glp_matrix.entries @ glp.weights,
                               rtol=1e-8, atol=1e-10)

def test_estimate_weights_iq_basis(gaussian_pilot, rng):
    """Test the widely-linear basis captures an image term"""
    config = BasisConfig(order_p=1, memory_lh=0, kind=BasisKind.PH_IQ)
    x = gaussian_pilot.samples
    rx = (0.9 + 0.1j) * x + 0.05 * np.conj(x)
    estimate = estimate_weights(gaussian_pilot, rx, config)

    assert estimate.basis.kind is BasisKind.PH_IQ
    np.testing.assert_allclose(estimate.weights, [0.05, 0.9 + 0.1j], atol=1e-10)

def test_build_mimo_system_stacks_antennas(small_basis):
    """Test [Phi_1 Phi_2] layout and antenna count"""
    first = gen_gaussian_sequence(300, seed=1)
    second = gen_gaussian_sequence(300, seed=2)
    system = build_mimo_system([first, second], small_basis)

    assert system.basis.antennas_m == 2
    assert system.columns == 2 * small_basis.weight_count
    np.testing.assert_allclose(
        system.entries[:, small_basis.weight_count:],
        build_measurement_matrix(second, small_basis).entries
    )

def test_build_mimo_system_length_mismatch(small_basis):
    """Test Tx antenna sequences must share a length"""
    with pytest.raises(DimensionMismatchError):
        build_mimo_system([gen_gaussian_sequence(300, 1), gen_gaussian_sequence(301, 2)], small_basis)

def test_mimo_estimate_per_rx_antenna(small_basis, rng):
    """Test one weight column per Rx antenna"""
    sequences = [gen_gaussian_sequence(400, seed=s) for s in (4, 5)]
    system = build_mimo_system(sequences, small_basis)
    weights = _random_weights(rng, system.columns, columns=2)
    estimate = estimate_weights(sequences, system.entries @ weights, small_basis)

    assert estimate.weights.shape == (system.columns, 2)
    np.testing.assert_allclose(estimate.weights, weights, rtol=1e-8, atol=1e-10)

def test_cancel_removes_reconstructed_si(gaussian_pilot, small_basis, rng):
    """Test data-phase subtraction keeps the container type"""
    weights = _random_weights(rng, small_basis.weight_count)
    data = gen_gaussian_sequence(600, seed=13)
    data_matrix = build_measurement_matrix(data, small_basis, SourceKind.DATA)
    vector = WeightVector(weights=weights, basis=small_basis)
    received = data_matrix.entries @ weights + 0.01

    residual = cancel(data_matrix, vector, ComplexSequence(received))
    assert isinstance(residual, ComplexSequence)
    np.testing.assert_allclose(residual.samples, 0.01, atol=1e-10)

    residual_array = cancel(data_matrix, vector, received)
    assert isinstance(residual_array, np.ndarray)

def test_reconstruct_basis_mismatch(gaussian_pilot, small_basis):
    """Test PH weights cannot be applied to a GLP data matrix"""
    data_matrix = build_measurement_matrix(gaussian_pilot, small_basis)
    vector = WeightVector(weights=np.zeros(small_basis.weight_count), basis=small_basis.with_kind(BasisKind.PH))
    with pytest.raises(DimensionMismatchError):
        reconstruct(data_matrix, vector)

def test_cancel_row_mismatch(gaussian_pilot, small_basis):
    """Test received data must cover the matrix rows"""
    data_matrix = build_measurement_matrix(gaussian_pilot, small_basis)
    vector = WeightVector(weights=np.zeros(small_basis.weight_count), basis=small_basis)
    with pytest.raises(DimensionMismatchError):
        cancel(data_matrix, vector, np.zeros(10, dtype=complex))
