"""
Tests for the Monte-Carlo trial engine
"""

import math

import pytest
import numpy as np

from shared.models.data_models import BasisKind, SourceKind
from src.experiments.simulation import (
    Frontend, PilotPlan, TrialRunner, draw_trial, transmit, run_trials
)
from src.frontend.pa_models import RappTruth

def test_frontend_from_config_splits_drive(desk_config):
    """Test total drive power is shared by the Tx antennas"""
    config = desk_config('mimo_sweep')
    single = Frontend.from_config(config)
    double = Frontend.from_config(config, antennas=2)

    assert isinstance(single.truth, RappTruth)
    assert double.truth.drive_power_mw == pytest.approx(single.truth.drive_power_mw / 2)
    assert math.isinf(single.irr_db)
    assert single.with_irr(30.0).irr_db == 30.0
    assert math.isinf(single.irr_db)

def test_draw_trial_is_reproducible(desk_config):
    """Test a trial regenerates from (seed, trial) alone"""
    config = desk_config('order_sweep')
    first = draw_trial(config, 3, antennas=2, pilot_length=256)
    again = draw_trial(config, 3, antennas=2, pilot_length=256)
    other = draw_trial(config, 4, antennas=2, pilot_length=256)

    assert len(first.channels) == 2 and len(first.channels[0]) == 2
    np.testing.assert_array_equal(first.data[1].samples, again.data[1].samples)
    np.testing.assert_array_equal(first.channels[1][0].taps, again.channels[1][0].taps)
    assert not np.allclose(first.random_pilots[0].samples, other.random_pilots[0].samples)
    assert not np.allclose(first.channels[0][1].taps, first.channels[1][0].taps)

def test_transmit_shapes_and_noise_power(desk_config, polynomial_frontend):
    """Test one column per Rx antenna and rho from the stacked taps"""
    config = desk_config('mimo_sweep')
    frontend = polynomial_frontend(config, antennas=2)
    draw = draw_trial(config, 0, antennas=2, pilot_length=256)
    tx = transmit(frontend, draw, draw.data, SourceKind.DATA)

    rows = config.data_length - config.memory_lh
    assert tx.clean.shape == tx.received.shape == (rows, 2)
    expected = np.mean([
        sum(channel.energy for channel in row) * config.budget.tx_noise_power_mw
        + config.budget.rx_noise_power_mw
        for row in draw.channels
    ])
    assert tx.noise_power_mw == pytest.approx(expected)
    assert tx.rx_power_mw > tx.noise_power_mw

@pytest.mark.parametrize("antennas", [1, 2])
def test_oracle_truncation_vanishes_in_span(desk_config, polynomial_frontend, noiseless_budget, antennas):
    """Test clean SI equals Psi W exactly when the truth order is covered"""
    config = desk_config('mimo_sweep')
    runner = TrialRunner(config, polynomial_frontend(config, antennas, noiseless_budget), 0, 256)
    basis = config.basis(7, BasisKind.GLP)
    plan = PilotPlan('random', per_trial=True)
    oracle = runner.oracle(basis, plan, 'r')

    assert oracle.true_weights.shape == (antennas * basis.weight_count, antennas)
    assert np.linalg.norm(oracle.eps_data) <= 1e-8 * np.linalg.norm(runner.data_tx.clean)
    assert np.linalg.norm(oracle.eps_pilot) <= 1e-8 * np.linalg.norm(runner.pilot_transmission(plan).clean)

def test_oracle_truncation_below_truth_order(desk_config, polynomial_frontend, noiseless_budget):
    """Test dropping orders leaves the missing GLP energy as truncation"""
    config = desk_config('order_sweep')
    runner = TrialRunner(config, polynomial_frontend(config, budget=noiseless_budget), 0, 256)
    oracle = runner.oracle(config.basis(5, BasisKind.GLP), PilotPlan('random', per_trial=True), 'r')
    assert np.linalg.norm(oracle.eps_data) > 1e-6 * np.linalg.norm(runner.data_tx.clean)

def test_evaluate_noiseless_in_span(desk_config, polynomial_frontend, noiseless_budget):
    """Test PH cancellation down to the noise floor when the model is exact"""
    config = desk_config('order_sweep')
    runner = TrialRunner(config, polynomial_frontend(config, budget=noiseless_budget), 1, 256)
    report = runner.evaluate(config.basis(7, BasisKind.PH), PilotPlan('random_gaussian', per_trial=True), 7)

    assert report.run_id == f"{config.master_seed}:1:random_gaussian:7"
    assert report.has_components
    assert report.cancellation_db > 120.0
    assert report.analytic_expected_dbm <= report.bound_dbm + 1e-9

def test_evaluate_ledger_tracks_measured_rsi(desk_config, polynomial_frontend):
    """Test measured RSI sits near the conditional expectation at the operating point"""
    config = desk_config('order_sweep')
    runner = TrialRunner(config, polynomial_frontend(config), 2, 256)
    report = runner.evaluate(config.basis(7, BasisKind.PH), PilotPlan('random_gaussian', per_trial=True), 7)
    assert report.rsi_dbm == pytest.approx(report.analytic_expected_dbm, abs=1.5)

def test_evaluate_global_ls(desk_config, polynomial_frontend):
    """Test in-sample estimation on the data block"""
    config = desk_config('order_sweep')
    runner = TrialRunner(config, polynomial_frontend(config), 0, 256)
    report = runner.evaluate(config.basis(7, BasisKind.PH), PilotPlan('global_ls'), 7)

    # In-sample fit absorbs L_w noise dimensions
    assert report.analytic_expected_dbm < report.noise_dbm
    assert report.rsi_dbm == pytest.approx(report.noise_dbm, abs=1.0)
    assert report.bound_dbm >= report.analytic_expected_dbm

def test_evaluate_rank_deficient_returns_none(desk_config, polynomial_frontend):
    """Test too-short pilots are skipped, not fatal"""
    config = desk_config('order_sweep', pilot_length=8)
    runner = TrialRunner(config, polynomial_frontend(config), 0, 8)
    assert runner.evaluate(config.basis(7, BasisKind.PH), PilotPlan('random', per_trial=True), 7) is None

def test_evaluate_with_iq_imbalance_reports_measured_only(desk_config, polynomial_frontend):
    """Test finite IRR switches to the oracle-free report"""
    config = desk_config('iq_sweep')
    frontend = polynomial_frontend(config).with_irr(30.0)
    runner = TrialRunner(config, frontend, 0, 256)
    report = runner.evaluate(config.basis(3, BasisKind.PH_IQ), PilotPlan('ph_iq', per_trial=True), 30.0)

    assert not report.has_components
    assert math.isnan(report.truncation_dbm)
    assert math.isfinite(report.rsi_dbm)

def test_pilot_transmission_is_cached(desk_config, polynomial_frontend):
    """Test one pilot transmission per pilot sequence set"""
    config = desk_config('order_sweep')
    runner = TrialRunner(config, polynomial_frontend(config), 0, 256)
    plan = PilotPlan('random_gaussian', per_trial=True)
    assert runner.pilot_transmission(plan) is runner.pilot_transmission(plan)
    assert runner.pilot_transmission(PilotPlan('global_ls')) is runner.data_tx

def test_run_trials_keeps_order():
    """Test threaded trials come back in index order"""
    assert run_trials(lambda trial: trial * trial, 6, workers=3) == [0, 1, 4, 9, 16, 25]
    assert run_trials(lambda trial: trial, 3, workers=1) == [0, 1, 2]
