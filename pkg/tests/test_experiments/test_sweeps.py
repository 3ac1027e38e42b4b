"""
Tests for sweep aggregation and the sweep runners
"""

import math

import pytest
import numpy as np

from shared.models.data_models import BasisKind, ExperimentConfig, ResultTable
from shared.config.constants import CSV_HEADERS, DRIVE_CALIBRATION
from shared.utils.error_handling import ConfigError
from src.experiments import sweeps
from src.experiments.simulation import PilotPlan
from src.experiments.sweeps import (
    PILOT_SERIES, SweepGroup, SweepPoint, median_iqr, summarize, mark_optimal_order, run_sweep,
    run_order_sweep, run_pilot_compare, run_pilot_length_sweep, run_mimo_sweep, run_iq_sweep,
    pilot_length_for, chisq_dip_db, calibrate_drive
)
from src.canceller.rsi import measured_report


def test_median_iqr_ignores_nan():
    """Test NaN entries are dropped before the percentiles"""
    median, iqr = median_iqr([1.0, 2.0, 3.0, 4.0, 5.0, math.nan])
    assert median == 3.0
    assert iqr == pytest.approx(2.0)

def test_median_iqr_all_nan():
    """Test empty input gives NaN"""
    median, iqr = median_iqr([math.nan])
    assert math.isnan(median) and math.isnan(iqr)

def test_summarize_columns():
    """Test every aggregated column is filled"""
    reports = [measured_report(np.full(10, 0.01 * k), 1e-9, 1.0) for k in (1, 2, 3)]
    row = summarize(reports)
    assert row['rsi_dbm'] == pytest.approx(-34.0, abs=0.1)
    assert math.isnan(row['bire_dbm'])
    assert set(row) <= set(CSV_HEADERS['sweep'])

def test_mark_optimal_order_per_series():
    """Test argmin of the median excess within each series"""
    table = ResultTable(experiment='x', columns=list(CSV_HEADERS['sweep']))
    for series, values in (('a', [-80, -90, -85]), ('b', [math.nan, -70, -75])):
        for order, value in zip((1, 3, 5), values):
            table.add_row(series=series, sweep_variable=float(order), rsi_excess_dbm=value)
    table.add_row(series='c', sweep_variable=1.0)
    mark_optimal_order(table)

    assert {row['optimal_order'] for row in table.filter(series='a')} == {3}
    assert {row['optimal_order'] for row in table.filter(series='b')} == {5}
    assert math.isnan(table.filter(series='c')[0]['optimal_order'])

@pytest.mark.slow
def test_excess_is_u_shaped_in_order(desk_config, polynomial_frontend):
    """Test truncation dominates at low order and NIRE past the truth order"""
    config = desk_config('order_sweep', orders=[1, 3, 5, 7, 9, 11])
    groups = {0: SweepGroup(polynomial_frontend(config), config.pilot_length)}
    points = [
        SweepPoint('random_gaussian', float(p), config.basis(p, BasisKind.PH),
                   PilotPlan('random_gaussian', per_trial=True))
        for p in config.orders
    ]
    table, reports = run_sweep(config, groups, points)
    mark_optimal_order(table)

    excess = table.column('rsi_excess_dbm')
    assert table.rows[0]['optimal_order'] == 7
    assert excess[0] > excess[3] + 10.0
    assert excess[5] > excess[3]
    assert len(reports) == config.trials * len(config.orders)

def test_run_order_sweep_table(desk_config):
    """Test one row per (pilot kind, order) with the optimum marked"""
    config = desk_config('order_sweep')
    table, reports = run_order_sweep(config)

    assert table.columns == CSV_HEADERS['sweep']
    assert table.series_names() == list(PILOT_SERIES)
    assert len(table.rows) == len(PILOT_SERIES) * len(config.orders)
    assert all(row['trials'] == config.trials for row in table.rows)
    for series in PILOT_SERIES:
        optimum = table.filter(series=series)[0]['optimal_order']
        assert optimum in config.orders

    assert math.isnan(table.filter(series='global_ls')[0]['criterion_value'])
    assert math.isnan(table.filter(series='random_gaussian')[0]['criterion_value'])
    assert table.filter(series='optimized_gaussian')[0]['criterion_value'] > 0.0
    assert len({r.run_id for r in reports}) == len(reports)

def test_run_order_sweep_reproducible(desk_config):
    """Test the same seed reproduces the table"""
    config = desk_config('order_sweep', trials=2, orders=[1, 3])
    first, _ = run_order_sweep(config)
    again, _ = run_order_sweep(config)
    np.testing.assert_array_equal(first.column('rsi_dbm'), again.column('rsi_dbm'))

def test_run_order_sweep_rejects_short_pilot(desk_config):
    """Test the pilot must cover the largest order"""
    config = desk_config('order_sweep', pilot_length=10)
    with pytest.raises(ConfigError) as exc_info:
        run_order_sweep(config)
    assert exc_info.value.key == 'pilot_length'

def test_run_pilot_compare(desk_config):
    """Test every pilot kind at the comparison order"""
    config = desk_config('pilot_compare')
    table, _ = run_pilot_compare(config)

    assert [row['series'] for row in table.rows] == list(PILOT_SERIES)
    assert {row['sweep_variable'] for row in table.rows} == {float(config.compare_order)}
    for row in table.rows:
        assert row['rsi_dbm'] > row['noise_dbm'] - 1.0

def test_run_pilot_length_sweep(desk_config):
    """Test optimized Gaussian and chi-square pilots per length multiple"""
    config = desk_config('pilot_length_sweep')
    table, _ = run_pilot_length_sweep(config)

    assert table.series_names() == ['gaussian', 'chisq']
    for series in ('gaussian', 'chisq'):
        rows = table.filter(series=series)
        assert [row['sweep_variable'] for row in rows] == config.pilot_multiples
        criterion = [row['criterion_value'] for row in rows]
        assert all(b > a for a, b in zip(criterion, criterion[1:]))
    gaussian = table.column('nire_dbm', series='gaussian')
    assert gaussian[-1] < gaussian[0]

def test_pilot_length_for():
    """Test multiples of the symbol length"""
    class Config:
        symbol_length = 1280
    assert pilot_length_for(Config(), 2.5) == 3200

def test_run_mimo_sweep_marks_infeasible_points(desk_config):
    """Test points with too few pilot rows report zero trials"""
    config = desk_config('mimo_sweep', antennas=[1, 4], orders=[1, 5, 7], pilot_length=40, trials=3)
    table, _ = run_mimo_sweep(config)

    assert table.series_names() == ['M=1', 'M=4']
    infeasible = table.filter(series='M=4', sweep_variable=7.0)[0]
    assert infeasible['trials'] == 0
    assert math.isnan(infeasible['rsi_dbm'])
    assert table.filter(series='M=4', sweep_variable=5.0)[0]['trials'] == 3
    assert table.filter(series='M=1')[0]['optimal_order'] in (1, 5, 7)

def test_run_mimo_sweep_runs_every_antenna_count(desk_config):
    """Test per-antenna rows carry the full ledger"""
    config = desk_config('mimo_sweep', trials=3, orders=[3, 5])
    table, reports = run_mimo_sweep(config)

    assert len(table.rows) == len(config.antennas) * len(config.orders)
    assert all(row['trials'] == 3 for row in table.rows)
    assert all(not math.isnan(row['bire_dbm']) for row in table.rows)
    assert len({r.run_id for r in reports}) == len(reports)

def test_run_iq_sweep(desk_config):
    """Test the widely-linear canceller wins at poor IRR and matches PH at high IRR"""
    config = desk_config('iq_sweep', truth_model='polynomial', truth_order=3, trials=4)
    table, _ = run_iq_sweep(config)

    assert table.series_names() == ['ph', 'ph_iq']
    ph = table.column('rsi_dbm', series='ph')
    ph_iq = table.column('rsi_dbm', series='ph_iq')
    assert ph_iq[0] < ph[0] - 3.0
    assert ph[0] > ph[-1]
    assert abs(ph[-1] - ph_iq[-1]) < 1.0
    assert all(math.isnan(row['truncation_dbm']) for row in table.rows)

def test_run_sweep_first_trial_offsets_draws(desk_config, polynomial_frontend):
    """Test shifted trial indices give new draws and new run ids"""
    config = desk_config('order_sweep', trials=2)
    groups = {0: SweepGroup(polynomial_frontend(config), config.pilot_length)}
    points = [SweepPoint('random_gaussian', 3.0, config.basis(3, BasisKind.PH),
                         PilotPlan('random_gaussian', per_trial=True))]
    _, first = run_sweep(config, groups, points)
    _, shifted = run_sweep(config, groups, points, first_trial=500)

    assert [r.run_id.split(':')[1] for r in shifted] == ['500', '501']
    assert first[0].rsi_dbm != shifted[0].rsi_dbm

def test_chisq_dip_db():
    """Test the dip is the smaller of the initial fall and the final rise"""
    assert chisq_dip_db([-80.0, -81.0, -82.0], [-80.0, -81.0, -80.5]) == pytest.approx(0.5)
    assert chisq_dip_db([-80.0, -81.0, -82.0], [-80.0, -81.0, -82.0]) == 0.0
    assert chisq_dip_db([-80.0, -81.0, -82.0], [-81.0, -80.0, -79.0]) < 0.0

def test_chisq_dip_db_rejects_rising_gaussian():
    """Test a rising Gaussian curve, missing values and too few lengths"""
    assert chisq_dip_db([-80.0, -79.0, -82.0], [-80.0, -81.0, -80.0]) == -math.inf
    assert chisq_dip_db([-80.0, -81.0, math.nan], [-80.0, -81.0, -80.0]) == -math.inf
    assert chisq_dip_db([-80.0, -81.0], [-80.0, -81.0]) == -math.inf
    assert chisq_dip_db([-80.0, -80.01, -80.0], [-80.0, -81.0, -80.0], rise_tolerance_db=0.02) == 1.0

def _dip_table(dip):
    table = ResultTable(experiment='pilot_length_sweep', columns=list(CSV_HEADERS['sweep']))
    for multiple, gaussian in zip((1.0, 2.0, 4.0), (-80.0, -81.0, -82.0)):
        table.add_row(series='gaussian', sweep_variable=multiple, rsi_dbm=gaussian)
    for multiple, chisq in zip((1.0, 2.0, 4.0), (-80.0, -80.0 - dip, -80.0)):
        table.add_row(series='chisq', sweep_variable=multiple, rsi_dbm=chisq)
    return table

def test_calibrate_drive_picks_deepest_dip(desk_config, monkeypatch):
    """Test the offset with the deepest chi-square dip sets the Tx power"""
    config = desk_config('pilot_length_sweep', drive_offsets_db=[0.0, 3.0, 6.0])
    base = config.budget.tx_power_dbm
    depth = {0.0: 0.0, 3.0: 1.5, 6.0: 0.5}
    seen = []

    def fake_run_sweep(driven, groups, points, workers=1, first_trial=0):
        seen.append((driven.trials, first_trial))
        return _dip_table(depth[driven.budget.tx_power_dbm - base]), []

    monkeypatch.setattr(sweeps, 'run_sweep', fake_run_sweep)
    assert calibrate_drive(config, []) == pytest.approx(base + 3.0)
    assert seen == [(config.calibration_trials, DRIVE_CALIBRATION['first_trial'])] * 3

def test_calibrate_drive_falls_back_to_first_offset(desk_config, monkeypatch):
    """Test no visible dip keeps the first offset"""
    config = desk_config('pilot_length_sweep', drive_offsets_db=[1.0, 4.0])
    monkeypatch.setattr(sweeps, 'run_sweep', lambda *args, **kwargs: (_dip_table(0.0), []))
    assert calibrate_drive(config, []) == pytest.approx(config.budget.tx_power_dbm + 1.0)

def test_calibrate_drive_single_offset_skips_search(desk_config, monkeypatch):
    """Test a one-entry grid fixes the drive without running trials"""
    config = desk_config('pilot_length_sweep', drive_offsets_db=[2.0])

    def fail(*args, **kwargs):
        raise AssertionError("calibration trials should not run")

    monkeypatch.setattr(sweeps, 'run_sweep', fail)
    assert calibrate_drive(config, []) == pytest.approx(config.budget.tx_power_dbm + 2.0)

def test_mimo_single_antenna_matches_siso_order_sweep(desk_config):
    """Test M = 1 reproduces the random Gaussian order sweep exactly"""
    config = desk_config('mimo_sweep', antennas=[1], orders=[1, 3, 5], trials=3)
    mimo, _ = run_mimo_sweep(config)
    siso, _ = run_order_sweep(config)

    for column in ('rsi_dbm', 'truncation_dbm', 'bire_dbm', 'nire_dbm', 'noise_dbm'):
        np.testing.assert_array_equal(mimo.column(column, series='M=1'),
                                      siso.column(column, series='random_gaussian'))

def test_mimo_truncation_falls_with_antenna_count(desk_config):
    """Test splitting the Tx power over more PAs lowers the truncation error"""
    config = desk_config('mimo_sweep', antennas=[1, 2, 4], orders=[3, 5], trials=4)
    table, _ = run_mimo_sweep(config)

    for order_p in config.orders:
        truncation = [table.filter(series=f"M={m}", sweep_variable=float(order_p))[0]['truncation_dbm']
                      for m in config.antennas]
        assert all(b < a for a, b in zip(truncation, truncation[1:]))

@pytest.mark.slow
def test_chisq_pilot_length_trade_off_at_desk_scale():
    """Test chi-square RSI falls then rises with pilot length while Gaussian keeps falling"""
    config = ExperimentConfig.from_profile('pilot_length_sweep', 'desk')
    table, _ = run_pilot_length_sweep(config)

    chisq = table.column('rsi_dbm', series='chisq')
    gaussian = table.column('rsi_dbm', series='gaussian')
    assert chisq[1] < chisq[0]
    assert chisq[-1] > min(chisq)
    assert all(b <= a + 0.05 for a, b in zip(gaussian, gaussian[1:]))
    for series in ('gaussian', 'chisq'):
        nire = table.column('nire_dbm', series=series)
        assert nire[-1] < nire[0]

@pytest.mark.slow
def test_pilot_kinds_at_desk_scale():
    """Test the optimized pilot beats random, clears multitone and sits near global LS"""
    config = ExperimentConfig.from_profile('pilot_compare', 'desk', trials=60)
    table, _ = run_pilot_compare(config)
    rsi = {row['series']: row['rsi_dbm'] for row in table.rows}

    assert rsi['optimized_gaussian'] < rsi['random_gaussian']
    assert rsi['optimized_gaussian'] <= rsi['multitone'] - 3.0
    assert abs(rsi['optimized_gaussian'] - rsi['global_ls']) < 3.0

@pytest.mark.slow
def test_order_sweep_trends_under_rapp_truth():
    """Test NIRE rises and truncation falls with order, and the pilot ranking at high order"""
    config = ExperimentConfig.from_profile('order_sweep', 'desk', trials=60)
    table, _ = run_order_sweep(config)
    rsi = {series: table.column('rsi_dbm', series=series) for series in PILOT_SERIES}

    for series in PILOT_SERIES:
        nire = table.column('nire_dbm', series=series)
        truncation = table.column('truncation_dbm', series=series)
        assert all(b > a for a, b in zip(nire, nire[1:]))
        assert all(b < a for a, b in zip(truncation, truncation[1:]))
    for index, order_p in enumerate(config.orders):
        assert all(rsi['global_ls'][index] <= rsi[series][index] for series in PILOT_SERIES)
        if order_p >= 7:
            assert rsi['optimized_gaussian'][index] <= rsi['random_gaussian'][index]
            assert rsi['random_gaussian'][index] <= rsi['multitone'][index]

@pytest.mark.slow
def test_iq_sweep_crossover_under_rapp_truth():
    """Test PH+IQ wins at poor IRR, loses at high IRR and stays flat across IRR"""
    config = ExperimentConfig.from_profile('iq_sweep', 'desk', trials=40)
    table, _ = run_iq_sweep(config)
    ph = table.column('rsi_dbm', series='ph')
    ph_iq = table.column('rsi_dbm', series='ph_iq')

    assert ph_iq[0] < ph[0]
    assert ph[-1] < ph_iq[-1]
    assert max(ph_iq) - min(ph_iq) < 1.0

@pytest.mark.slow
def test_mimo_optimal_order_falls_with_antenna_count():
    """Test more Tx antennas move the optimal order down at a fixed pilot length"""
    config = ExperimentConfig.from_profile('mimo_sweep', 'desk', trials=60)
    table, _ = run_mimo_sweep(config)
    optimum = {m: table.filter(series=f"M={m}")[0]['optimal_order'] for m in config.antennas}

    assert optimum[1] >= optimum[2]
    assert optimum[2] > optimum[4]
