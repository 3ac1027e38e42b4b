"""
Tests for the bound-check rows
"""

import math

import pytest

from shared.config.constants import CSV_HEADERS
from src.experiments.verification import (
    inequality_row, tolerance_row, noise_match_rows, run_bound_check
)

CHECK_NAMES = {
    'noise_match', 'glp_equivalence', 'transform_identity', 'rsi_bound_ordering', 'bire_rayleigh',
    'nire_lower', 'nire_upper', 'trace_inverse_lower', 'trace_inverse_upper', 'bias_trend'
}

def test_inequality_row_passes_within_round_off():
    """Test value may exceed the bound by a relative 1e-9"""
    assert inequality_row('x', 0, 1.0, 2.0)['passed']
    assert inequality_row('x', 0, 1.0 + 1e-12, 1.0)['passed']
    row = inequality_row('x', 1, 3.0, 2.0)
    assert not row['passed']
    assert row['margin'] == pytest.approx(-1.0 / 3.0)

def test_inequality_row_infinite_bound():
    """Test an infinite bound always holds"""
    row = inequality_row('x', 0, 5.0, math.inf)
    assert row['passed'] and math.isinf(row['margin'])

def test_tolerance_row():
    """Test relative error against a fixed tolerance"""
    assert tolerance_row('x', 0, 0.01, 0.05)['passed']
    assert not tolerance_row('x', 0, 0.06, 0.05)['passed']
    assert set(tolerance_row('x', 0, 0.0, 1.0)) == set(CSV_HEADERS['checks'])

def test_noise_match_row(desk_config):
    """Test Monte-Carlo residual energy matches the closed form"""
    config = desk_config('bound_check')
    rows = noise_match_rows(config, 0)
    assert len(rows) == 1
    assert rows[0]['check'] == 'noise_match'
    assert rows[0]['passed']

@pytest.mark.slow
def test_run_bound_check_passes(desk_config):
    """Test every verification row holds on the fast profile"""
    config = desk_config('bound_check')
    table, reports = run_bound_check(config)

    assert table.columns == CSV_HEADERS['checks']
    assert {row['check'] for row in table.rows} == CHECK_NAMES
    assert table.failed_checks() == []
    assert table.passed
    assert len(table.filter(check='noise_match')) == config.mc_instances
    assert len(table.filter(check='bias_trend')) == len(config.bias_lengths) - 1
    assert len(reports) == config.trials
