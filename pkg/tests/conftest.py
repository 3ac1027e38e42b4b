"""
Pytest configuration and fixtures for D-SIC simulator tests
"""

import pytest
import os
import tempfile

# Set test environment before any shared module reads it
os.environ['ENVIRONMENT'] = 'test'
os.environ['DSIC_LOG_LEVEL'] = 'WARNING'
os.environ['DSIC_WORKERS'] = '1'

import numpy as np  # noqa: E402

from shared.models.data_models import BasisConfig, ExperimentConfig  # noqa: E402
from src.signals.sequences import gen_gaussian_sequence  # noqa: E402

# Small but feasible sweep settings (L_h = 2, N_s = 128)
FAST_OVERRIDES = {
    'trials': 6,
    'memory_lh': 2,
    'symbol_length': 128,
    'data_symbols': 2,
    'orders': [1, 3, 5, 7],
    'compare_order': 5,
    'pilot_length': 256,
    'ensemble_size': 8,
    'pilot_multiples': [1.0, 2.0, 4.0],
    'antennas': [1, 2],
    'irr_db': [20.0, 40.0, 60.0],
    'iq_order': 3,
    'iq_pilot_multiple': 2.0,
    'noise_realizations': 50,
    'mc_instances': 2,
    'bias_seeds': 5,
    'bias_lengths': [512, 2048, 8192],
    'drive_offsets_db': [0.0, 6.0],
    'calibration_trials': 4
}


@pytest.fixture
def rng():
    """Seeded numpy generator"""
    return np.random.default_rng(1234)


@pytest.fixture
def gaussian_pilot():
    """Unit-power Gaussian pilot of 512 samples"""
    return gen_gaussian_sequence(512, seed=11)


@pytest.fixture
def small_basis():
    """P = 5, L_h = 2 GLP basis (9 weights)"""
    return BasisConfig(order_p=5, memory_lh=2)


@pytest.fixture
def temp_directory():
    """Temporary directory for testing"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir


@pytest.fixture
def desk_config():
    """Factory for fast desk-profile experiment configs"""
    def make(experiment, **overrides):
        values = dict(FAST_OVERRIDES)
        values.update(overrides)
        return ExperimentConfig.from_profile(experiment, 'desk', **values)
    return make
