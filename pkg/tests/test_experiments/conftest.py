"""
Fixtures for the experiment tests
"""

import math

import pytest
import numpy as np

from shared.models.data_models import LinkBudget
from src.experiments.simulation import Frontend
from src.frontend.pa_models import PolynomialTruth

# GLP coefficients at unit input power; order 7 in total
GLP_TRUTH = np.array([14.0, 0.3 - 0.1j, 0.1j, 0.05])


@pytest.fixture
def noiseless_budget():
    """Ideal Tx and a receiver floor far below the SI"""
    return LinkBudget(tx_snr_db=math.inf, rx_noise_dbm=-200.0)


@pytest.fixture
def polynomial_frontend():
    """Factory for frontends whose truth lies exactly in the order-7 GLP span"""
    def make(config, antennas=1, budget=None, glp=GLP_TRUTH):
        return Frontend(
            truth=PolynomialTruth.from_glp(glp, 0.2),
            budget=budget or config.budget,
            antennas=antennas,
            memory_lh=config.memory_lh,
            asic_db=config.asic_db,
            isolation_gain_db=config.isolation_gain_db,
            delay_spread_taps=config.delay_spread_taps
        )
    return make
