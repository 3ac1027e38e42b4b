"""
Noise injection, I/Q imbalance and the D-SIC cancellation cap
"""

import math
from enum import Enum
from typing import Tuple

import numpy as np

from shared.models.data_models import ComplexSequence, LinkBudget
from shared.utils.error_handling import ValidationError
from shared.utils.rng import make_rng
from shared.utils.units import db_to_linear


class NoiseStage(Enum):
    TX = "tx"
    RX = "rx"


def add_noise(seq: ComplexSequence, budget: LinkBudget, stage: NoiseStage, seed: int) -> ComplexSequence:
    """Add white circular Gaussian noise at the Tx (z_t) or Rx (z_r) power"""
    stage = NoiseStage(stage)
    power = budget.tx_noise_power_mw if stage is NoiseStage.TX else budget.rx_noise_power_mw
    if power <= 0.0 or seq.length == 0:
        return ComplexSequence(seq.samples.copy())
    rng = make_rng(seed)
    noise = (rng.standard_normal(seq.length) + 1j * rng.standard_normal(seq.length)) * math.sqrt(power / 2.0)
    return ComplexSequence(seq.samples + noise)


def iq_gains(irr_db: float) -> Tuple[float, float]:
    """(g1, g2) with g1^2/g2^2 = IRR and g1^2 + g2^2 = 1"""
    if math.isnan(irr_db) or irr_db <= 0:
        raise ValidationError(f"irr_db must be > 0, got {irr_db}.", "irr_db")
    if math.isinf(irr_db):
        return 1.0, 0.0
    ratio = float(db_to_linear(irr_db))
    return math.sqrt(ratio / (1.0 + ratio)), math.sqrt(1.0 / (1.0 + ratio))


def apply_iq_imbalance(seq: ComplexSequence, irr_db: float) -> ComplexSequence:
    """y = g1 x + g2 x*"""
    g1, g2 = iq_gains(irr_db)
    return ComplexSequence(g1 * seq.samples + g2 * np.conj(seq.samples))


def adc_dynamic_range_db(bits: int) -> float:
    """6.02 b + 1.76"""
    if bits < 1:
        raise ValidationError(f"adc_bits must be >= 1, got {bits}.", "adc_bits")
    return 6.02 * bits + 1.76


def dsic_upper_bound(rho_r_dbm: float, rho_e_dbm: float, adc_bits: int, papr_db: float) -> float:
    """Achievable D-SIC in dB: the smaller of the SI-to-RSI ratio and the ADC headroom"""
    return min(rho_r_dbm - rho_e_dbm, adc_dynamic_range_db(adc_bits) - papr_db)
