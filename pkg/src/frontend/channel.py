"""
SI channel after analog cancellation
"""

import numpy as np

from shared.config.constants import ASIC_CONFIG
from shared.models.data_models import ChannelModel, ComplexSequence, LinkBudget
from shared.utils.error_handling import InvalidConfigurationError, validate_positive
from shared.utils.rng import make_rng
from shared.utils.units import db_to_linear


def convolve_valid(samples: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """sum_l taps[l] x(n - l) for n = L_h .. L-1"""
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.size < taps.size:
        raise InvalidConfigurationError(
            f"Sequence of length {samples.size} is shorter than the {taps.size} channel taps.", "length"
        )
    return np.convolve(samples, taps, mode='valid')


def apply_channel(seq: ComplexSequence, ch: ChannelModel) -> ComplexSequence:
    """Linear convolution restricted to the valid region"""
    return ComplexSequence(convolve_valid(seq.samples, ch.taps))


def gen_channel(memory_lh: int, delay_spread_taps: float, asic_db: float,
                rx_distance_gain_db: float, seed: int) -> ChannelModel:
    """Exponential power-delay profile, then A-SIC suppression concentrated on short delays.

    The raw channel carries 10^(rx_distance_gain_db/10) of energy; the residual
    after A-SIC carries exactly asic_db less.
    """
    if memory_lh < 0:
        raise InvalidConfigurationError(f"memory_lh must be >= 0, got {memory_lh}.", "memory_lh")
    validate_positive(delay_spread_taps, "delay_spread_taps")
    validate_positive(asic_db, "asic_db", allow_zero=True)

    rng = make_rng(seed)
    delays = np.arange(memory_lh + 1)
    profile = np.exp(-delays / delay_spread_taps)
    raw = (rng.standard_normal(delays.size) + 1j * rng.standard_normal(delays.size)) * np.sqrt(profile / 2.0)
    raw_energy = float(db_to_linear(rx_distance_gain_db))
    raw *= np.sqrt(raw_energy / np.sum(np.abs(raw) ** 2))

    suppression_db = np.where(
        delays <= ASIC_CONFIG['short_delay_taps'],
        asic_db,
        np.maximum(asic_db - ASIC_CONFIG['long_delay_relief_db'], 0.0)
    )
    residual = raw * np.sqrt(db_to_linear(-suppression_db))
    target = raw_energy * float(db_to_linear(-asic_db))
    residual *= np.sqrt(target / np.sum(np.abs(residual) ** 2))
    return ChannelModel(taps=residual, asic_suppression_db=asic_db)


def rms_delay_spread(ch: ChannelModel) -> float:
    """Power-weighted RMS delay in taps"""
    power = np.abs(ch.taps) ** 2
    weights = power / np.sum(power)
    delays = np.arange(ch.taps.size)
    mean_delay = float(np.sum(weights * delays))
    return float(np.sqrt(max(np.sum(weights * delays ** 2) - mean_delay ** 2, 0.0)))


def equivalent_rx_noise_power(ch: ChannelModel, budget: LinkBudget) -> float:
    """Tx noise through the channel plus the Rx floor, in mW"""
    return ch.energy * budget.tx_noise_power_mw + budget.rx_noise_power_mw
