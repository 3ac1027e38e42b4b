"""
Complex baseband sequence generation and statistics

Pilots and data are produced at unit average power (x * sqrt(L) / ||x||);
the Tx drive level is applied later by the frontend.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from shared.config.constants import SIGNAL_CONFIG
from shared.models.data_models import ComplexSequence, PilotDistribution, SequenceStats
from shared.utils.error_handling import (
    EmptySequenceError, InvalidConfigurationError, validate_sequence_length
)
from shared.utils.rng import make_rng
from shared.utils.units import linear_to_db

# Trials per vectorised block in papr_statistics
_PAPR_BLOCK = 1000


@dataclass
class PaprStatistics:
    """Monte-Carlo peak/PAPR summary over many independent draws"""
    length: int
    trials: int
    mean_peak_power: float
    peak_power_variance: float
    mean_papr_db: float
    median_papr_db: float


def normalize(seq: ComplexSequence) -> ComplexSequence:
    """Scale to unit average power"""
    energy = float(np.vdot(seq.samples, seq.samples).real)
    if seq.length == 0 or energy <= 0.0:
        raise EmptySequenceError()
    samples = seq.samples * np.sqrt(seq.length / energy)
    return ComplexSequence(samples, nominal_power=1.0)


def _finish(samples: np.ndarray, normalize_power: bool) -> ComplexSequence:
    seq = ComplexSequence(samples)
    return normalize(seq) if normalize_power else seq


def gen_gaussian_sequence(length: int, seed: int, normalize: bool = True) -> ComplexSequence:
    """i.i.d. CN(0, 1) samples"""
    validate_sequence_length(length)
    rng = make_rng(seed)
    samples = (rng.standard_normal(length) + 1j * rng.standard_normal(length)) / np.sqrt(2.0)
    return _finish(samples, normalize)


def gen_chisq_amplitude_sequence(length: int, seed: int, normalize: bool = True) -> ComplexSequence:
    """Uniform phase with amplitude pdf a*exp(-a/2)/4 (Gamma, shape 2, scale 2)"""
    validate_sequence_length(length)
    rng = make_rng(seed)
    amplitude = rng.gamma(shape=2.0, scale=2.0, size=length)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=length)
    return _finish(amplitude * np.exp(1j * phase), normalize)


def gen_multitone_pilot(length: int, num_tones: int, seed: int) -> ComplexSequence:
    """Equal-magnitude tones with Newman phases pi*(k-1)^2/K.

    The seed only picks the frequency offset of the tone block, which leaves
    the envelope (and hence the PAPR) unchanged.
    """
    validate_sequence_length(length)
    if num_tones < 1 or num_tones > length:
        raise InvalidConfigurationError(
            f"num_tones must lie in [1, {length}], got {num_tones}.", "num_tones"
        )
    rng = make_rng(seed)
    offset = int(rng.integers(0, length - num_tones + 1))
    k = np.arange(num_tones)
    spectrum = np.zeros(length, dtype=np.complex128)
    spectrum[offset + k] = np.exp(1j * np.pi * k ** 2 / num_tones)
    samples = np.fft.ifft(spectrum) * length
    return normalize(ComplexSequence(samples))


def gen_ofdm_like_sequence(num_symbols: int, symbol_length: int, seed: int,
                           occupied_fraction: float = SIGNAL_CONFIG['ofdm_occupied_fraction']) -> ComplexSequence:
    """Concatenated OFDM-like symbols: Gaussian values on the centred occupied subcarriers"""
    validate_sequence_length(num_symbols, field="num_symbols")
    validate_sequence_length(symbol_length, field="symbol_length")
    if not 0.0 < occupied_fraction <= 1.0:
        raise InvalidConfigurationError(
            f"occupied_fraction must lie in (0, 1], got {occupied_fraction}.", "occupied_fraction"
        )
    occupied = max(1, int(round(occupied_fraction * symbol_length)))
    rng = make_rng(seed)

    carriers = np.arange(occupied) - occupied // 2
    bins = np.mod(carriers, symbol_length)
    spectrum = np.zeros((num_symbols, symbol_length), dtype=np.complex128)
    values = rng.standard_normal((num_symbols, occupied)) + 1j * rng.standard_normal((num_symbols, occupied))
    spectrum[:, bins] = values / np.sqrt(2.0)
    symbols = np.fft.ifft(spectrum, axis=1) * symbol_length / np.sqrt(occupied)
    return normalize(ComplexSequence(symbols.ravel()))


def generate_pilot(distribution: PilotDistribution, length: int, seed: int) -> ComplexSequence:
    """Dispatch to the generator for a pilot distribution"""
    distribution = PilotDistribution(distribution)
    if distribution is PilotDistribution.GAUSSIAN:
        return gen_gaussian_sequence(length, seed)
    if distribution is PilotDistribution.CHISQ:
        return gen_chisq_amplitude_sequence(length, seed)
    num_tones = max(1, int(round(SIGNAL_CONFIG['multitone_occupancy'] * length)))
    return gen_multitone_pilot(length, num_tones, seed)


def stats(seq: ComplexSequence) -> SequenceStats:
    """Peak power, mean power and PAPR"""
    if seq.length == 0:
        raise EmptySequenceError()
    power = np.abs(seq.samples) ** 2
    mean_power = float(np.mean(power))
    if mean_power <= 0.0:
        raise EmptySequenceError("Sequence is all zeros; PAPR is undefined.")
    peak_power = float(np.max(power))
    return SequenceStats(
        papr_db=float(linear_to_db(peak_power / mean_power)),
        peak_power=peak_power,
        mean_power=mean_power,
        length=seq.length
    )


def extreme_value_moments(length: int) -> Tuple[float, float]:
    """Mean and variance of max |x_n|^2 over `length` i.i.d. CN(0, 1) samples"""
    validate_sequence_length(length)
    n = np.arange(1, length + 1, dtype=float)
    return float(np.sum(1.0 / n)), float(np.sum(1.0 / n ** 2))


def papr_statistics(length: int, trials: int, seed: int,
                    distribution: PilotDistribution = PilotDistribution.GAUSSIAN) -> PaprStatistics:
    """Peak power (raw draws) and PAPR statistics over independent sequences"""
    validate_sequence_length(length)
    validate_sequence_length(trials, field="trials")
    distribution = PilotDistribution(distribution)
    if distribution is PilotDistribution.MULTITONE:
        raise InvalidConfigurationError("Multitone pilots are deterministic in PAPR.", "distribution")

    rng = make_rng(seed)
    peaks, paprs = [], []
    remaining = trials
    while remaining > 0:
        block = min(_PAPR_BLOCK, remaining)
        if distribution is PilotDistribution.GAUSSIAN:
            draws = (rng.standard_normal((block, length)) + 1j * rng.standard_normal((block, length))) / np.sqrt(2.0)
            power = np.abs(draws) ** 2
        else:
            power = rng.gamma(shape=2.0, scale=2.0, size=(block, length)) ** 2
        peak = power.max(axis=1)
        peaks.append(peak)
        paprs.append(linear_to_db(peak / power.mean(axis=1)))
        remaining -= block

    peaks = np.concatenate(peaks)
    paprs = np.concatenate(paprs)
    return PaprStatistics(
        length=length,
        trials=trials,
        mean_peak_power=float(np.mean(peaks)),
        peak_power_variance=float(np.var(peaks, ddof=1)) if trials > 1 else 0.0,
        mean_papr_db=float(np.mean(paprs)),
        median_papr_db=float(np.median(paprs))
    )
