"""
Pilot and data sequence generators
"""

from .sequences import (
    PaprStatistics,
    normalize,
    gen_gaussian_sequence,
    gen_chisq_amplitude_sequence,
    gen_multitone_pilot,
    gen_ofdm_like_sequence,
    generate_pilot,
    stats,
    extreme_value_moments,
    papr_statistics
)

__all__ = [
    "PaprStatistics",
    "normalize",
    "gen_gaussian_sequence",
    "gen_chisq_amplitude_sequence",
    "gen_multitone_pilot",
    "gen_ofdm_like_sequence",
    "generate_pilot",
    "stats",
    "extreme_value_moments",
    "papr_statistics"
]
