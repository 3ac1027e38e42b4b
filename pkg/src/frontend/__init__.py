"""
Transceiver impairment models: PA, SI channel, noise and I/Q imbalance
"""

from .pa_models import (
    rapp_apply,
    operating_drive_power_mw,
    TruthModel,
    RappTruth,
    PolynomialTruth,
    PolynomialPA,
    fit_polynomial_pa,
    build_truth,
    truth_weights
)
from .channel import (
    convolve_valid,
    apply_channel,
    gen_channel,
    rms_delay_spread,
    equivalent_rx_noise_power
)
from .impairments import (
    NoiseStage,
    add_noise,
    iq_gains,
    apply_iq_imbalance,
    adc_dynamic_range_db,
    dsic_upper_bound
)

__all__ = [
    "rapp_apply",
    "operating_drive_power_mw",
    "TruthModel",
    "RappTruth",
    "PolynomialTruth",
    "PolynomialPA",
    "fit_polynomial_pa",
    "build_truth",
    "truth_weights",
    "convolve_valid",
    "apply_channel",
    "gen_channel",
    "rms_delay_spread",
    "equivalent_rx_noise_power",
    "NoiseStage",
    "add_noise",
    "iq_gains",
    "apply_iq_imbalance",
    "adc_dynamic_range_db",
    "dsic_upper_bound"
]
