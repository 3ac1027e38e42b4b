"""
Constants for the D-SIC simulator
"""

ARTIFACT_VERSION = "1.0.0"
SCHEMA_VERSION = 1

# Radio configuration shared by every profile
RADIO_DEFAULTS = {
    "tx_power_dbm": 23.0,
    "asic_db": 60.0,
    "rx_noise_dbm": -90.0,
    "tx_snr_db": 60.0,
    "adc_bits": 12,
    "isolation_gain_db": -15.0,
    "delay_spread_taps": 3.0,
    "memory_lh": 100,
    "trials": 1000
}

# Nonlinear PA model
RAPP_DEFAULTS = {
    "linear_gain_db": 30.0,
    "sat_amplitude_power_dbm": 30.0,
    "smooth_s": 2.0,
    "phase_gain_b": -0.15,
    "phase_sat_bsat": 0.88,
    "phase_smooth_q": 2.0
}

# Run profiles
PROFILES = {
    "desk": {
        "memory_lh": 8,
        "symbol_length": 256,
        "orders": [1, 3, 5, 7, 9, 11],
        "trials": 200,
        "ensemble_size": 200,
        "data_symbols": 4,
        "pilot_multiples": [1, 2, 4, 8],
        "antennas": [1, 2, 4],
        "irr_db": [20.0, 30.0, 40.0, 50.0, 60.0, 70.0],
        "iq_order": 5,
        "iq_pilot_multiple": 4,
        "compare_order": 9,
        "compare_pilot_length": 512
    },
    "paper": {
        "memory_lh": 100,
        "symbol_length": 1280,
        "orders": [1, 3, 5, 7, 9, 11],
        "trials": 1000,
        "ensemble_size": 1000,
        "data_symbols": 4,
        "pilot_multiples": [1, 2, 4, 10],
        "antennas": [1, 2, 4],
        "irr_db": [20.0, 30.0, 40.0, 50.0, 60.0, 70.0],
        "iq_order": 9,
        "iq_pilot_multiple": 10,
        "compare_order": 9,
        "compare_pilot_length": 1280
    }
}

# Signal generation
SIGNAL_CONFIG = {
    "ofdm_occupied_fraction": 0.8,
    "multitone_occupancy": 0.8,
    "max_horner_laguerre_index": 8
}

# A-SIC acts mainly on short-delay taps; longer taps keep this much more residual
ASIC_CONFIG = {
    "short_delay_taps": 2,
    "long_delay_relief_db": 20.0
}

# Pilot-length sweep: Tx power offsets searched for the chi-square BIRE/NIRE trade-off
DRIVE_CALIBRATION = {
    "offsets_db": [float(step) for step in range(16)],
    "trials": 24,
    "min_dip_db": 0.2,
    "gaussian_rise_db": 0.02,
    "first_trial": 1_000_000
}

# Numerical tolerances
NUMERICS = {
    "condition_limit": 1e12,
    "psd_tolerance": 1e-10,
    "eig_residual_tolerance": 1e-10,
    "power_floor_mw": 1e-30,
    "truth_quadrature_limit": 400,
    "truth_max_order": 21
}

# Counter-based RNG stream identifiers; antenna m uses stream + ANTENNA_STREAM_STRIDE * m
RNG_STREAMS = {
    "pilot": 1,
    "data": 2,
    "channel": 3,
    "tx_noise_pilot": 4,
    "tx_noise_data": 5,
    "rx_noise_pilot": 6,
    "rx_noise_data": 7,
    "pilot_ensemble": 8,
    "pa_fit": 9,
    "instance": 10,
    "bias_noise": 11,
    "multitone": 12
}
ANTENNA_STREAM_STRIDE = 100

# Output files
CSV_HEADERS = {
    "sequence": ["re", "im"],
    "channel": ["tap", "re", "im"],
    "rsi_report": [
        "run_id", "rsi_dbm", "truncation_dbm", "bire_dbm", "nire_dbm", "noise_dbm",
        "analytic_expected_dbm", "bound_dbm", "excess_dbm", "cancellation_db"
    ],
    "ensemble": ["index", "criterion", "rank_s", "lambda_min", "cond2", "papr_db"],
    "sweep": [
        "series", "sweep_variable",
        "rsi_dbm", "rsi_iqr_db", "truncation_dbm", "truncation_iqr_db",
        "bire_dbm", "bire_iqr_db", "nire_dbm", "nire_iqr_db",
        "noise_dbm", "noise_iqr_db", "cancellation_db", "cancellation_iqr_db",
        "rsi_excess_dbm", "rsi_excess_iqr_db", "criterion_value", "optimal_order", "trials"
    ],
    "checks": ["check", "instance", "value", "bound", "margin", "passed"]
}
MANIFEST_FILE = "manifest.json"

# CLI exit codes
EXIT_CODES = {
    "OK": 0,
    "GENERAL_ERROR": 1,
    "CONFIG_ERROR": 2,
    "INVARIANT_VIOLATION": 3
}

# Error messages
ERROR_MESSAGES = {
    "empty_sequence": "Sequence is empty or carries no energy.",
    "invalid_order": "Nonlinear order must be an odd integer >= 1.",
    "invalid_configuration": "Invalid configuration value.",
    "rank_deficient": "Measurement matrix is numerically rank deficient.",
    "pilot_too_short": (
        "Tx pilot sequence vector too short: need L_p - L_h >= L_w "
        "rows for the LS problem to be overdetermined."
    ),
    "dimension_mismatch": "Matrix and vector dimensions are incompatible.",
    "oracle_mismatch": "Oracle bundle and weights come from different runs.",
    "singular_gram": "Gram matrix is singular.",
    "eig_residual": "Eigen-decomposition residual exceeds tolerance.",
    "unsupported_basis": "Operation is not available for this basis kind."
}

# Retry Configuration (result and manifest writes)
RETRY_CONFIG = {
    "max_attempts": 3,
    "backoff_multiplier": 1,
    "min_wait": 1,
    "max_wait": 4
}

# Logging Configuration
LOGGING_CONFIG = {
    "level": "INFO",
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "service": "dsic-sim",
    "enable_structured": True
}
