"""
Utility functions for the D-SIC simulator
"""

from .error_handling import (
    DsicError,
    ValidationError,
    EmptySequenceError,
    InvalidOrderError,
    InvalidConfigurationError,
    UnsupportedBasisError,
    DimensionMismatchError,
    RankDeficiencyError,
    SingularGramError,
    EigenResidualError,
    OracleMismatchError,
    ConfigError,
    InvariantViolationError,
    create_retry_decorator,
    validate_odd_order,
    validate_positive,
    validate_sequence_length,
    validate_finite,
    create_error_summary,
    log_error
)
from .logging_utils import StructuredLogger, get_logger
from .rng import make_rng, derive_seed, stream_id
from .units import db_to_linear, linear_to_db, dbm_to_mw, mw_to_dbm, amplitude_from_dbm

__all__ = [
    "DsicError",
    "ValidationError",
    "EmptySequenceError",
    "InvalidOrderError",
    "InvalidConfigurationError",
    "UnsupportedBasisError",
    "DimensionMismatchError",
    "RankDeficiencyError",
    "SingularGramError",
    "EigenResidualError",
    "OracleMismatchError",
    "ConfigError",
    "InvariantViolationError",
    "create_retry_decorator",
    "validate_odd_order",
    "validate_positive",
    "validate_sequence_length",
    "validate_finite",
    "create_error_summary",
    "log_error",
    "StructuredLogger",
    "get_logger",
    "make_rng",
    "derive_seed",
    "stream_id",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_mw",
    "mw_to_dbm",
    "amplitude_from_dbm"
]
