"""
Error handling utilities for the D-SIC simulator
Provides the exception hierarchy, input validators and retry logic for output writes
"""

import math
from typing import Any, Dict, List, Optional, Type

import numpy as np
from tenacity import retry, stop_after_attempt, wait_exponential, retry_if_exception_type

from ..config.constants import RETRY_CONFIG, ERROR_MESSAGES, EXIT_CODES
from .logging_utils import get_logger

logger = get_logger(__name__)


class DsicError(Exception):
    """Base exception for D-SIC simulator errors"""
    def __init__(self, message: str, error_code: str = "GENERAL_ERROR",
                 exit_code: int = EXIT_CODES['GENERAL_ERROR']):
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(DsicError):
    """Input validation errors"""
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message, "VALIDATION_ERROR")


class EmptySequenceError(ValidationError):
    """Sequence has no samples or no energy"""
    def __init__(self, message: str = ERROR_MESSAGES['empty_sequence'], field: Optional[str] = "samples"):
        super().__init__(message, field)
        self.error_code = "EMPTY_SEQUENCE"


class InvalidOrderError(ValidationError):
    """Nonlinear order is not an odd positive integer"""
    def __init__(self, message: str = ERROR_MESSAGES['invalid_order'], field: Optional[str] = "order"):
        super().__init__(message, field)
        self.error_code = "INVALID_ORDER"


class InvalidConfigurationError(ValidationError):
    """Parameter combination that cannot be realised"""
    def __init__(self, message: str = ERROR_MESSAGES['invalid_configuration'], field: Optional[str] = None):
        super().__init__(message, field)
        self.error_code = "INVALID_CONFIGURATION"


class UnsupportedBasisError(DsicError):
    """Operation requested for a basis kind that does not provide it"""
    def __init__(self, message: str = ERROR_MESSAGES['unsupported_basis'], kind: Optional[str] = None):
        self.kind = kind
        super().__init__(message, "UNSUPPORTED_BASIS")


class DimensionMismatchError(DsicError):
    """Matrix and vector shapes do not line up"""
    def __init__(self, message: str = ERROR_MESSAGES['dimension_mismatch']):
        super().__init__(message, "DIMENSION_MISMATCH")


class RankDeficiencyError(DsicError):
    """LS problem is numerically rank deficient or underdetermined"""
    def __init__(self, message: str = ERROR_MESSAGES['rank_deficient'],
                 condition_estimate: float = math.inf):
        self.condition_estimate = condition_estimate
        super().__init__(message, "RANK_DEFICIENT")


class SingularGramError(DsicError):
    """Gram matrix has a zero smallest eigenvalue"""
    def __init__(self, message: str = ERROR_MESSAGES['singular_gram']):
        super().__init__(message, "SINGULAR_GRAM")


class EigenResidualError(DsicError):
    """Hermitian eigen-decomposition failed its residual check"""
    def __init__(self, message: str = ERROR_MESSAGES['eig_residual'], residual: float = math.nan):
        self.residual = residual
        super().__init__(message, "EIG_RESIDUAL")


class OracleMismatchError(DsicError):
    """Oracle bundle and weights do not belong to the same run"""
    def __init__(self, message: str = ERROR_MESSAGES['oracle_mismatch'],
                 expected_run: Optional[str] = None, actual_run: Optional[str] = None):
        self.expected_run = expected_run
        self.actual_run = actual_run
        super().__init__(message, "ORACLE_MISMATCH")


class ConfigError(DsicError):
    """Experiment configuration could not be loaded or validated"""
    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message, "CONFIG_ERROR", EXIT_CODES['CONFIG_ERROR'])


class InvariantViolationError(DsicError):
    """A verification check failed"""
    def __init__(self, message: str, failed_checks: Optional[List[str]] = None):
        self.failed_checks = failed_checks or []
        super().__init__(message, "INVARIANT_VIOLATION", EXIT_CODES['INVARIANT_VIOLATION'])


def create_retry_decorator(
    max_attempts: int = RETRY_CONFIG['max_attempts'],
    backoff_multiplier: int = RETRY_CONFIG['backoff_multiplier'],
    min_wait: int = RETRY_CONFIG['min_wait'],
    max_wait: int = RETRY_CONFIG['max_wait'],
    retryable_exceptions: List[Type[Exception]] = None
):
    """Create a retry decorator with configurable parameters"""

    if retryable_exceptions is None:
        retryable_exceptions = [OSError]

    return retry(
        stop=stop_after_attempt(max_attempts),
        wait=wait_exponential(multiplier=backoff_multiplier, min=min_wait, max=max_wait),
        retry=retry_if_exception_type(tuple(retryable_exceptions)),
        reraise=True,
        before_sleep=lambda retry_state: logger.warning(
            f"Retrying {retry_state.next_action} after {retry_state.outcome.exception()}"
        )
    )


def validate_odd_order(order: Any, field: str = "order") -> int:
    """Validate a nonlinear order (odd integer >= 1)"""
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise InvalidOrderError(field=field)
    if order < 1 or order % 2 == 0:
        raise InvalidOrderError(f"{ERROR_MESSAGES['invalid_order']} Got {order}.", field)
    return int(order)


def validate_positive(value: float, field: str, allow_zero: bool = False) -> None:
    """Validate a strictly positive (or non-negative) finite scalar"""
    if value is None or not math.isfinite(value):
        raise ValidationError(f"{field} must be finite.", field)
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValidationError(f"{field} must be {bound}, got {value}.", field)


def validate_sequence_length(length: int, minimum: int = 1, field: str = "length") -> None:
    """Validate a sequence length"""
    if length < 1:
        raise EmptySequenceError(field=field)
    if length < minimum:
        raise InvalidConfigurationError(
            f"{field} must be at least {minimum}, got {length}.", field
        )


def validate_finite(values: np.ndarray, field: str = "samples") -> None:
    """Reject NaN/Inf entries"""
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"{field} contains non-finite entries.", field)


def create_error_summary(error: Exception) -> Dict[str, Any]:
    """Create the CLI error payload and exit code"""
    if isinstance(error, DsicError):
        return {
            'exit_code': error.exit_code,
            'body': {
                'error': error.message,
                'error_code': error.error_code
            }
        }

    logger.error(f"Unexpected error: {str(error)}")
    return {
        'exit_code': EXIT_CODES['GENERAL_ERROR'],
        'body': {
            'error': str(error),
            'error_code': 'INTERNAL_ERROR'
        }
    }


def log_error(error: Exception, context: Dict[str, Any] = None) -> None:
    """Log error with context information"""
    error_details = {
        'error_type': type(error).__name__,
        'error_message': str(error),
        'context': context or {}
    }

    if isinstance(error, DsicError):
        error_details['error_code'] = error.error_code
        error_details['exit_code'] = error.exit_code
    if isinstance(error, RankDeficiencyError):
        error_details['condition_estimate'] = error.condition_estimate

    logger.error("Error occurred", extra=error_details)
