"""
Shared configuration, models and utilities for the D-SIC simulator
"""

from .config import settings, constants
from .models import data_models
from .utils import error_handling, logging_utils, rng, units, io_utils

__version__ = "1.0.0"
__all__ = [
    "settings",
    "constants",
    "data_models",
    "error_handling",
    "logging_utils",
    "rng",
    "units",
    "io_utils"
]
