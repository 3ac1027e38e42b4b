"""
Configuration management for the D-SIC simulator
"""

from .settings import AppConfig, RuntimeConfig, NumericsConfig, get_config, reload_config
from .constants import *

__all__ = [
    "AppConfig",
    "RuntimeConfig",
    "NumericsConfig",
    "get_config",
    "reload_config",
    # Constants from constants.py are imported with *
]
