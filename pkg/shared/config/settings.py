"""
Configuration management for the D-SIC simulator
"""

import os
from typing import Dict, Any
from dataclasses import dataclass
from dotenv import load_dotenv

from .constants import NUMERICS, LOGGING_CONFIG, PROFILES

# Load environment variables
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == 'true'


@dataclass
class RuntimeConfig:
    """Where results go and how trials are scheduled"""
    output_dir: str = "results"
    profile: str = "desk"
    workers: int = 1

    @classmethod
    def from_env(cls) -> 'RuntimeConfig':
        profile = os.getenv('DSIC_PROFILE', 'desk')
        if profile not in PROFILES:
            profile = 'desk'
        return cls(
            output_dir=os.getenv('DSIC_OUTPUT_DIR', 'results'),
            profile=profile,
            workers=max(1, int(os.getenv('DSIC_WORKERS', 1)))
        )


@dataclass
class NumericsConfig:
    """Numerical tolerances shared by the solvers"""
    condition_limit: float
    psd_tolerance: float
    eig_residual_tolerance: float
    power_floor_mw: float

    @classmethod
    def from_env(cls) -> 'NumericsConfig':
        return cls(
            condition_limit=float(os.getenv('DSIC_CONDITION_LIMIT', NUMERICS['condition_limit'])),
            psd_tolerance=float(os.getenv('DSIC_PSD_TOLERANCE', NUMERICS['psd_tolerance'])),
            eig_residual_tolerance=float(
                os.getenv('DSIC_EIG_RESIDUAL_TOLERANCE', NUMERICS['eig_residual_tolerance'])
            ),
            power_floor_mw=float(os.getenv('DSIC_POWER_FLOOR_MW', NUMERICS['power_floor_mw']))
        )


@dataclass
class AppConfig:
    """Main application configuration"""
    runtime: RuntimeConfig
    numerics: NumericsConfig

    # Environment settings
    environment: str = "development"
    debug: bool = False
    log_level: str = "INFO"
    enable_structured_logs: bool = True

    @classmethod
    def from_env(cls) -> 'AppConfig':
        return cls(
            runtime=RuntimeConfig.from_env(),
            numerics=NumericsConfig.from_env(),
            environment=os.getenv('ENVIRONMENT', 'development'),
            debug=_env_bool('DEBUG', 'false'),
            log_level=os.getenv('DSIC_LOG_LEVEL', LOGGING_CONFIG['level']).upper(),
            enable_structured_logs=_env_bool(
                'DSIC_STRUCTURED_LOGS', str(LOGGING_CONFIG['enable_structured']).lower()
            )
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            'runtime': {
                'output_dir': self.runtime.output_dir,
                'profile': self.runtime.profile,
                'workers': self.runtime.workers
            },
            'numerics': {
                'condition_limit': self.numerics.condition_limit,
                'psd_tolerance': self.numerics.psd_tolerance,
                'eig_residual_tolerance': self.numerics.eig_residual_tolerance,
                'power_floor_mw': self.numerics.power_floor_mw
            },
            'environment': self.environment,
            'debug': self.debug,
            'log_level': self.log_level,
            'enable_structured_logs': self.enable_structured_logs
        }


# Global configuration instance
config = AppConfig.from_env()


def get_config() -> AppConfig:
    """Get the global configuration instance"""
    return config


def reload_config() -> AppConfig:
    """Reload configuration from environment"""
    global config
    config = AppConfig.from_env()
    return config
