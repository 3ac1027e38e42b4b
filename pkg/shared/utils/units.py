"""
Power unit conversions

Powers are carried in linear mW inside the simulator and converted to dB/dBm
only at report boundaries.
"""

from typing import Union

import numpy as np

from ..config.constants import NUMERICS

ArrayLike = Union[float, np.ndarray]


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value: ArrayLike, floor: float = NUMERICS['power_floor_mw']) -> ArrayLike:
    return 10.0 * np.log10(np.maximum(np.asarray(value, dtype=float), floor))


def dbm_to_mw(power_dbm: ArrayLike) -> ArrayLike:
    return db_to_linear(power_dbm)


def mw_to_dbm(power_mw: ArrayLike, floor: float = NUMERICS['power_floor_mw']) -> ArrayLike:
    """Convert mW to dBm; NaN passes through, zero maps to the floor"""
    power = np.asarray(power_mw, dtype=float)
    with np.errstate(invalid='ignore'):
        result = np.where(np.isnan(power), np.nan, linear_to_db(np.nan_to_num(power), floor))
    return float(result) if result.ndim == 0 else result


def amplitude_from_dbm(power_dbm: float) -> float:
    """RMS amplitude in sqrt(mW) for a power in dBm"""
    return float(np.sqrt(dbm_to_mw(power_dbm)))
