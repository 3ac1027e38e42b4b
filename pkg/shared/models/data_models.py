"""
Data models for the D-SIC simulator
Defines sequences, basis configurations, spectra, frontend parameters, reports and run metadata
"""

import hashlib
import math
import os
from dataclasses import dataclass, field, replace, fields
from datetime import datetime, timezone
from enum import Enum
from typing import List, Dict, Any, Optional

import numpy as np
from dotenv import dotenv_values
from scipy.linalg import solve_triangular

from ..config.constants import (
    ARTIFACT_VERSION, SCHEMA_VERSION, PROFILES, RADIO_DEFAULTS, RAPP_DEFAULTS, CSV_HEADERS, NUMERICS,
    DRIVE_CALIBRATION
)
from ..utils.error_handling import (
    ConfigError, DimensionMismatchError, DsicError, InvalidConfigurationError,
    validate_finite, validate_odd_order, validate_positive
)
from ..utils.units import amplitude_from_dbm, dbm_to_mw, db_to_linear


class BasisKind(Enum):
    """Canceller basis families"""
    PH = "ph"
    GLP = "glp"
    PH_IQ = "ph_iq"


class SourceKind(Enum):
    """Which transmitted sequence a measurement matrix was built from"""
    PILOT = "pilot"
    DATA = "data"


class PilotDistribution(Enum):
    """Pilot generators available to the ensemble search"""
    GAUSSIAN = "gaussian"
    CHISQ = "chisq"
    MULTITONE = "multitone"


class ExperimentKind(Enum):
    """Experiment runners exposed by the CLI"""
    ORDER_SWEEP = "order_sweep"
    PILOT_LENGTH_SWEEP = "pilot_length_sweep"
    PILOT_COMPARE = "pilot_compare"
    MIMO_SWEEP = "mimo_sweep"
    IQ_SWEEP = "iq_sweep"
    BOUND_CHECK = "bound_check"
    SELECT_PILOT = "select_pilot"


@dataclass
class ComplexSequence:
    """Finite complex baseband sequence with its average power"""
    samples: np.ndarray
    nominal_power: Optional[float] = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128).ravel()
        validate_finite(self.samples, "samples")
        if self.nominal_power is None:
            self.nominal_power = self.mean_power()

    @property
    def length(self) -> int:
        return int(self.samples.size)

    def __len__(self) -> int:
        return self.length

    def mean_power(self) -> float:
        if self.samples.size == 0:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))

    def scaled(self, gain: complex) -> 'ComplexSequence':
        return ComplexSequence(self.samples * gain)


@dataclass
class SequenceStats:
    """Peak/mean power summary of a sequence"""
    papr_db: float
    peak_power: float
    mean_power: float
    length: int


@dataclass(frozen=True)
class BasisConfig:
    """Canceller structure: order, memory, basis family and antenna count"""
    order_p: int
    memory_lh: int
    kind: BasisKind = BasisKind.GLP
    antennas_m: int = 1

    def __post_init__(self):
        validate_odd_order(self.order_p, "order_p")
        if self.memory_lh < 0:
            raise InvalidConfigurationError(f"memory_lh must be >= 0, got {self.memory_lh}.", "memory_lh")
        if self.antennas_m < 1:
            raise InvalidConfigurationError(f"antennas_m must be >= 1, got {self.antennas_m}.", "antennas_m")
        if not isinstance(self.kind, BasisKind):
            object.__setattr__(self, 'kind', BasisKind(self.kind))

    @property
    def orders(self) -> List[int]:
        return list(range(1, self.order_p + 1, 2))

    @property
    def taps(self) -> int:
        return self.memory_lh + 1

    @property
    def branches_per_delay(self) -> int:
        """Columns per delay: (P+1)/2 monomials, or (P+1)(P+3)/4 with the I/Q image terms"""
        if self.kind is BasisKind.PH_IQ:
            return (self.order_p + 1) * (self.order_p + 3) // 4
        return (self.order_p + 1) // 2

    @property
    def weight_count(self) -> int:
        """L_w for one Tx/Rx antenna pair"""
        return self.taps * self.branches_per_delay

    @property
    def column_count(self) -> int:
        return self.weight_count * self.antennas_m

    def with_kind(self, kind: BasisKind) -> 'BasisConfig':
        return replace(self, kind=kind)

    def with_order(self, order_p: int) -> 'BasisConfig':
        return replace(self, order_p=order_p)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'order_p': self.order_p,
            'memory_lh': self.memory_lh,
            'kind': self.kind.value,
            'antennas_m': self.antennas_m
        }


@dataclass
class TransformMatrix:
    """T = I kron L mapping GLP weights to PH weights (w_ph = T w_glp)"""
    entries: np.ndarray
    block: np.ndarray
    basis: BasisConfig

    def inverse(self) -> np.ndarray:
        return solve_triangular(self.entries, np.eye(self.entries.shape[0], dtype=self.entries.dtype))

    def to_ph(self, glp_weights: np.ndarray) -> np.ndarray:
        glp_weights = np.asarray(glp_weights)
        if glp_weights.shape[0] != self.entries.shape[1]:
            raise DimensionMismatchError(
                f"Weights of length {glp_weights.shape[0]} do not match transform size {self.entries.shape[1]}."
            )
        return self.entries @ glp_weights

    def to_glp(self, ph_weights: np.ndarray) -> np.ndarray:
        ph_weights = np.asarray(ph_weights)
        if ph_weights.shape[0] != self.entries.shape[0]:
            raise DimensionMismatchError(
                f"Weights of length {ph_weights.shape[0]} do not match transform size {self.entries.shape[0]}."
            )
        return solve_triangular(self.entries, ph_weights.astype(np.complex128))


@dataclass
class MeasurementMatrix:
    """Regression matrix (rows n = L_h .. L_seq-1, columns delay-major, order-minor)"""
    entries: np.ndarray
    basis: BasisConfig
    source_kind: SourceKind = SourceKind.PILOT

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def columns(self) -> int:
        return int(self.entries.shape[1])

    @property
    def is_underdetermined(self) -> bool:
        return self.rows < self.columns

    def gram(self) -> np.ndarray:
        return self.entries.conj().T @ self.entries


@dataclass
class GramSpectrum:
    """Hermitian PSD Gram matrix with its eigen-diagnostics"""
    gram: np.ndarray
    eigenvalues: np.ndarray
    trace: float
    lambda_min: float
    lambda_max: float
    cond2: float
    shannon_rank: float
    tr_inverse: float

    @property
    def dimension(self) -> int:
        return int(self.gram.shape[0])

    @property
    def is_singular(self) -> bool:
        return self.lambda_min <= 0.0


@dataclass
class PilotCandidate:
    """One ensemble member scored by the selection criterion"""
    sequence: ComplexSequence
    spectrum: GramSpectrum
    criterion_value: float
    papr_db: float
    ensemble_index: int

    def to_csv_row(self) -> List[Any]:
        return [
            self.ensemble_index, self.criterion_value, self.spectrum.shannon_rank,
            self.spectrum.lambda_min, self.spectrum.cond2, self.papr_db
        ]


@dataclass(frozen=True)
class RappParams:
    """RAPP AM-AM/AM-PM parameters (gain in dB, saturation in dBm)"""
    linear_gain_db: float = RAPP_DEFAULTS['linear_gain_db']
    sat_amplitude_power_dbm: float = RAPP_DEFAULTS['sat_amplitude_power_dbm']
    smooth_s: float = RAPP_DEFAULTS['smooth_s']
    phase_gain_b: float = RAPP_DEFAULTS['phase_gain_b']
    phase_sat_bsat: float = RAPP_DEFAULTS['phase_sat_bsat']
    phase_smooth_q: float = RAPP_DEFAULTS['phase_smooth_q']

    def __post_init__(self):
        validate_positive(self.smooth_s, "smooth_s")
        validate_positive(self.phase_sat_bsat, "phase_sat_bsat")
        validate_positive(self.phase_smooth_q, "phase_smooth_q")

    @property
    def linear_gain(self) -> float:
        """Amplitude gain A"""
        return float(np.sqrt(db_to_linear(self.linear_gain_db)))

    @property
    def sat_amplitude(self) -> float:
        """A_sat in sqrt(mW)"""
        return amplitude_from_dbm(self.sat_amplitude_power_dbm)


@dataclass
class ChannelModel:
    """SI channel taps after A-SIC"""
    taps: np.ndarray
    asic_suppression_db: float = 0.0

    def __post_init__(self):
        self.taps = np.asarray(self.taps, dtype=np.complex128).ravel()
        if self.taps.size == 0:
            raise InvalidConfigurationError("Channel needs at least one tap.", "taps")
        validate_finite(self.taps, "taps")
        validate_positive(self.asic_suppression_db, "asic_suppression_db", allow_zero=True)

    @property
    def memory_lh(self) -> int:
        return int(self.taps.size - 1)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.taps) ** 2))


@dataclass(frozen=True)
class LinkBudget:
    """Tx power, Tx EVM-style SNR, Rx noise floor and ADC resolution"""
    tx_power_dbm: float = RADIO_DEFAULTS['tx_power_dbm']
    tx_snr_db: float = RADIO_DEFAULTS['tx_snr_db']
    rx_noise_dbm: float = RADIO_DEFAULTS['rx_noise_dbm']
    adc_bits: int = RADIO_DEFAULTS['adc_bits']

    def __post_init__(self):
        if self.adc_bits < 1:
            raise InvalidConfigurationError(f"adc_bits must be >= 1, got {self.adc_bits}.", "adc_bits")
        for name in ('tx_power_dbm', 'rx_noise_dbm'):
            if not math.isfinite(getattr(self, name)):
                raise InvalidConfigurationError(f"{name} must be finite.", name)
        if math.isnan(self.tx_snr_db):
            raise InvalidConfigurationError("tx_snr_db must not be NaN.", "tx_snr_db")

    @property
    def tx_noise_power_mw(self) -> float:
        if math.isinf(self.tx_snr_db) and self.tx_snr_db > 0:
            return 0.0
        return float(dbm_to_mw(self.tx_power_dbm - self.tx_snr_db))

    @property
    def rx_noise_power_mw(self) -> float:
        return float(dbm_to_mw(self.rx_noise_dbm))


@dataclass
class WeightVector:
    """Canceller weights: (column_count,) for one Rx antenna, (column_count, M) otherwise"""
    weights: np.ndarray
    basis: BasisConfig
    residual_norm: float = 0.0
    condition_number: float = 1.0
    run_id: Optional[str] = None
    pivoted: bool = False

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.complex128)
        if self.weights.shape[0] != self.basis.column_count:
            raise DimensionMismatchError(
                f"Weight length {self.weights.shape[0]} does not match basis column count "
                f"{self.basis.column_count}."
            )
        validate_finite(self.weights, "weights")


@dataclass
class RsiReport:
    """Per-trial RSI power ledger in dBm (cancellation in dB)"""
    rsi_dbm: float
    truncation_dbm: float
    bire_dbm: float
    nire_dbm: float
    noise_dbm: float
    analytic_expected_dbm: float
    bound_dbm: float
    excess_dbm: float
    cancellation_db: float
    run_id: Optional[str] = None

    @property
    def has_components(self) -> bool:
        return not math.isnan(self.analytic_expected_dbm)

    def to_csv_row(self) -> List[Any]:
        return [getattr(self, name) for name in CSV_HEADERS['rsi_report']]

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in CSV_HEADERS['rsi_report']}


@dataclass
class OracleBundle:
    """Simulation-side truth needed to split the RSI into its analytic terms"""
    run_id: str
    true_weights: np.ndarray
    psi_pilot: np.ndarray
    psi_data: np.ndarray
    eps_pilot: np.ndarray
    eps_data: np.ndarray
    noise_power_mw: float
    rx_power_mw: float
    global_ls: bool = False


# Experiment configuration -------------------------------------------------

_LIST_INT_KEYS = ('orders', 'antennas', 'bias_lengths')
_LIST_FLOAT_KEYS = ('pilot_multiples', 'irr_db', 'drive_offsets_db')
_INT_KEYS = (
    'schema_version', 'master_seed', 'trials', 'memory_lh', 'symbol_length', 'pilot_length',
    'ensemble_size', 'data_symbols', 'compare_order', 'iq_order', 'truth_order',
    'noise_realizations', 'mc_instances', 'bias_seeds', 'adc_bits', 'calibration_trials'
)
_FLOAT_KEYS = (
    'iq_pilot_multiple', 'tx_power_dbm', 'tx_snr_db', 'rx_noise_dbm', 'asic_db',
    'isolation_gain_db', 'delay_spread_taps', 'rapp_linear_gain_db',
    'rapp_sat_amplitude_power_dbm', 'rapp_smooth_s', 'rapp_phase_gain_b',
    'rapp_phase_sat_bsat', 'rapp_phase_smooth_q'
)
_STR_KEYS = ('experiment', 'profile', 'pilot_distribution', 'truth_model')
TRUTH_MODELS = ('rapp', 'polynomial')


def _format_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ExperimentConfig:
    """Everything an experiment run depends on; round-trips through a flat key=value file"""
    experiment: ExperimentKind
    profile: str = "desk"
    schema_version: int = SCHEMA_VERSION
    master_seed: int = 0
    trials: int = PROFILES['desk']['trials']

    # Basis
    orders: List[int] = field(default_factory=lambda: list(PROFILES['desk']['orders']))
    memory_lh: int = PROFILES['desk']['memory_lh']
    compare_order: int = PROFILES['desk']['compare_order']

    # Pilots and data
    symbol_length: int = PROFILES['desk']['symbol_length']
    pilot_length: int = PROFILES['desk']['compare_pilot_length']
    pilot_distribution: str = PilotDistribution.GAUSSIAN.value
    ensemble_size: int = PROFILES['desk']['ensemble_size']
    pilot_multiples: List[float] = field(default_factory=lambda: list(PROFILES['desk']['pilot_multiples']))
    data_symbols: int = PROFILES['desk']['data_symbols']

    # MIMO and I/Q
    antennas: List[int] = field(default_factory=lambda: list(PROFILES['desk']['antennas']))
    irr_db: List[float] = field(default_factory=lambda: list(PROFILES['desk']['irr_db']))
    iq_order: int = PROFILES['desk']['iq_order']
    iq_pilot_multiple: float = PROFILES['desk']['iq_pilot_multiple']

    # Ground truth
    truth_model: str = "rapp"
    truth_order: int = 7

    # Verification
    noise_realizations: int = 200
    mc_instances: int = 10
    bias_seeds: int = 10
    bias_lengths: List[int] = field(default_factory=lambda: [1024, 4096, 16384])

    # Pilot-length drive calibration; a single offset fixes the drive
    drive_offsets_db: List[float] = field(default_factory=lambda: list(DRIVE_CALIBRATION['offsets_db']))
    calibration_trials: int = DRIVE_CALIBRATION['trials']

    # Frontend
    rapp: RappParams = field(default_factory=RappParams)
    budget: LinkBudget = field(default_factory=LinkBudget)
    asic_db: float = RADIO_DEFAULTS['asic_db']
    isolation_gain_db: float = RADIO_DEFAULTS['isolation_gain_db']
    delay_spread_taps: float = RADIO_DEFAULTS['delay_spread_taps']

    def __post_init__(self):
        if not isinstance(self.experiment, ExperimentKind):
            try:
                self.experiment = ExperimentKind(self.experiment)
            except ValueError:
                raise ConfigError(f"Unknown experiment '{self.experiment}'.", "experiment")

    @classmethod
    def from_profile(cls, experiment: Any, profile: str = "desk", **overrides) -> 'ExperimentConfig':
        """Profile defaults with explicit overrides"""
        if profile not in PROFILES:
            raise ConfigError(f"Unknown profile '{profile}'. Expected one of {sorted(PROFILES)}.", "profile")
        preset = PROFILES[profile]
        values = {
            'experiment': experiment,
            'profile': profile,
            'trials': preset['trials'],
            'orders': list(preset['orders']),
            'memory_lh': preset['memory_lh'],
            'compare_order': preset['compare_order'],
            'symbol_length': preset['symbol_length'],
            'pilot_length': preset['compare_pilot_length'],
            'ensemble_size': preset['ensemble_size'],
            'pilot_multiples': list(preset['pilot_multiples']),
            'data_symbols': preset['data_symbols'],
            'antennas': list(preset['antennas']),
            'irr_db': list(preset['irr_db']),
            'iq_order': preset['iq_order'],
            'iq_pilot_multiple': float(preset['iq_pilot_multiple'])
        }
        values.update(overrides)
        config = cls(**values)
        config.validate()
        return config

    @property
    def data_length(self) -> int:
        return self.data_symbols * self.symbol_length

    def basis(self, order_p: int, kind: BasisKind = BasisKind.GLP, antennas_m: int = 1) -> BasisConfig:
        return BasisConfig(order_p=order_p, memory_lh=self.memory_lh, kind=kind, antennas_m=antennas_m)

    def validate(self) -> None:
        """Raise ConfigError on the first invalid value"""
        def require(condition: bool, key: str, message: str):
            if not condition:
                raise ConfigError(f"{key}: {message}", key)

        require(self.schema_version == SCHEMA_VERSION, 'schema_version',
                f"unsupported schema version {self.schema_version}, expected {SCHEMA_VERSION}")
        require(self.profile in PROFILES, 'profile', f"unknown profile '{self.profile}'")
        require(self.trials >= 1, 'trials', "must be >= 1")
        require(self.master_seed >= 0, 'master_seed', "must be >= 0")
        require(len(self.orders) >= 1, 'orders', "at least one order required")
        for key, values in (('orders', self.orders), ('bias_lengths', self.bias_lengths),
                            ('antennas', self.antennas), ('pilot_multiples', self.pilot_multiples),
                            ('irr_db', self.irr_db),
                            ('drive_offsets_db', self.drive_offsets_db)):
            require(all(b > a for a, b in zip(values, values[1:])), key, "must be strictly increasing")
        for key in ('compare_order', 'iq_order', 'truth_order'):
            order = getattr(self, key)
            require(order >= 1 and order % 2 == 1, key, f"must be an odd integer >= 1, got {order}")
        require(all(p >= 1 and p % 2 == 1 for p in self.orders), 'orders', "orders must be odd and >= 1")
        # RAPP projection is tabulated up to this order
        max_order = NUMERICS['truth_max_order']
        require(max(self.orders) <= max_order, 'orders', f"orders must be <= {max_order}")
        for key in ('compare_order', 'iq_order', 'truth_order'):
            require(getattr(self, key) <= max_order, key, f"must be <= {max_order}, got {getattr(self, key)}")
        require(self.memory_lh >= 0, 'memory_lh', "must be >= 0")
        require(self.symbol_length >= 1, 'symbol_length', "must be >= 1")
        require(self.data_symbols >= 1, 'data_symbols', "must be >= 1")
        require(self.data_length > self.memory_lh, 'data_symbols', "data sequence shorter than the channel")
        require(self.pilot_length > self.memory_lh, 'pilot_length', "pilot shorter than the channel")
        require(self.ensemble_size >= 1, 'ensemble_size', "must be >= 1")
        require(self.pilot_distribution in {d.value for d in PilotDistribution}, 'pilot_distribution',
                f"unknown distribution '{self.pilot_distribution}'")
        require(all(m > 0 for m in self.pilot_multiples), 'pilot_multiples', "must be > 0")
        require(self.iq_pilot_multiple > 0, 'iq_pilot_multiple', "must be > 0")
        require(all(m >= 1 for m in self.antennas), 'antennas', "must be >= 1")
        require(all(irr > 0 for irr in self.irr_db), 'irr_db', "must be > 0")
        require(self.truth_model in TRUTH_MODELS, 'truth_model', f"must be one of {TRUTH_MODELS}")
        require(self.noise_realizations >= 2, 'noise_realizations', "must be >= 2")
        require(self.mc_instances >= 1, 'mc_instances', "must be >= 1")
        require(self.bias_seeds >= 1, 'bias_seeds', "must be >= 1")
        require(len(self.drive_offsets_db) >= 1 and all(math.isfinite(d) for d in self.drive_offsets_db),
                'drive_offsets_db', "at least one finite offset required")
        require(self.calibration_trials >= 1, 'calibration_trials', "must be >= 1")
        require(self.asic_db >= 0, 'asic_db', "must be >= 0")
        require(self.delay_spread_taps > 0, 'delay_spread_taps', "must be > 0")

    def to_dict(self) -> Dict[str, Any]:
        """Flat dictionary keyed exactly like the config file"""
        data = {
            'schema_version': self.schema_version,
            'experiment': self.experiment.value,
            'profile': self.profile,
            'master_seed': self.master_seed,
            'trials': self.trials,
            'orders': list(self.orders),
            'memory_lh': self.memory_lh,
            'compare_order': self.compare_order,
            'symbol_length': self.symbol_length,
            'pilot_length': self.pilot_length,
            'pilot_distribution': self.pilot_distribution,
            'ensemble_size': self.ensemble_size,
            'pilot_multiples': [float(m) for m in self.pilot_multiples],
            'data_symbols': self.data_symbols,
            'antennas': list(self.antennas),
            'irr_db': [float(v) for v in self.irr_db],
            'iq_order': self.iq_order,
            'iq_pilot_multiple': float(self.iq_pilot_multiple),
            'truth_model': self.truth_model,
            'truth_order': self.truth_order,
            'noise_realizations': self.noise_realizations,
            'mc_instances': self.mc_instances,
            'bias_seeds': self.bias_seeds,
            'bias_lengths': list(self.bias_lengths),
            'drive_offsets_db': [float(d) for d in self.drive_offsets_db],
            'calibration_trials': self.calibration_trials,
            'tx_power_dbm': float(self.budget.tx_power_dbm),
            'tx_snr_db': float(self.budget.tx_snr_db),
            'rx_noise_dbm': float(self.budget.rx_noise_dbm),
            'adc_bits': self.budget.adc_bits,
            'asic_db': float(self.asic_db),
            'isolation_gain_db': float(self.isolation_gain_db),
            'delay_spread_taps': float(self.delay_spread_taps)
        }
        for item in fields(RappParams):
            data[f"rapp_{item.name}"] = float(getattr(self.rapp, item.name))
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        """Build from a flat dictionary of native values or strings"""
        known = set(_LIST_INT_KEYS + _LIST_FLOAT_KEYS + _INT_KEYS + _FLOAT_KEYS + _STR_KEYS)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}", unknown[0])
        if 'experiment' not in data:
            raise ConfigError("Missing required key 'experiment'.", 'experiment')

        parsed: Dict[str, Any] = {}
        for key, raw in data.items():
            try:
                parsed[key] = _parse_value(key, raw)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Cannot parse '{key}': {e}", key)

        rapp_values = {
            item.name: parsed.pop(f"rapp_{item.name}")
            for item in fields(RappParams) if f"rapp_{item.name}" in parsed
        }
        budget_values = {
            name: parsed.pop(name)
            for name in ('tx_power_dbm', 'tx_snr_db', 'rx_noise_dbm', 'adc_bits') if name in parsed
        }
        profile = parsed.pop('profile', 'desk')
        experiment = parsed.pop('experiment')
        try:
            parsed['rapp'] = RappParams(**rapp_values)
            parsed['budget'] = LinkBudget(**budget_values)
        except DsicError as e:
            raise ConfigError(e.message, getattr(e, 'field', None))
        return cls.from_profile(experiment, profile, **parsed)

    def to_text(self) -> str:
        """Canonical file text (sorted keys, schema_version first)"""
        data = self.to_dict()
        lines = [f"schema_version={data.pop('schema_version')}"]
        lines.extend(f"{key}={_format_value(value)}" for key, value in sorted(data.items()))
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode('utf-8')).hexdigest()

    @classmethod
    def from_file(cls, path: str) -> 'ExperimentConfig':
        """Load a flat key=value config file"""
        if not os.path.isfile(path):
            raise ConfigError(f"Config file not found: {path}", "config")
        values = {key: value for key, value in dotenv_values(path).items() if value is not None}
        if 'schema_version' not in values:
            raise ConfigError("Missing required key 'schema_version'.", 'schema_version')
        return cls.from_dict(values)

    def to_file(self, path: str) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_text())


def _parse_value(key: str, raw: Any) -> Any:
    if key in _LIST_INT_KEYS or key in _LIST_FLOAT_KEYS:
        cast = int if key in _LIST_INT_KEYS else float
        if isinstance(raw, str):
            items = [item.strip() for item in raw.split(',') if item.strip()]
        else:
            items = list(raw)
        return [cast(item) for item in items]
    if key in _INT_KEYS:
        value = float(raw) if isinstance(raw, str) and not raw.strip().lstrip('-').isdigit() else raw
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"expected an integer, got {raw}")
        return int(value)
    if key in _FLOAT_KEYS:
        return float(raw)
    return str(raw).strip()


@dataclass
class ResultTable:
    """Rows of an experiment output with a fixed column tuple"""
    experiment: str
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def add_row(self, **values) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise DimensionMismatchError(f"Unknown result columns: {sorted(unknown)}")
        self.rows.append({name: values.get(name, math.nan) for name in self.columns})

    def series_names(self) -> List[str]:
        names: List[str] = []
        for row in self.rows:
            name = row.get('series')
            if name is not None and name not in names:
                names.append(name)
        return names

    def filter(self, **criteria) -> List[Dict[str, Any]]:
        return [row for row in self.rows if all(row.get(k) == v for k, v in criteria.items())]

    def column(self, name: str, **criteria) -> np.ndarray:
        return np.array([row[name] for row in self.filter(**criteria)], dtype=float)

    @property
    def passed(self) -> bool:
        if 'passed' not in self.columns:
            return True
        return all(bool(row['passed']) for row in self.rows)

    def failed_checks(self) -> List[str]:
        if 'passed' not in self.columns:
            return []
        return [f"{row['check']}#{row['instance']}" for row in self.rows if not row['passed']]

    def to_records(self) -> List[List[Any]]:
        return [[row[name] for name in self.columns] for row in self.rows]


@dataclass
class RunManifest:
    """Record of one experiment run and the files it produced"""
    experiment: str
    config_hash: str
    master_seed: int
    schema_version: int = SCHEMA_VERSION
    artifact_version: str = ARTIFACT_VERSION
    created_at: Optional[datetime] = None
    outputs: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.created_at is None:
            self.created_at = datetime.now(timezone.utc)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {
            'experiment': self.experiment,
            'schema_version': self.schema_version,
            'config_hash': self.config_hash,
            'master_seed': self.master_seed,
            'artifact_version': self.artifact_version,
            'created_at': self.created_at.isoformat(),
            'outputs': list(self.outputs)
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        """Create from dictionary"""
        return cls(
            experiment=data['experiment'],
            config_hash=data['config_hash'],
            master_seed=data['master_seed'],
            schema_version=data.get('schema_version', SCHEMA_VERSION),
            artifact_version=data.get('artifact_version', ARTIFACT_VERSION),
            created_at=datetime.fromisoformat(data['created_at'].replace('Z', '+00:00')),
            outputs=data.get('outputs', [])
        )
