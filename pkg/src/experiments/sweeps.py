"""
Sweep runners: order, pilot kind, pilot length, Tx antennas and IRR

Each runner lays out its sweep as a list of points, runs every trial against
all of them (common random numbers across points) and aggregates each point
to one ResultTable row of medians and interquartile ranges.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Hashable, List, Optional, Tuple

import numpy as np

from shared.config.constants import CSV_HEADERS, DRIVE_CALIBRATION, ERROR_MESSAGES
from shared.models.data_models import (
    BasisConfig, BasisKind, ComplexSequence, ExperimentConfig, PilotDistribution, ResultTable, RsiReport
)
from shared.utils.error_handling import ConfigError, InvalidConfigurationError
from shared.utils.logging_utils import get_logger
from shared.utils.rng import derive_seed

from ..basis.measurement import build_measurement_matrix
from ..pilot.selection import check_pilot_length, select_pilot
from ..pilot.spectrum import criterion, gram_spectrum
from ..signals.sequences import generate_pilot
from .simulation import Frontend, PilotPlan, TrialRunner, run_trials

logger = get_logger(__name__)

PILOT_SERIES = ('multitone', 'random_gaussian', 'optimized_gaussian', 'global_ls')

# report attribute behind each aggregated column pair
_AGGREGATED = (
    ('rsi_dbm', 'rsi_dbm', 'rsi_iqr_db'),
    ('truncation_dbm', 'truncation_dbm', 'truncation_iqr_db'),
    ('bire_dbm', 'bire_dbm', 'bire_iqr_db'),
    ('nire_dbm', 'nire_dbm', 'nire_iqr_db'),
    ('noise_dbm', 'noise_dbm', 'noise_iqr_db'),
    ('cancellation_db', 'cancellation_db', 'cancellation_iqr_db'),
    ('excess_dbm', 'rsi_excess_dbm', 'rsi_excess_iqr_db')
)


@dataclass
class SweepGroup:
    """Points sharing one trial draw"""
    frontend: Frontend
    pilot_length: int
    pilot_distribution: PilotDistribution = PilotDistribution.GAUSSIAN


@dataclass
class SweepPoint:
    series: str
    sweep_variable: float
    basis: BasisConfig
    plan: PilotPlan
    group: Hashable = 0
    feasible: bool = True


def median_iqr(values: List[float]) -> Tuple[float, float]:
    """Median and interquartile range of the finite values"""
    array = np.asarray(values, dtype=float)
    array = array[~np.isnan(array)]
    if array.size == 0:
        return math.nan, math.nan
    q25, q50, q75 = np.percentile(array, [25, 50, 75])
    return float(q50), float(q75 - q25)


def summarize(reports: List[RsiReport]) -> Dict[str, float]:
    row: Dict[str, float] = {}
    for attribute, median_column, iqr_column in _AGGREGATED:
        row[median_column], row[iqr_column] = median_iqr([getattr(r, attribute) for r in reports])
    return row


def mark_optimal_order(table: ResultTable) -> None:
    """Per series, the order with the lowest median RSI excess"""
    for series in table.series_names():
        rows = table.filter(series=series)
        excess = np.array([row['rsi_excess_dbm'] for row in rows], dtype=float)
        best = math.nan
        if not np.all(np.isnan(excess)):
            best = int(rows[int(np.nanargmin(excess))]['sweep_variable'])
        for row in rows:
            row['optimal_order'] = best


def run_sweep(config: ExperimentConfig, groups: Dict[Hashable, SweepGroup], points: List[SweepPoint],
              workers: int = 1, first_trial: int = 0) -> Tuple[ResultTable, List[RsiReport]]:
    """Evaluate every point on trials first_trial .. first_trial + trials - 1 and aggregate per point"""
    experiment = config.experiment.value

    def trial_fn(index: int) -> List[Optional[RsiReport]]:
        trial = first_trial + index
        runners: Dict[Hashable, TrialRunner] = {}
        results: List[Optional[RsiReport]] = []
        for point in points:
            if not point.feasible:
                results.append(None)
                continue
            if point.group not in runners:
                group = groups[point.group]
                runners[point.group] = TrialRunner(
                    config, group.frontend, trial, group.pilot_length, group.pilot_distribution
                )
            results.append(runners[point.group].evaluate(point.basis, point.plan, point.sweep_variable))
        return results

    per_trial = run_trials(trial_fn, config.trials, workers)

    table = ResultTable(experiment=experiment, columns=list(CSV_HEADERS['sweep']))
    reports: List[RsiReport] = []
    for index, point in enumerate(points):
        collected = [results[index] for results in per_trial if results[index] is not None]
        reports.extend(collected)
        summary = summarize(collected)
        table.add_row(
            series=point.series,
            sweep_variable=point.sweep_variable,
            criterion_value=point.plan.criterion_value,
            trials=len(collected),
            **summary
        )
        logger.log_sweep_point(experiment, point.series, point.sweep_variable,
                               summary['rsi_dbm'], len(collected))
    return table, reports


def require_pilot_length(length: int, basis: BasisConfig) -> None:
    """Config-level form of the pilot row-count check"""
    try:
        check_pilot_length(length, basis)
    except InvalidConfigurationError as e:
        raise ConfigError(e.message, 'pilot_length')


def fixed_pilot_criterion(sequence: ComplexSequence, basis: BasisConfig) -> float:
    spectrum = gram_spectrum(build_measurement_matrix(sequence, basis.with_kind(BasisKind.GLP)))
    return criterion(spectrum)


def pilot_kind_points(config: ExperimentConfig, orders: List[int]) -> List[SweepPoint]:
    """Multitone, random Gaussian, optimized Gaussian and global LS at each order"""
    length = config.pilot_length
    master = config.master_seed
    multitone = generate_pilot(PilotDistribution.MULTITONE, length, derive_seed(master, 'multitone'))
    ensemble_seed = derive_seed(master, 'pilot_ensemble')

    points: List[SweepPoint] = []
    plans: Dict[str, Callable[[BasisConfig], PilotPlan]] = {
        'multitone': lambda basis: PilotPlan(
            'multitone', [multitone], criterion_value=fixed_pilot_criterion(multitone, basis)
        ),
        'random_gaussian': lambda basis: PilotPlan('random_gaussian', per_trial=True),
        'optimized_gaussian': lambda basis: _optimized_plan(
            'optimized_gaussian', config, length, PilotDistribution.GAUSSIAN, basis, ensemble_seed
        ),
        'global_ls': lambda basis: PilotPlan('global_ls')
    }
    for series in PILOT_SERIES:
        for order_p in orders:
            basis = config.basis(order_p, BasisKind.PH)
            points.append(SweepPoint(series, float(order_p), basis, plans[series](basis)))
    return points


def _optimized_plan(series: str, config: ExperimentConfig, length: int,
                    distribution: PilotDistribution, basis: BasisConfig, seed: int) -> PilotPlan:
    best = select_pilot(config.ensemble_size, length, distribution, basis, seed)
    return PilotPlan(series, [best.sequence], criterion_value=best.criterion_value)


def run_order_sweep(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """RSI and its components against the canceller order for each pilot kind"""
    require_pilot_length(config.pilot_length, config.basis(max(config.orders)))
    groups = {0: SweepGroup(Frontend.from_config(config), config.pilot_length)}
    table, reports = run_sweep(config, groups, pilot_kind_points(config, config.orders), workers)
    mark_optimal_order(table)
    return table, reports


def run_pilot_compare(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """All pilot kinds at the single comparison order"""
    require_pilot_length(config.pilot_length, config.basis(config.compare_order))
    groups = {0: SweepGroup(Frontend.from_config(config), config.pilot_length)}
    return run_sweep(config, groups, pilot_kind_points(config, [config.compare_order]), workers)


def pilot_length_for(config: ExperimentConfig, multiple: float) -> int:
    return int(round(multiple * config.symbol_length))


def with_tx_power(config: ExperimentConfig, tx_power_dbm: float) -> ExperimentConfig:
    return replace(config, budget=replace(config.budget, tx_power_dbm=tx_power_dbm))


def chisq_dip_db(gaussian: List[float], chisq: List[float],
                 rise_tolerance_db: float = DRIVE_CALIBRATION['gaussian_rise_db']) -> float:
    """Depth of the fall-then-rise of the chi-square RSI over pilot length

    -inf when the Gaussian curve rises anywhere, a value is missing or fewer
    than three lengths are swept.
    """
    values = list(gaussian) + list(chisq)
    if len(chisq) < 3 or any(math.isnan(v) for v in values):
        return -math.inf
    if any(b > a + rise_tolerance_db for a, b in zip(gaussian, gaussian[1:])):
        return -math.inf
    return min(chisq[0] - chisq[1], chisq[-1] - min(chisq))


def calibrate_drive(config: ExperimentConfig, points: List[SweepPoint], workers: int = 1) -> float:
    """Tx power at which the chi-square pilots trade BIRE against NIRE over the swept lengths

    Every offset in drive_offsets_db is scored on calibration_trials trials
    that the reported sweep never draws; the deepest chi-square dip wins. The
    first offset is used as is when it is the only one or no offset reaches
    the minimum dip.
    """
    base = config.budget.tx_power_dbm
    fallback = base + config.drive_offsets_db[0]
    if len(config.drive_offsets_db) == 1:
        return fallback

    best_offset, best_dip = None, -math.inf
    for offset in config.drive_offsets_db:
        driven = with_tx_power(replace(config, trials=config.calibration_trials), base + offset)
        groups = {0: SweepGroup(Frontend.from_config(driven), config.pilot_length)}
        table, _ = run_sweep(driven, groups, points, workers, first_trial=DRIVE_CALIBRATION['first_trial'])
        dip = chisq_dip_db(table.column('rsi_dbm', series=PilotDistribution.GAUSSIAN.value),
                           table.column('rsi_dbm', series=PilotDistribution.CHISQ.value))
        logger.debug(f"Drive offset {offset:+g} dB: chi-square dip {dip:.3f} dB")
        if dip > best_dip:
            best_offset, best_dip = offset, dip

    if best_dip < DRIVE_CALIBRATION['min_dip_db']:
        logger.warning(
            "No drive level shows the chi-square BIRE/NIRE trade-off; keeping the first offset",
            extra={'tx_power_dbm': fallback, 'best_dip_db': best_dip}
        )
        return fallback
    logger.info(
        f"Pilot-length sweep driven at {base + best_offset:g} dBm",
        extra={'tx_power_dbm': base + best_offset, 'offset_db': best_offset, 'dip_db': best_dip}
    )
    return base + best_offset


def run_pilot_length_sweep(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """Optimized Gaussian and chi-square pilots over pilot lengths given in symbols

    Runs at the Tx power picked by calibrate_drive.
    """
    basis = config.basis(config.compare_order, BasisKind.PH)
    lengths = [pilot_length_for(config, multiple) for multiple in config.pilot_multiples]
    for length in lengths:
        require_pilot_length(length, basis)

    ensemble_seed = derive_seed(config.master_seed, 'pilot_ensemble')
    points: List[SweepPoint] = []
    for distribution in (PilotDistribution.GAUSSIAN, PilotDistribution.CHISQ):
        for multiple, length in zip(config.pilot_multiples, lengths):
            plan = _optimized_plan(distribution.value, config, length, distribution, basis, ensemble_seed)
            points.append(SweepPoint(distribution.value, float(multiple), basis, plan))

    driven = with_tx_power(config, calibrate_drive(config, points, workers))
    groups = {0: SweepGroup(Frontend.from_config(driven), config.pilot_length)}
    return run_sweep(driven, groups, points, workers)


def run_mimo_sweep(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """Order sweep per Tx antenna count at fixed total Tx power"""
    groups: Dict[Hashable, SweepGroup] = {}
    points: List[SweepPoint] = []
    rows = config.pilot_length - config.memory_lh
    for antennas in config.antennas:
        groups[antennas] = SweepGroup(Frontend.from_config(config, antennas), config.pilot_length)
        for order_p in config.orders:
            basis = config.basis(order_p, BasisKind.PH)
            feasible = rows >= antennas * basis.weight_count
            if not feasible:
                logger.warning(
                    f"M={antennas}, P={order_p}: {ERROR_MESSAGES['pilot_too_short']}",
                    extra={'rows': rows, 'columns': antennas * basis.weight_count}
                )
            points.append(SweepPoint(
                f"M={antennas}", float(order_p), basis,
                PilotPlan(f"M={antennas}", per_trial=True), group=antennas, feasible=feasible
            ))

    table, reports = run_sweep(config, groups, points, workers)
    mark_optimal_order(table)
    return table, reports


def run_iq_sweep(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """PH against PH+IQ cancellers over the image-rejection ratio"""
    length = pilot_length_for(config, config.iq_pilot_multiple)
    require_pilot_length(length, config.basis(config.iq_order, BasisKind.PH_IQ))

    frontend = Frontend.from_config(config)
    groups = {irr: SweepGroup(frontend.with_irr(irr), length) for irr in config.irr_db}
    points = [
        SweepPoint(kind.value, float(irr), config.basis(config.iq_order, kind),
                   PilotPlan(kind.value, per_trial=True), group=irr)
        for kind in (BasisKind.PH, BasisKind.PH_IQ)
        for irr in config.irr_db
    ]
    return run_sweep(config, groups, points, workers)
