"""
Bound-check experiment

Every row compares a measured or computed value against the analytic value
or bound it must respect. A row passes when its margin is non-negative.
"""

import math
from typing import Dict, List, Tuple

import numpy as np

from shared.config.constants import CSV_HEADERS
from shared.models.data_models import (
    BasisKind, ExperimentConfig, OracleBundle, ResultTable, RsiReport, SourceKind
)
from shared.utils.error_handling import RankDeficiencyError, log_error
from shared.utils.logging_utils import get_logger
from shared.utils.rng import derive_seed, make_rng

from ..basis.measurement import build_measurement_matrix
from ..basis.polynomials import build_transform
from ..canceller.estimation import build_mimo_system, cancel, estimate_weights, ls_estimate, qr_solve
from ..canceller.rsi import conditional_bias, decompose_rsi, rsi_components
from ..frontend.channel import convolve_valid, equivalent_rx_noise_power, gen_channel
from ..frontend.pa_models import truth_weights
from ..pilot.spectrum import bire_bound, gram_spectrum, nire_bounds, trace_inverse_bounds
from ..signals.sequences import gen_gaussian_sequence, gen_ofdm_like_sequence
from .simulation import Frontend, PilotPlan, TrialRunner, run_trials

logger = get_logger(__name__)

NOISE_MATCH_TOLERANCE = 0.05
EQUIVALENCE_TOLERANCE = 1e-8
INEQUALITY_RTOL = 1e-9

# Antenna slots keep the bias-trend draws apart from the simulation streams
_BIAS_SLOT = 10

CheckRow = Dict[str, object]


def inequality_row(check: str, instance: int, value: float, bound: float) -> CheckRow:
    """value <= bound up to a relative round-off allowance"""
    scale = max(abs(value), abs(bound), np.finfo(float).tiny)
    margin = (bound - value) / scale if math.isfinite(bound) else math.inf
    return {
        'check': check, 'instance': instance, 'value': value, 'bound': bound,
        'margin': margin, 'passed': bool(margin >= -INEQUALITY_RTOL)
    }


def tolerance_row(check: str, instance: int, error: float, tolerance: float) -> CheckRow:
    """error <= tolerance for relative-error checks"""
    margin = tolerance - error
    return {
        'check': check, 'instance': instance, 'value': error, 'bound': tolerance,
        'margin': margin, 'passed': bool(margin >= 0.0)
    }


def noise_match_rows(config: ExperimentConfig, instance: int) -> List[CheckRow]:
    """Monte-Carlo E||e_d||^2 against rho (tr(G_p^-1 G_d) + L_d) with no truncation"""
    master = config.master_seed
    basis = config.basis(config.compare_order, BasisKind.GLP)
    pilot = gen_gaussian_sequence(config.pilot_length, derive_seed(master, 'instance', instance, 0))
    data = gen_ofdm_like_sequence(config.data_symbols, config.symbol_length,
                                  derive_seed(master, 'instance', instance, 1))
    psi_p = build_measurement_matrix(pilot, basis).entries
    psi_d = build_measurement_matrix(data, basis, SourceKind.DATA).entries

    rng = make_rng(master, 'instance', instance, antenna=2)
    weights = (rng.standard_normal(basis.weight_count) + 1j * rng.standard_normal(basis.weight_count)) * 1e-3
    rho = config.budget.rx_noise_power_mw
    realizations = config.noise_realizations

    def noise(rows: int) -> np.ndarray:
        shape = (rows, realizations)
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(rho / 2.0)

    estimates, _, _ = qr_solve(psi_p, (psi_p @ weights)[:, None] + noise(psi_p.shape[0]))
    residuals = (psi_d @ weights)[:, None] + noise(psi_d.shape[0]) - psi_d @ estimates
    measured = float(np.mean(np.sum(np.abs(residuals) ** 2, axis=0)))

    rows_d = psi_d.shape[0]
    oracle = OracleBundle(
        run_id=f"noise_match:{instance}", true_weights=weights, psi_pilot=psi_p, psi_data=psi_d,
        eps_pilot=np.zeros(psi_p.shape[0]), eps_data=np.zeros(rows_d),
        noise_power_mw=rho, rx_power_mw=float(np.mean(np.abs(psi_d @ weights) ** 2))
    )
    analytic = rsi_components(oracle, np.zeros(rows_d)).exact * rows_d
    return [tolerance_row('noise_match', instance, abs(measured / analytic - 1.0), NOISE_MATCH_TOLERANCE)]


def equivalence_rows(runner: TrialRunner, order_p: int, oracle: OracleBundle) -> List[CheckRow]:
    """PH and GLP solves on a model-consistent pilot response agree"""
    basis = runner.config.basis(order_p, BasisKind.PH)
    pilot = runner.draw.random_pilots[0]
    data = runner.draw.data[0]
    rhs = oracle.psi_pilot @ oracle.true_weights

    ph_weights = ls_estimate(build_measurement_matrix(pilot, basis), rhs).weights
    glp_weights = ls_estimate(build_measurement_matrix(pilot, basis.with_kind(BasisKind.GLP)), rhs).weights
    ph_out = build_measurement_matrix(data, basis, SourceKind.DATA).entries @ ph_weights
    glp_out = oracle.psi_data @ glp_weights
    output_error = float(np.linalg.norm(ph_out - glp_out) / np.linalg.norm(ph_out))
    mapped = build_transform(basis).to_glp(ph_weights)
    weight_error = float(np.linalg.norm(glp_weights - mapped) / np.linalg.norm(glp_weights))
    return [
        tolerance_row('glp_equivalence', runner.trial, output_error, EQUIVALENCE_TOLERANCE),
        tolerance_row('transform_identity', runner.trial, weight_error, EQUIVALENCE_TOLERANCE)
    ]


def trial_rows(config: ExperimentConfig, frontend: Frontend, trial: int) -> Tuple[List[CheckRow], List[RsiReport]]:
    """Ledger ordering, BIRE, NIRE and trace bounds on one simulated trial"""
    order_p = config.compare_order
    runner = TrialRunner(config, frontend, trial, config.pilot_length)
    plan = PilotPlan('random_gaussian', per_trial=True)
    basis = config.basis(order_p, BasisKind.GLP)
    run_id = runner.run_id(plan.series, order_p)
    try:
        weights = estimate_weights(runner.draw.random_pilots, runner.pilot_transmission(plan).received, basis)
        weights.run_id = run_id
        oracle = runner.oracle(basis, plan, run_id)
        data_matrix = build_mimo_system(runner.draw.data, basis, SourceKind.DATA)
        residual = cancel(data_matrix, weights, runner.data_tx.received)
        parts = rsi_components(oracle, residual)
        report = decompose_rsi(oracle, weights, residual)
        spectrum_p = gram_spectrum(oracle.psi_pilot)
        spectrum_d = gram_spectrum(oracle.psi_data)
        rows = equivalence_rows(runner, order_p, oracle)
    except RankDeficiencyError as e:
        log_error(e, {'run_id': run_id, 'check': 'bound_check'})
        return [], []

    pilot_tail = float(np.sum(np.abs(oracle.eps_pilot) ** 2))
    nire_low, nire_high = nire_bounds(spectrum_p, spectrum_d)
    inverse_low, inverse_high = trace_inverse_bounds(spectrum_p)
    rows.extend([
        inequality_row('rsi_bound_ordering', trial, parts.exact, parts.bound),
        inequality_row('bire_rayleigh', trial, parts.bire_energy, bire_bound(spectrum_p, spectrum_d, pilot_tail)),
        inequality_row('nire_lower', trial, nire_low, parts.trace_ratio),
        inequality_row('nire_upper', trial, parts.trace_ratio, nire_high),
        inequality_row('trace_inverse_lower', trial, inverse_low, spectrum_p.tr_inverse),
        inequality_row('trace_inverse_upper', trial, spectrum_p.tr_inverse, inverse_high)
    ])
    return rows, [report]


def bias_trend_rows(config: ExperimentConfig, frontend: Frontend) -> List[CheckRow]:
    """Median conditional weight bias must shrink as the pilot grows"""
    master = config.master_seed
    basis = config.basis(config.compare_order, BasisKind.GLP)
    coefficients = frontend.truth.glp_coefficients(config.compare_order)
    medians = []
    for index, length in enumerate(config.bias_lengths):
        biases = []
        for seed_index in range(config.bias_seeds):
            slot = _BIAS_SLOT + index
            pilot = gen_gaussian_sequence(length, derive_seed(master, 'instance', seed_index, slot))
            channel = gen_channel(config.memory_lh, config.delay_spread_taps, config.asic_db,
                                  config.isolation_gain_db, derive_seed(master, 'channel', seed_index, slot))
            clean = convolve_valid(frontend.truth.apply(pilot.samples), channel.taps)
            psi = build_measurement_matrix(pilot, basis).entries
            biases.append(conditional_bias(
                psi, clean, truth_weights(coefficients, channel.taps),
                equivalent_rx_noise_power(channel, config.budget), config.noise_realizations,
                derive_seed(master, 'bias_noise', seed_index, slot)
            ))
        medians.append(float(np.median(biases)))

    return [
        {
            **inequality_row('bias_trend', index, medians[index], medians[index - 1]),
            'passed': bool(medians[index] < medians[index - 1])
        }
        for index in range(1, len(medians))
    ]


def run_bound_check(config: ExperimentConfig, workers: int = 1) -> Tuple[ResultTable, List[RsiReport]]:
    """All verification rows; the table passes only if every row does"""
    frontend = Frontend.from_config(config)
    table = ResultTable(experiment=config.experiment.value, columns=list(CSV_HEADERS['checks']))

    for instance in range(config.mc_instances):
        for row in noise_match_rows(config, instance):
            table.add_row(**row)

    per_trial = run_trials(lambda trial: trial_rows(config, frontend, trial), config.trials, workers)
    reports: List[RsiReport] = []
    for rows, trial_reports in per_trial:
        for row in rows:
            table.add_row(**row)
        reports.extend(trial_reports)

    for row in bias_trend_rows(config, frontend):
        table.add_row(**row)

    failed = table.failed_checks()
    if failed:
        logger.error(f"{len(failed)} bound-check rows failed", extra={'failed_checks': failed[:20]})
    else:
        logger.info(f"All {len(table.rows)} bound-check rows passed")
    return table, reports
