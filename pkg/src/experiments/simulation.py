"""
Monte-Carlo trial engine

One trial draws the data sequences, the SI channels and the random pilots
from counter-based streams keyed by (master_seed, stream, trial). Everything
that follows (PA, channel, Tx/Rx noise, LS, cancellation, RSI ledger) is
deterministic given that draw, so every pilot kind and every order within a
trial sees common random numbers.

Signals are carried as (rows, M_rx) arrays throughout; a single antenna is
the M = 1 case of the same code path.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from shared.models.data_models import (
    BasisConfig, BasisKind, ChannelModel, ComplexSequence, ExperimentConfig, LinkBudget,
    OracleBundle, PilotDistribution, RsiReport, SourceKind
)
from shared.utils.error_handling import RankDeficiencyError, log_error
from shared.utils.logging_utils import get_logger
from shared.utils.rng import derive_seed

from ..canceller.estimation import build_mimo_system, cancel, estimate_weights
from ..canceller.rsi import decompose_rsi, measured_report
from ..frontend.channel import convolve_valid, equivalent_rx_noise_power, gen_channel
from ..frontend.impairments import NoiseStage, add_noise, apply_iq_imbalance
from ..frontend.pa_models import TruthModel, build_truth, operating_drive_power_mw, truth_weights
from ..signals.sequences import gen_ofdm_like_sequence, generate_pilot

logger = get_logger(__name__)

T = TypeVar('T')


@dataclass
class Frontend:
    """PA truth, link budget and channel statistics shared by every trial of a sweep point"""
    truth: TruthModel
    budget: LinkBudget
    antennas: int
    memory_lh: int
    asic_db: float
    isolation_gain_db: float
    delay_spread_taps: float
    irr_db: float = math.inf

    @classmethod
    def from_config(cls, config: ExperimentConfig, antennas: int = 1, irr_db: float = math.inf,
                    max_order: Optional[int] = None) -> 'Frontend':
        """Drive level split over the Tx antennas at fixed total power"""
        drive = operating_drive_power_mw(config.budget, config.rapp, antennas)
        truth = build_truth(
            config.truth_model, config.rapp, drive, config.truth_order,
            seed=derive_seed(config.master_seed, 'pa_fit')
        )
        # Populate the coefficient cache before trials share the truth across threads
        truth.glp_coefficients(max_order or max(max(config.orders), config.compare_order, config.iq_order))
        return cls(
            truth=truth,
            budget=config.budget,
            antennas=antennas,
            memory_lh=config.memory_lh,
            asic_db=config.asic_db,
            isolation_gain_db=config.isolation_gain_db,
            delay_spread_taps=config.delay_spread_taps,
            irr_db=irr_db
        )

    def with_irr(self, irr_db: float) -> 'Frontend':
        return replace(self, irr_db=irr_db)


@dataclass
class TrialDraw:
    """Random quantities of one trial"""
    trial: int
    master_seed: int
    data: List[ComplexSequence]
    channels: List[List[ChannelModel]]
    random_pilots: List[ComplexSequence]


@dataclass
class Transmission:
    """SI seen at the Rx antennas over the valid rows"""
    clean: np.ndarray
    received: np.ndarray
    noise_power_mw: float

    @property
    def rx_power_mw(self) -> float:
        return float(np.mean(np.abs(self.received) ** 2))


@dataclass
class PilotPlan:
    """Pilot used by one series; global LS estimates on the data itself"""
    series: str
    sequences: Optional[List[ComplexSequence]] = None
    per_trial: bool = False
    criterion_value: float = math.nan

    @property
    def global_ls(self) -> bool:
        return self.sequences is None and not self.per_trial


def draw_trial(config: ExperimentConfig, trial: int, antennas: int, pilot_length: int,
               pilot_distribution: PilotDistribution = PilotDistribution.GAUSSIAN) -> TrialDraw:
    """Data, channels and random pilots; channel (m, k) uses antenna slot m * M + k"""
    master = config.master_seed
    data = [
        gen_ofdm_like_sequence(config.data_symbols, config.symbol_length,
                               derive_seed(master, 'data', trial, antenna))
        for antenna in range(antennas)
    ]
    channels = [
        [
            gen_channel(config.memory_lh, config.delay_spread_taps, config.asic_db,
                        config.isolation_gain_db,
                        derive_seed(master, 'channel', trial, rx * antennas + tx))
            for tx in range(antennas)
        ]
        for rx in range(antennas)
    ]
    pilots = [
        generate_pilot(pilot_distribution, pilot_length, derive_seed(master, 'pilot', trial, antenna))
        for antenna in range(antennas)
    ]
    return TrialDraw(trial=trial, master_seed=master, data=data, channels=channels, random_pilots=pilots)


def transmit(frontend: Frontend, draw: TrialDraw, sequences: Sequence[ComplexSequence],
             source_kind: SourceKind) -> Transmission:
    """x -> I/Q imbalance -> PA -> + z_t -> SI channel -> + z_r, per Rx antenna"""
    source = SourceKind(source_kind).value
    pa_clean, pa_noisy = [], []
    for antenna, sequence in enumerate(sequences):
        drive = sequence if math.isinf(frontend.irr_db) else apply_iq_imbalance(sequence, frontend.irr_db)
        output = ComplexSequence(frontend.truth.apply(drive.samples))
        seed = derive_seed(draw.master_seed, f'tx_noise_{source}', draw.trial, antenna)
        pa_clean.append(output.samples)
        pa_noisy.append(add_noise(output, frontend.budget, NoiseStage.TX, seed).samples)

    clean_columns, received_columns, noise_powers = [], [], []
    for rx, row in enumerate(draw.channels):
        clean = sum(convolve_valid(pa_clean[tx], channel.taps) for tx, channel in enumerate(row))
        noisy = sum(convolve_valid(pa_noisy[tx], channel.taps) for tx, channel in enumerate(row))
        seed = derive_seed(draw.master_seed, f'rx_noise_{source}', draw.trial, rx)
        received = add_noise(ComplexSequence(noisy), frontend.budget, NoiseStage.RX, seed).samples
        clean_columns.append(clean)
        received_columns.append(received)
        # Tx noise of all antennas reaches this Rx through the stacked taps
        stacked = ChannelModel(np.concatenate([channel.taps for channel in row]))
        noise_powers.append(equivalent_rx_noise_power(stacked, frontend.budget))

    return Transmission(
        clean=np.column_stack(clean_columns),
        received=np.column_stack(received_columns),
        noise_power_mw=float(np.mean(noise_powers))
    )


class TrialRunner:
    """Evaluates any number of (basis, pilot) points against one trial draw"""

    def __init__(self, config: ExperimentConfig, frontend: Frontend, trial: int, pilot_length: int,
                 pilot_distribution: PilotDistribution = PilotDistribution.GAUSSIAN,
                 experiment: Optional[str] = None):
        self.config = config
        self.frontend = frontend
        self.trial = trial
        self.experiment = experiment or config.experiment.value
        self.draw = draw_trial(config, trial, frontend.antennas, pilot_length, pilot_distribution)
        self.data_tx = transmit(frontend, self.draw, self.draw.data, SourceKind.DATA)
        self._pilot_tx: Dict[int, Tuple[List[ComplexSequence], Transmission]] = {}

    def run_id(self, series: str, sweep_variable: float) -> str:
        return f"{self.config.master_seed}:{self.trial}:{series}:{sweep_variable:g}"

    def pilot_sequences(self, plan: PilotPlan) -> List[ComplexSequence]:
        if plan.global_ls:
            return self.draw.data
        return self.draw.random_pilots if plan.per_trial else plan.sequences

    def pilot_transmission(self, plan: PilotPlan) -> Transmission:
        if plan.global_ls:
            return self.data_tx
        sequences = self.pilot_sequences(plan)
        key = id(sequences)
        if key not in self._pilot_tx:
            self._pilot_tx[key] = (sequences, transmit(self.frontend, self.draw, sequences, SourceKind.PILOT))
        return self._pilot_tx[key][1]

    def oracle(self, basis: BasisConfig, plan: PilotPlan, run_id: str) -> OracleBundle:
        """GLP truth weights and truncation errors for this trial"""
        glp = basis.with_kind(BasisKind.GLP)
        psi_d = build_mimo_system(self.draw.data, glp, SourceKind.DATA).entries
        psi_p = psi_d if plan.global_ls else build_mimo_system(self.pilot_sequences(plan), glp).entries
        coefficients = self.frontend.truth.glp_coefficients(basis.order_p)
        true_weights = np.column_stack([
            np.concatenate([truth_weights(coefficients, channel.taps) for channel in row])
            for row in self.draw.channels
        ])
        pilot_tx = self.pilot_transmission(plan)
        return OracleBundle(
            run_id=run_id,
            true_weights=true_weights,
            psi_pilot=psi_p,
            psi_data=psi_d,
            eps_pilot=pilot_tx.clean - psi_p @ true_weights,
            eps_data=self.data_tx.clean - psi_d @ true_weights,
            noise_power_mw=self.data_tx.noise_power_mw,
            rx_power_mw=self.data_tx.rx_power_mw,
            global_ls=plan.global_ls
        )

    def evaluate(self, basis: BasisConfig, plan: PilotPlan, sweep_variable: float,
                 with_oracle: bool = True) -> Optional[RsiReport]:
        """Estimate, cancel and report; None when the LS problem is rank deficient"""
        run_id = self.run_id(plan.series, sweep_variable)
        try:
            pilot_tx = self.pilot_transmission(plan)
            weights = estimate_weights(self.pilot_sequences(plan), pilot_tx.received, basis)
            weights.run_id = run_id
            data_matrix = build_mimo_system(self.draw.data, weights.basis, SourceKind.DATA)
            residual = cancel(data_matrix, weights, self.data_tx.received)
            use_oracle = (with_oracle and basis.kind is not BasisKind.PH_IQ
                          and math.isinf(self.frontend.irr_db))
            if use_oracle:
                report = decompose_rsi(self.oracle(basis, plan, run_id), weights, residual)
            else:
                report = measured_report(
                    residual, self.data_tx.noise_power_mw, self.data_tx.rx_power_mw, run_id
                )
        except RankDeficiencyError as e:
            log_error(e, {'run_id': run_id, 'order_p': basis.order_p, 'series': plan.series})
            logger.warning(f"Skipping trial {self.trial} for {plan.series} @ {sweep_variable}: rank deficient")
            return None

        logger.log_trial(self.experiment, self.trial, run_id, report.rsi_dbm)
        return report


def run_trials(trial_fn: Callable[[int], T], trials: int, workers: int = 1) -> List[T]:
    """Map trial_fn over trial indices; results come back in trial order"""
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(trial_fn, range(trials)))
    return [trial_fn(trial) for trial in range(trials)]
