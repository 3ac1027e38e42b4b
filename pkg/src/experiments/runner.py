"""
Experiment dispatch, result files and the run manifest
"""

import os
import time
from typing import Callable, Dict, List, Optional, Tuple

from shared.config.settings import get_config
from shared.models.data_models import (
    ExperimentConfig, ExperimentKind, PilotCandidate, PilotDistribution, ResultTable, RsiReport,
    RunManifest
)
from shared.utils.error_handling import InvariantViolationError
from shared.utils.io_utils import write_manifest, write_reports, write_result_table, write_sequence
from shared.utils.logging_utils import get_logger

from ..pilot.selection import select_pilot
from .sweeps import (
    require_pilot_length, run_iq_sweep, run_mimo_sweep, run_order_sweep, run_pilot_compare,
    run_pilot_length_sweep
)
from .verification import run_bound_check

logger = get_logger(__name__)

TableRunner = Callable[[ExperimentConfig, int], Tuple[ResultTable, List[RsiReport]]]

TABLE_RUNNERS: Dict[ExperimentKind, TableRunner] = {
    ExperimentKind.ORDER_SWEEP: run_order_sweep,
    ExperimentKind.PILOT_LENGTH_SWEEP: run_pilot_length_sweep,
    ExperimentKind.PILOT_COMPARE: run_pilot_compare,
    ExperimentKind.MIMO_SWEEP: run_mimo_sweep,
    ExperimentKind.IQ_SWEEP: run_iq_sweep,
    ExperimentKind.BOUND_CHECK: run_bound_check
}

CONFIG_FILE = "config.txt"


def run_select_pilot(config: ExperimentConfig, output_dir: Optional[str] = None) -> PilotCandidate:
    """Pick a pilot at the comparison order; optionally export the ensemble and the sequence"""
    basis = config.basis(config.compare_order)
    require_pilot_length(config.pilot_length, basis)
    export_path = os.path.join(output_dir, "select_pilot_ensemble.csv") if output_dir else None
    best = select_pilot(
        config.ensemble_size, config.pilot_length, PilotDistribution(config.pilot_distribution),
        basis, config.master_seed, export_path
    )
    if output_dir:
        write_sequence(os.path.join(output_dir, "select_pilot_sequence.csv"), best.sequence)
    return best


def run_experiment(config: ExperimentConfig, output_dir: str, workers: Optional[int] = None) -> RunManifest:
    """Run, write every output file plus manifest.json, then enforce bound-check results"""
    start_time = time.time()
    workers = workers or get_config().runtime.workers
    name = config.experiment.value
    os.makedirs(output_dir, exist_ok=True)
    logger.info(f"Starting experiment {name}", extra={
        'experiment': name, 'profile': config.profile, 'trials': config.trials, 'workers': workers
    })

    table: Optional[ResultTable] = None
    if config.experiment is ExperimentKind.SELECT_PILOT:
        run_select_pilot(config, output_dir)
        outputs = ["select_pilot_ensemble.csv", "select_pilot_sequence.csv"]
    else:
        table, reports = TABLE_RUNNERS[config.experiment](config, workers)
        write_result_table(os.path.join(output_dir, f"{name}.csv"), table)
        write_reports(os.path.join(output_dir, f"{name}_trials.csv"), reports)
        outputs = [f"{name}.csv", f"{name}_trials.csv"]

    config.to_file(os.path.join(output_dir, CONFIG_FILE))
    outputs.append(CONFIG_FILE)
    manifest = RunManifest(
        experiment=name,
        config_hash=config.config_hash(),
        master_seed=config.master_seed,
        outputs=outputs
    )
    write_manifest(output_dir, manifest)

    latency_ms = int((time.time() - start_time) * 1000)
    logger.log_experiment(name, config.master_seed, config.trials, output_dir, latency_ms)

    if table is not None and not table.passed:
        failed = table.failed_checks()
        raise InvariantViolationError(f"{len(failed)} verification checks failed.", failed)
    return manifest
