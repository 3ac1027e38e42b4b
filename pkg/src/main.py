"""
Command-line entry point for the D-SIC experiments

    python -m src.main order-sweep --profile desk --seed 7 --out results/order
    python -m src.main bound-check --config runs/bound.cfg
"""

import argparse
import json
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Run from the repository root or from src/
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from shared.config.constants import EXIT_CODES, PROFILES  # noqa: E402
from shared.config.settings import get_config  # noqa: E402
from shared.models.data_models import ExperimentConfig, ExperimentKind  # noqa: E402
from shared.utils.error_handling import ConfigError, create_error_summary, log_error  # noqa: E402
from shared.utils.logging_utils import get_logger  # noqa: E402

from src.experiments.runner import run_experiment  # noqa: E402

load_dotenv()

logger = get_logger(__name__)

SUBCOMMANDS = {
    'order-sweep': ExperimentKind.ORDER_SWEEP,
    'pilot-length': ExperimentKind.PILOT_LENGTH_SWEEP,
    'pilot-compare': ExperimentKind.PILOT_COMPARE,
    'mimo': ExperimentKind.MIMO_SWEEP,
    'iq': ExperimentKind.IQ_SWEEP,
    'bound-check': ExperimentKind.BOUND_CHECK,
    'select-pilot': ExperimentKind.SELECT_PILOT
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsic-sim",
        description="Digital self-interference cancellation experiments"
    )
    parser.add_argument("command", choices=sorted(SUBCOMMANDS), help="Experiment to run")
    parser.add_argument("--config", type=str, default=None,
                        help="Flat key=value experiment config (schema_version=1)")
    parser.add_argument("--seed", type=int, default=None, help="Master seed (u64)")
    parser.add_argument("--out", type=str, default=None,
                        help="Output directory (default: $DSIC_OUTPUT_DIR/<experiment>)")
    parser.add_argument("--profile", type=str, default=None, choices=sorted(PROFILES),
                        help="Parameter profile when no --config is given")
    parser.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials")
    parser.add_argument("--workers", type=int, default=None, help="Concurrent trials")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file or profile defaults, with the subcommand and CLI overrides applied"""
    experiment = SUBCOMMANDS[args.command]
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {args.seed}.", "master_seed")

    if args.config:
        values = ExperimentConfig.from_file(args.config).to_dict()
        if args.profile and args.profile != values['profile']:
            raise ConfigError(
                f"--profile {args.profile} conflicts with profile={values['profile']} in {args.config}.",
                "profile"
            )
        values['experiment'] = experiment.value
        if args.seed is not None:
            values['master_seed'] = args.seed
        if args.trials is not None:
            values['trials'] = args.trials
        return ExperimentConfig.from_dict(values)

    overrides = {}
    if args.seed is not None:
        overrides['master_seed'] = args.seed
    if args.trials is not None:
        overrides['trials'] = args.trials
    profile = args.profile or get_config().runtime.profile
    return ExperimentConfig.from_profile(experiment, profile, **overrides)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        output_dir = args.out or os.path.join(get_config().runtime.output_dir, config.experiment.value)
        if args.workers is not None and args.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {args.workers}.", "workers")
        manifest = run_experiment(config, output_dir, args.workers)
    except Exception as e:
        log_error(e, {'command': args.command})
        summary = create_error_summary(e)
        print(json.dumps(summary['body']), file=sys.stderr)
        return summary['exit_code']

    print(json.dumps(manifest.to_dict()))
    return EXIT_CODES['OK']


if __name__ == "__main__":
    sys.exit(main())
