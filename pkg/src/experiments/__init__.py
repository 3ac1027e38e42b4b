"""
Monte-Carlo experiments behind the CLI
"""

from .simulation import (
    Frontend,
    TrialDraw,
    Transmission,
    PilotPlan,
    TrialRunner,
    draw_trial,
    transmit,
    run_trials
)
from .sweeps import (
    PILOT_SERIES,
    median_iqr,
    summarize,
    mark_optimal_order,
    run_order_sweep,
    run_pilot_compare,
    run_pilot_length_sweep,
    run_mimo_sweep,
    run_iq_sweep
)
from .verification import run_bound_check
from .runner import TABLE_RUNNERS, run_select_pilot, run_experiment

__all__ = [
    "Frontend",
    "TrialDraw",
    "Transmission",
    "PilotPlan",
    "TrialRunner",
    "draw_trial",
    "transmit",
    "run_trials",
    "PILOT_SERIES",
    "median_iqr",
    "summarize",
    "mark_optimal_order",
    "run_order_sweep",
    "run_pilot_compare",
    "run_pilot_length_sweep",
    "run_mimo_sweep",
    "run_iq_sweep",
    "run_bound_check",
    "TABLE_RUNNERS",
    "run_select_pilot",
    "run_experiment"
]
