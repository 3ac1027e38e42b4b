"""
Pilot design: Gram spectra, the selection criterion and ensemble search
"""

from .spectrum import (
    spectrum_from_gram,
    gram_spectrum,
    shannon_rank,
    criterion,
    bire_bound,
    nire_bounds,
    trace_inverse_bounds,
    trace_ratio
)
from .selection import (
    check_pilot_length,
    candidate_seed,
    evaluate_candidate,
    evaluate_ensemble,
    best_candidate,
    export_ensemble,
    select_pilot
)

__all__ = [
    "spectrum_from_gram",
    "gram_spectrum",
    "shannon_rank",
    "criterion",
    "bire_bound",
    "nire_bounds",
    "trace_inverse_bounds",
    "trace_ratio",
    "check_pilot_length",
    "candidate_seed",
    "evaluate_candidate",
    "evaluate_ensemble",
    "best_candidate",
    "export_ensemble",
    "select_pilot"
]
