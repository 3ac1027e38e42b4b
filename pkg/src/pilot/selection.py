"""
Ensemble pilot selection by the Shannon-rank criterion
"""

from typing import List, Optional

from shared.config.constants import CSV_HEADERS, ERROR_MESSAGES
from shared.models.data_models import BasisConfig, BasisKind, PilotCandidate, PilotDistribution
from shared.utils.error_handling import InvalidConfigurationError, validate_sequence_length
from shared.utils.io_utils import write_csv
from shared.utils.logging_utils import get_logger
from shared.utils.rng import derive_seed

from ..basis.measurement import build_measurement_matrix
from ..signals.sequences import generate_pilot, stats
from .spectrum import criterion, gram_spectrum

logger = get_logger(__name__)


def _criterion_basis(basis: BasisConfig) -> BasisConfig:
    """Single-antenna GLP structure used for scoring; PH+IQ is scored as is"""
    basis = BasisConfig(order_p=basis.order_p, memory_lh=basis.memory_lh, kind=basis.kind)
    return basis if basis.kind is BasisKind.PH_IQ else basis.with_kind(BasisKind.GLP)


def check_pilot_length(length: int, basis: BasisConfig) -> None:
    """Require L_p - L_h >= L_w rows"""
    validate_sequence_length(length, basis.taps)
    rows = length - basis.memory_lh
    if rows < basis.weight_count:
        raise InvalidConfigurationError(
            f"{ERROR_MESSAGES['pilot_too_short']} L_p={length}, L_h={basis.memory_lh}, "
            f"L_w={basis.weight_count}.",
            "length"
        )


def candidate_seed(seed: int, index: int) -> int:
    return derive_seed(seed, 'pilot_ensemble', index)


def evaluate_candidate(index: int, length: int, distribution: PilotDistribution,
                       basis: BasisConfig, seed: int) -> PilotCandidate:
    sequence = generate_pilot(distribution, length, candidate_seed(seed, index))
    spectrum = gram_spectrum(build_measurement_matrix(sequence, basis))
    return PilotCandidate(
        sequence=sequence,
        spectrum=spectrum,
        criterion_value=criterion(spectrum),
        papr_db=stats(sequence).papr_db,
        ensemble_index=index
    )


def evaluate_ensemble(ensemble_size: int, length: int, distribution: PilotDistribution,
                      basis: BasisConfig, seed: int) -> List[PilotCandidate]:
    """Score every candidate; returned in index order"""
    validate_sequence_length(ensemble_size, field="ensemble_size")
    scoring_basis = _criterion_basis(basis)
    check_pilot_length(length, scoring_basis)
    distribution = PilotDistribution(distribution)
    return [
        evaluate_candidate(index, length, distribution, scoring_basis, seed)
        for index in range(ensemble_size)
    ]


def best_candidate(candidates: List[PilotCandidate]) -> PilotCandidate:
    """Largest criterion; ties go to lower PAPR, then lower index"""
    return min(candidates, key=lambda c: (-c.criterion_value, c.papr_db, c.ensemble_index))


def export_ensemble(path: str, candidates: List[PilotCandidate]) -> str:
    return write_csv(path, CSV_HEADERS['ensemble'], [candidate.to_csv_row() for candidate in candidates])


def select_pilot(ensemble_size: int, length: int, distribution: PilotDistribution, basis: BasisConfig,
                 seed: int, export_path: Optional[str] = None) -> PilotCandidate:
    """Best of ensemble_size generated pilots"""
    distribution = PilotDistribution(distribution)
    candidates = evaluate_ensemble(ensemble_size, length, distribution, basis, seed)
    best = best_candidate(candidates)
    if export_path:
        export_ensemble(export_path, candidates)

    logger.log_pilot_selection(
        ensemble_size, distribution.value, best.ensemble_index, best.criterion_value, best.papr_db
    )
    return best
