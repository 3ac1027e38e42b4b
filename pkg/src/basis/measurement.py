"""
Measurement matrix construction
"""

from dataclasses import replace

import numpy as np

from shared.models.data_models import BasisConfig, ComplexSequence, MeasurementMatrix, SourceKind
from shared.utils.error_handling import InvalidConfigurationError
from shared.utils.logging_utils import get_logger

from .polynomials import branch_matrix

logger = get_logger(__name__)


def build_measurement_matrix(seq: ComplexSequence, config: BasisConfig,
                             source_kind: SourceKind = SourceKind.PILOT) -> MeasurementMatrix:
    """Rows n = L_h .. L-1; column (l, b) holds branch b evaluated at x(n - l)"""
    config = replace(config, antennas_m=1)
    length = seq.length
    if length < config.taps:
        raise InvalidConfigurationError(
            f"Sequence of length {length} is shorter than the {config.taps} channel taps.", "length"
        )

    branches = branch_matrix(seq.samples, config)
    lh = config.memory_lh
    entries = np.concatenate(
        [branches[lh - delay: length - delay] for delay in range(config.taps)], axis=1
    )
    matrix = MeasurementMatrix(entries=entries, basis=config, source_kind=SourceKind(source_kind))

    if matrix.source_kind is SourceKind.PILOT and matrix.is_underdetermined:
        logger.warning(
            "Pilot measurement matrix has fewer rows than columns",
            extra={'rows': matrix.rows, 'columns': matrix.columns, 'order_p': config.order_p}
        )
    return matrix
