"""
Gram-matrix spectra, Shannon rank and the spectral bounds used for pilot design
"""

from typing import Tuple, Union

import numpy as np
from scipy import linalg
from scipy.stats import entropy

from shared.config.settings import get_config
from shared.models.data_models import GramSpectrum, MeasurementMatrix
from shared.utils.error_handling import (
    EigenResidualError, EmptySequenceError, SingularGramError, ValidationError, validate_finite
)


def spectrum_from_gram(gram: np.ndarray) -> GramSpectrum:
    """Eigen-diagnostics of a Hermitian PSD matrix"""
    gram = np.asarray(gram, dtype=np.complex128)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.size == 0:
        raise ValidationError(f"Gram matrix must be square and nonempty, got shape {gram.shape}.", "gram")
    validate_finite(gram, "gram")
    gram = 0.5 * (gram + gram.conj().T)
    numerics = get_config().numerics

    eigenvalues, eigenvectors = linalg.eigh(gram)
    scale = max(float(np.max(np.abs(eigenvalues))), np.finfo(float).tiny)
    residual = np.linalg.norm(gram @ eigenvectors - eigenvectors * eigenvalues, axis=0)
    if np.any(residual > numerics.eig_residual_tolerance * scale):
        raise EigenResidualError(
            f"Eigen-decomposition residual {float(residual.max()):.3e} exceeds tolerance.",
            residual=float(residual.max())
        )

    eigenvalues = eigenvalues[::-1]
    if eigenvalues[-1] < -numerics.psd_tolerance * scale:
        raise ValidationError(f"Gram matrix is not PSD (lambda_min = {eigenvalues[-1]:.3e}).", "gram")
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    lambda_max = float(eigenvalues[0])
    lambda_min = float(eigenvalues[-1])
    singular = lambda_min <= 0.0
    return GramSpectrum(
        gram=gram,
        eigenvalues=eigenvalues,
        trace=float(np.trace(gram).real),
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        cond2=np.inf if singular else lambda_max / lambda_min,
        shannon_rank=shannon_rank(eigenvalues),
        tr_inverse=np.inf if singular else float(np.sum(1.0 / eigenvalues))
    )


def gram_spectrum(matrix: Union[MeasurementMatrix, np.ndarray]) -> GramSpectrum:
    """Spectrum of G = Phi^H Phi"""
    entries = matrix.entries if isinstance(matrix, MeasurementMatrix) else np.asarray(matrix, dtype=np.complex128)
    if entries.size == 0:
        raise EmptySequenceError("Measurement matrix is empty.", "matrix")
    validate_finite(entries, "matrix")
    return spectrum_from_gram(entries.conj().T @ entries)


def shannon_rank(eigenvalues: np.ndarray) -> float:
    """2 ** H(lambda / sum(lambda)) in bits, with 0 log 0 = 0"""
    values = np.asarray(eigenvalues, dtype=float).ravel()
    if values.size == 0 or np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValidationError("Eigenvalues must be finite and non-negative.", "eigenvalues")
    if values.sum() <= 0.0:
        raise SingularGramError("Shannon rank is undefined for an all-zero spectrum.")
    rank = float(2.0 ** entropy(values, base=2))
    return min(max(rank, 1.0), float(values.size))


def criterion(spectrum: GramSpectrum) -> float:
    """Shannon rank times the smallest eigenvalue"""
    return spectrum.shannon_rank * spectrum.lambda_min


def _require_invertible(spectrum: GramSpectrum) -> None:
    if spectrum.is_singular:
        raise SingularGramError()


def bire_bound(spectrum_p: GramSpectrum, spectrum_d: GramSpectrum, trunc_pilot_power: float) -> float:
    """Rayleigh-quotient bound on ||Psi_d Psi_p^+ eps_p||^2 given ||eps_p||^2"""
    _require_invertible(spectrum_p)
    return spectrum_d.lambda_max * spectrum_p.cond2 / spectrum_p.lambda_min * trunc_pilot_power


def nire_bounds(spectrum_p: GramSpectrum, spectrum_d: GramSpectrum) -> Tuple[float, float]:
    """Lower and upper bounds on tr(G_p^-1 G_d)"""
    _require_invertible(spectrum_p)
    lower = max(spectrum_d.lambda_min * spectrum_p.tr_inverse, spectrum_d.trace / spectrum_p.lambda_max)
    upper = min(spectrum_d.lambda_max * spectrum_p.tr_inverse, spectrum_d.trace / spectrum_p.lambda_min)
    return lower, upper


def trace_inverse_bounds(spectrum: GramSpectrum) -> Tuple[float, float]:
    """Cauchy-Schwarz bounds L_w^2/tr(G) <= tr(G^-1) <= L_w^2 cond2(G)/tr(G)"""
    _require_invertible(spectrum)
    squared = float(spectrum.dimension) ** 2
    return squared / spectrum.trace, squared * spectrum.cond2 / spectrum.trace


def trace_ratio(spectrum_p: GramSpectrum, spectrum_d: GramSpectrum) -> float:
    """tr(G_p^-1 G_d) by a Cholesky solve"""
    _require_invertible(spectrum_p)
    factor = linalg.cho_factor(spectrum_p.gram)
    return float(np.trace(linalg.cho_solve(factor, spectrum_d.gram)).real)
