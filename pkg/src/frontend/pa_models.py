"""
Power amplifier models and the ground-truth SI generators built on them

Amplitudes are in sqrt(mW). A truth model maps a unit-power digital sequence
x(n) to the PA output s(n) = F(g x(n)), where g is the RMS drive amplitude.
Its GLP coefficients are the projections E[s psi_p*(x)] for x ~ CN(0, 1).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy import integrate, linalg

from shared.config.constants import NUMERICS
from shared.models.data_models import BasisConfig, BasisKind, LinkBudget, RappParams
from shared.utils.error_handling import (
    InvalidConfigurationError, RankDeficiencyError, validate_odd_order, validate_positive
)
from shared.utils.logging_utils import get_logger
from shared.utils.rng import make_rng
from shared.utils.units import dbm_to_mw

from ..basis.polynomials import branch_matrix, build_transform, laguerre_l1, phi

logger = get_logger(__name__)


def rapp_apply(x, params: RappParams):
    """RAPP AM-AM with AM-PM applied as a phase rotation"""
    x_arr = np.asarray(x, dtype=np.complex128)
    amplitude = np.abs(x_arr)
    gain = params.linear_gain
    two_s = 2.0 * params.smooth_s
    compression = (1.0 + (gain * amplitude / params.sat_amplitude) ** two_s) ** (-1.0 / two_s)
    theta = params.phase_gain_b * amplitude ** params.phase_smooth_q / (
        1.0 + (amplitude / params.phase_sat_bsat) ** params.phase_smooth_q
    )
    out = gain * x_arr * compression * np.exp(1j * theta)
    return out.item() if np.ndim(x) == 0 else out


def operating_drive_power_mw(budget: LinkBudget, params: RappParams, antennas: int = 1) -> float:
    """Mean PA input power so the small-signal output equals the Tx power, split over antennas"""
    return float(dbm_to_mw(budget.tx_power_dbm - params.linear_gain_db)) / antennas


class TruthModel:
    """Memoryless PA truth driven at a fixed RMS amplitude"""

    def __init__(self, drive_power_mw: float):
        validate_positive(drive_power_mw, "drive_power_mw")
        self.drive_power_mw = float(drive_power_mw)
        self.drive_gain = math.sqrt(self.drive_power_mw)

    def response(self, drive: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, x: np.ndarray) -> np.ndarray:
        """PA output for the unit-power digital sequence x"""
        return self.response(self.drive_gain * np.asarray(x, dtype=np.complex128))

    def glp_coefficients(self, order_p: int) -> np.ndarray:
        raise NotImplementedError

    def output_power(self) -> float:
        raise NotImplementedError

    def tail_power(self, order_p: int) -> float:
        """Output power outside the GLP orders <= order_p"""
        kept = float(np.sum(np.abs(self.glp_coefficients(order_p)) ** 2))
        return max(self.output_power() - kept, 0.0)


class RappTruth(TruthModel):
    """Infinite-order RAPP truth; GLP coefficients by adaptive quadrature"""

    def __init__(self, params: RappParams, drive_power_mw: float,
                 max_order: int = NUMERICS['truth_max_order']):
        super().__init__(drive_power_mw)
        self.params = params
        self.max_order = validate_odd_order(max_order, "max_order")
        self._coefficients: Optional[np.ndarray] = None
        self._output_power: Optional[float] = None

    def response(self, drive: np.ndarray) -> np.ndarray:
        return rapp_apply(drive, self.params)

    def _radial(self, t: float) -> complex:
        """F(g sqrt(t)) for a real positive input"""
        return complex(rapp_apply(self.drive_gain * math.sqrt(t), self.params))

    def _project(self, order_p: int) -> complex:
        index = (order_p - 1) // 2
        scale = math.sqrt(2.0 / (order_p + 1))

        def integrand(t: float, part) -> float:
            value = self._radial(t) * math.sqrt(t) * laguerre_l1(index, t) * math.exp(-t)
            return part(value)

        limit = NUMERICS['truth_quadrature_limit']
        real, _ = integrate.quad(integrand, 0.0, np.inf, args=(lambda v: v.real,), limit=limit,
                                 epsabs=1e-12, epsrel=1e-10)
        imag, _ = integrate.quad(integrand, 0.0, np.inf, args=(lambda v: v.imag,), limit=limit,
                                 epsabs=1e-12, epsrel=1e-10)
        return scale * complex(real, imag)

    def glp_coefficients(self, order_p: int) -> np.ndarray:
        validate_odd_order(order_p, "order_p")
        if order_p > self.max_order:
            raise InvalidConfigurationError(
                f"RAPP truth is expanded up to order {self.max_order}, got {order_p}.", "order_p"
            )
        if self._coefficients is None:
            self._coefficients = np.array(
                [self._project(p) for p in range(1, self.max_order + 1, 2)], dtype=np.complex128
            )
        return self._coefficients[: (order_p + 1) // 2].copy()

    def output_power(self) -> float:
        if self._output_power is None:
            value, _ = integrate.quad(
                lambda t: abs(self._radial(t)) ** 2 * math.exp(-t), 0.0, np.inf,
                limit=NUMERICS['truth_quadrature_limit']
            )
            self._output_power = float(value)
        return self._output_power


class PolynomialTruth(TruthModel):
    """Finite odd-order PH polynomial truth, s = sum_p c_p phi_p(g x)"""

    def __init__(self, coefficients: np.ndarray, drive_power_mw: float):
        super().__init__(drive_power_mw)
        self.coefficients = np.asarray(coefficients, dtype=np.complex128).ravel()
        if self.coefficients.size == 0:
            raise InvalidConfigurationError("Polynomial truth needs at least one coefficient.", "coefficients")
        self.order = 2 * self.coefficients.size - 1
        orders = np.arange(1, self.order + 1, 2)
        # PH weights seen by the unit-power sequence: c_p g^p
        self.unit_weights = self.coefficients * self.drive_gain ** orders
        block = build_transform(BasisConfig(order_p=self.order, memory_lh=0, kind=BasisKind.GLP)).block
        self._glp = linalg.solve_triangular(block, self.unit_weights)

    @classmethod
    def from_glp(cls, glp_coefficients: np.ndarray, drive_power_mw: float) -> 'PolynomialTruth':
        """Truth with prescribed GLP coefficients at the given drive"""
        glp_coefficients = np.asarray(glp_coefficients, dtype=np.complex128).ravel()
        order = 2 * glp_coefficients.size - 1
        block = build_transform(BasisConfig(order_p=order, memory_lh=0)).block
        unit_weights = block @ glp_coefficients
        orders = np.arange(1, order + 1, 2)
        return cls(unit_weights / math.sqrt(drive_power_mw) ** orders, drive_power_mw)

    def response(self, drive: np.ndarray) -> np.ndarray:
        drive = np.asarray(drive, dtype=np.complex128)
        out = np.zeros_like(drive)
        for index, coefficient in enumerate(self.coefficients):
            out = out + coefficient * phi(drive, 2 * index + 1)
        return out

    def glp_coefficients(self, order_p: int) -> np.ndarray:
        validate_odd_order(order_p, "order_p")
        count = (order_p + 1) // 2
        result = np.zeros(count, dtype=np.complex128)
        kept = min(count, self._glp.size)
        result[:kept] = self._glp[:kept]
        return result

    def output_power(self) -> float:
        return float(np.sum(np.abs(self._glp) ** 2))


@dataclass
class PolynomialPA:
    """LS polynomial fit of a RAPP PA at one drive level"""
    coefficients: np.ndarray
    order: int
    drive_power_mw: float
    residual_power_mw: float
    output_power_mw: float
    condition_number: float
    params: RappParams = field(default_factory=RappParams)

    @property
    def relative_residual(self) -> float:
        return self.residual_power_mw / self.output_power_mw if self.output_power_mw > 0 else 0.0

    def truth(self) -> PolynomialTruth:
        return PolynomialTruth(self.coefficients, self.drive_power_mw)

    def to_dict(self) -> Dict[str, object]:
        return {
            'order': self.order,
            'drive_power_mw': self.drive_power_mw,
            'residual_power_mw': self.residual_power_mw,
            'coefficients': [complex(c) for c in self.coefficients]
        }


def fit_polynomial_pa(params: RappParams, order_p_true: int, num_samples: int, seed: int,
                      drive_power_mw: Optional[float] = None) -> PolynomialPA:
    """Fit sum_p c_p |x|^(p-1) x to the RAPP response over Gaussian drive samples"""
    validate_odd_order(order_p_true, "order_p_true")
    branches = (order_p_true + 1) // 2
    if num_samples < 10 * branches:
        raise InvalidConfigurationError(
            f"num_samples must be at least {10 * branches} for order {order_p_true}, got {num_samples}.",
            "num_samples"
        )
    if drive_power_mw is None:
        drive_power_mw = operating_drive_power_mw(LinkBudget(), params)
    validate_positive(drive_power_mw, "drive_power_mw")

    rng = make_rng(seed, 'pa_fit')
    x = (rng.standard_normal(num_samples) + 1j * rng.standard_normal(num_samples)) / math.sqrt(2.0)
    gain = math.sqrt(drive_power_mw)
    target = rapp_apply(gain * x, params)

    # Fit in the orthonormal basis, then map back to PH monomials of the drive
    config = BasisConfig(order_p=order_p_true, memory_lh=0, kind=BasisKind.GLP)
    design = branch_matrix(x, config)
    glp_weights, residues, rank, singular_values = linalg.lstsq(design, target)
    condition = float(singular_values[0] / singular_values[-1]) if singular_values[-1] > 0 else math.inf
    if rank < branches or condition > NUMERICS['condition_limit']:
        raise RankDeficiencyError(condition_estimate=condition)

    unit_weights = build_transform(config).block @ glp_weights
    coefficients = unit_weights / gain ** np.arange(1, order_p_true + 1, 2)
    residual = target - design @ glp_weights
    fit = PolynomialPA(
        coefficients=coefficients,
        order=order_p_true,
        drive_power_mw=drive_power_mw,
        residual_power_mw=float(np.mean(np.abs(residual) ** 2)),
        output_power_mw=float(np.mean(np.abs(target) ** 2)),
        condition_number=condition,
        params=params
    )
    logger.debug(
        f"Fitted order-{order_p_true} PA polynomial",
        extra={'relative_residual': fit.relative_residual, 'condition_number': condition}
    )
    return fit


def build_truth(kind: str, params: RappParams, drive_power_mw: float, order_p_true: int = 7,
                fit_samples: int = 20000, seed: int = 0) -> TruthModel:
    """Truth model by name: 'rapp' (infinite order) or 'polynomial' (fitted at order_p_true)"""
    if kind == 'rapp':
        return RappTruth(params, drive_power_mw)
    if kind == 'polynomial':
        return fit_polynomial_pa(params, order_p_true, fit_samples, seed, drive_power_mw).truth()
    raise InvalidConfigurationError(f"Unknown truth model '{kind}'.", "truth_model")


def truth_weights(coefficients: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Stack c_p * alpha_l in delay-major, order-minor layout"""
    return np.kron(np.asarray(taps, dtype=np.complex128), np.asarray(coefficients, dtype=np.complex128))
