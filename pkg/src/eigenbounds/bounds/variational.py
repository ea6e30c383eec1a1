"""
Variational upper bounds for the ground state and Temple's lower bound
"""
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import numpy as np
import scipy.linalg
from scipy.optimize import minimize, minimize_scalar
from loguru import logger

from ..config import settings
from ..data.models import NuclearGeometry
from ..exceptions import DomainError, GeometryError, NumericalError, TempleError
from ..integrals.becke import becke_grid
from ..numerics.quadrature import QuadRule, composite_tail_rule, gauss_legendre, graded_rule, join_rules


@dataclass(frozen=True)
class TrialParams:
    """psi = exp(-alpha R xi / 2) (1 + beta R^2 eta^2 / 4) for two unit charges R bohr apart"""
    alpha: float
    beta: float
    R: float

    def __post_init__(self):
        if not self.R > 0 or not math.isfinite(self.R):
            raise GeometryError(f"Internuclear distance must be positive, got {self.R}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError(f"Trial parameters must be finite, got alpha={self.alpha}, beta={self.beta}")

    @property
    def p(self) -> float:
        return self.alpha * self.R / 2.0

    @property
    def q(self) -> float:
        return self.beta * self.R * self.R / 4.0

    def require_normalizable(self):
        if self.alpha <= 0:
            raise DomainError(f"Trial function is not square-integrable for alpha={self.alpha} <= 0")


@dataclass(frozen=True)
class TempleInput:
    mean: float
    second_moment: float
    mu2_lb: float

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean * self.mean


@dataclass(frozen=True)
class TrialMoments:
    """Norm and normalized first and second moments of A for one trial function"""
    norm2: float
    mean: float
    second_moment: float

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean * self.mean

    def temple_input(self, mu2_lb: float) -> TempleInput:
        return TempleInput(self.mean, self.second_moment, mu2_lb)


@dataclass(frozen=True)
class VariationalResult:
    """Optimized parameters and the bound they give"""
    alpha: float
    beta: Optional[float]
    value: float
    converged: bool
    evaluations: int
    method: str = 'trial'


def _factors(params: TrialParams, xi: np.ndarray, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """X = exp(-p xi), Y = 1 + q eta^2 and N with A psi = X N / (xi^2 - eta^2)"""
    p, q, R = params.p, params.q, params.R
    x = np.exp(-p * xi)
    y = 1.0 + q * eta * eta
    kinetic = -(2.0 / (R * R)) * (y * (p * p * (xi * xi - 1.0) - 2.0 * p * xi) + 2.0 * q - 6.0 * q * eta * eta)
    potential = -(4.0 * xi / R) * y
    return x, y, kinetic + potential


def trial_value(params: TrialParams, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    xi, eta = np.asarray(xi, dtype=float), np.asarray(eta, dtype=float)
    return np.exp(-params.p * xi) * (1.0 + params.q * eta * eta)


def apply_hamiltonian(params: TrialParams, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """A psi in spheroidal coordinates from the prolate Laplacian and 1/r_a + 1/r_b = 4 xi / (R (xi^2 - eta^2))"""
    xi, eta = np.asarray(xi, dtype=float), np.asarray(eta, dtype=float)
    x, _, numerator = _factors(params, xi, eta)
    return x * numerator / (xi * xi - eta * eta)


def _spheroidal_of(R: float, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(xi, eta) for nuclei at (0, 0, -R/2) and (0, 0, R/2)"""
    points = np.asarray(points, dtype=float)
    r_a = np.linalg.norm(points - np.array([0.0, 0.0, -R / 2.0]), axis=-1)
    r_b = np.linalg.norm(points - np.array([0.0, 0.0, R / 2.0]), axis=-1)
    return (r_a + r_b) / R, (r_a - r_b) / R


def trial_value_cartesian(params: TrialParams, points: np.ndarray) -> np.ndarray:
    return trial_value(params, *_spheroidal_of(params.R, points))


def apply_hamiltonian_cartesian(params: TrialParams, points: np.ndarray) -> np.ndarray:
    return apply_hamiltonian(params, *_spheroidal_of(params.R, points))


def _smooth_grid(params: TrialParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    xi_rule = composite_tail_rule(1.0, 2.0 * params.p, settings.XI_ORDER, settings.XI_SPAN)
    eta_rule = gauss_legendre(settings.ETA_ORDER)
    return _product(params, xi_rule, eta_rule, eta_factor=1.0)


def _graded_grid(params: TrialParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Panels refined toward xi = 1 and |eta| = 1, where (A psi)^2 has its Coulomb singularity"""
    decay = 2.0 * params.p
    head = min(1.0, 1.0 / decay)
    xi_rule = join_rules(
        graded_rule(1.0, 1.0 + head, settings.GRADED_ORDER, settings.GRADED_LEVELS, settings.GRADED_RATIO, toward='a'),
        composite_tail_rule(1.0 + head, decay, settings.XI_ORDER, settings.XI_SPAN))
    # Integrands are even in eta
    eta_rule = graded_rule(0.0, 1.0, settings.GRADED_ORDER, settings.GRADED_LEVELS, settings.GRADED_RATIO, toward='b')
    return _product(params, xi_rule, eta_rule, eta_factor=2.0)


def _product(params: TrialParams, xi_rule: QuadRule, eta_rule: QuadRule, eta_factor: float):
    xi, eta = np.meshgrid(xi_rule.nodes, eta_rule.nodes, indexing='ij')
    volume = 2.0 * math.pi * params.R ** 3 / 8.0
    weights = np.outer(xi_rule.weights, eta_rule.weights) * eta_factor * volume
    return xi.ravel(), eta.ravel(), weights.ravel()


def _moments(params: TrialParams, grid) -> Tuple[float, float, float]:
    xi, eta, weights = grid
    x, y, numerator = _factors(params, xi, eta)
    d = xi * xi - eta * eta
    norm2 = float(np.dot(weights, x * x * y * y * d))
    if not norm2 > 0 or not math.isfinite(norm2):
        raise NumericalError(f"Trial function norm is not positive ({norm2}) for {params}")
    mean = float(np.dot(weights, x * x * y * numerator)) / norm2
    second = float(np.dot(weights, x * x * numerator * numerator / d)) / norm2
    return norm2, mean, second


def rayleigh(params: TrialParams) -> Tuple[float, float]:
    """(||psi||^2, <psi, A psi> / ||psi||^2)"""
    params.require_normalizable()
    xi, eta, weights = _smooth_grid(params)
    x, y, numerator = _factors(params, xi, eta)
    norm2 = float(np.dot(weights, x * x * y * y * (xi * xi - eta * eta)))
    if not norm2 > 0 or not math.isfinite(norm2):
        raise NumericalError(f"Trial function norm is not positive ({norm2}) for {params}")
    return norm2, float(np.dot(weights, x * x * y * numerator)) / norm2


def second_moment(params: TrialParams) -> float:
    """||A psi||^2 / ||psi||^2 (A self-adjoint, so this is <psi, A^2 psi> normalized)"""
    params.require_normalizable()
    return _moments(params, _graded_grid(params))[2]


def trial_moments(params: TrialParams) -> TrialMoments:
    """Norm, mean and second moment from one graded grid"""
    params.require_normalizable()
    norm2, mean, second = _moments(params, _graded_grid(params))
    return TrialMoments(norm2=norm2, mean=mean, second_moment=second)


def _nelder_mead(objective, starts: Sequence[Tuple[float, float]]):
    """Best Nelder-Mead run over the start points (first one wins ties)"""
    best, evaluations = None, 0
    for start in starts:
        result = minimize(objective, np.asarray(start, dtype=float), method='Nelder-Mead',
                          options={'xatol': 1e-8, 'fatol': settings.OPTIMIZER_FTOL,
                                   'maxiter': settings.OPTIMIZER_MAXITER, 'maxfev': settings.OPTIMIZER_MAXITER})
        evaluations += int(result.nfev)
        if best is None or result.fun < best.fun:
            best = result
    return best, evaluations


def optimize_upper_bound(R: float, starts: Optional[Sequence[Tuple[float, float]]] = None) -> VariationalResult:
    """Minimize the Rayleigh quotient over (alpha, beta) from a fixed multistart grid"""
    if not R > 0:
        raise GeometryError(f"Internuclear distance must be positive, got {R}")
    starts = starts or list(itertools.product(settings.ALPHA_STARTS, settings.BETA_STARTS))

    def objective(x: np.ndarray) -> float:
        if x[0] <= 0:
            return math.inf
        try:
            return rayleigh(TrialParams(float(x[0]), float(x[1]), R))[1]
        except NumericalError:
            return math.inf

    best, evaluations = _nelder_mead(objective, starts)
    if not math.isfinite(best.fun):
        raise NumericalError(f"No admissible trial function found at R={R}")
    result = VariationalResult(alpha=float(best.x[0]), beta=float(best.x[1]), value=float(best.fun),
                               converged=bool(best.success), evaluations=evaluations)
    if not result.converged:
        logger.warning(f"Nelder-Mead did not report convergence at R={R}: {best.message}")
    logger.info(f"R={R:g}: mu1 <= {result.value:.6f} (alpha={result.alpha:.5f}, beta={result.beta:.5f})")
    return result


def temple_bound(data: TempleInput) -> float:
    """mean - variance / (mu2_lb - mean), valid only when mean < mu2_lb"""
    if not data.mean < data.mu2_lb:
        raise TempleError(f"Temple's inequality needs <A> < mu2_lb, got <A>={data.mean:.6f}, mu2_lb={data.mu2_lb:.6f}")
    variance = data.variance
    if variance < -1e-12 * max(1.0, data.mean * data.mean):
        raise TempleError(f"Negative variance {variance:.3e}: moments are inconsistent")
    return data.mean - max(variance, 0.0) / (data.mu2_lb - data.mean)


def optimize_temple_bound(R: float, mu2_lb: float, start: Optional[VariationalResult] = None) -> VariationalResult:
    """Maximize Temple's bound over (alpha, beta), starting from the upper-bound optimum"""
    start = start or optimize_upper_bound(R)
    initial = temple_bound(trial_moments(TrialParams(start.alpha, start.beta, R)).temple_input(mu2_lb))

    def objective(x: np.ndarray) -> float:
        if x[0] <= 0:
            return math.inf
        try:
            return -temple_bound(trial_moments(TrialParams(float(x[0]), float(x[1]), R)).temple_input(mu2_lb))
        except NumericalError:
            return math.inf

    best, evaluations = _nelder_mead(objective, [(start.alpha, start.beta)])
    if -best.fun < initial:
        best_alpha, best_beta, value = start.alpha, start.beta, initial
    else:
        best_alpha, best_beta, value = float(best.x[0]), float(best.x[1]), float(-best.fun)
    logger.info(f"R={R:g}: mu1 >= {value:.6f} (Temple, mu2_lb={mu2_lb:.6f})")
    return VariationalResult(alpha=best_alpha, beta=best_beta, value=value, converged=bool(best.success),
                             evaluations=evaluations, method='temple')


def _lcao_matrices(zeta: float, centers: np.ndarray, charges: Sequence[int], grid) -> Tuple[np.ndarray, np.ndarray]:
    """Hamiltonian and overlap of exp(-zeta r_k) functions on a molecular grid"""
    offsets = grid.points[:, None, :] - centers[None, :, :]
    r = np.maximum(np.linalg.norm(offsets, axis=-1), 1e-300)
    phi = np.exp(-zeta * r)
    gradient = -zeta * phi[:, :, None] * offsets / r[:, :, None]
    potential = -np.sum(np.asarray(charges, dtype=float) / r, axis=1)

    w = grid.weights
    overlap = (phi * w[:, None]).T @ phi
    kinetic = 0.5 * np.einsum('p,pkc,plc->kl', w, gradient, gradient)
    attraction = (phi * (w * potential)[:, None]).T @ phi
    hamiltonian = kinetic + attraction
    return 0.5 * (hamiltonian + hamiltonian.T), 0.5 * (overlap + overlap.T)


def lcao_upper_bound(geometry: NuclearGeometry, bounds: Tuple[float, float] = (0.1, 8.0)) -> VariationalResult:
    """
    Rayleigh-Ritz bound from one exp(-zeta r) function per nucleus with a shared exponent.

    Integrals use a Becke grid in the physical (unscaled) geometry; zeta is optimized.
    """
    centers = np.asarray(geometry.positions, dtype=float)
    grid = becke_grid(centers)
    evaluations = 0

    def lowest(zeta: float) -> float:
        nonlocal evaluations
        evaluations += 1
        hamiltonian, overlap = _lcao_matrices(zeta, centers, geometry.charges, grid)
        return float(scipy.linalg.eigh(hamiltonian, overlap, eigvals_only=True)[0])

    result = minimize_scalar(lowest, bounds=bounds, method='bounded', options={'xatol': 1e-8})
    logger.info(f"{geometry.label or 'geometry'}: mu1 <= {result.fun:.6f} (LCAO, zeta={result.x:.5f})")
    return VariationalResult(alpha=float(result.x), beta=None, value=float(result.fun),
                             converged=bool(result.success), evaluations=evaluations, method='lcao')
