"""
Lower bounds for the discrete spectrum from fragment eigenfunctions
"""
from typing import List, Optional, Tuple
import numpy as np
from loguru import logger

from ..config import settings
from ..config.settings import QuadratureSettings
from ..data.models import BoundReport, HydrogenicOrbital, NuclearGeometry, SpectralWindow
from ..exceptions import DomainError
from ..integrals.twocenter import gram_matrix
from ..numerics.linalg import condition_number, inv_sqrt, sym_eigen
from ..numerics.specfun import hydrogenic_level


def _shell_orbitals(center: int, j: int, Z: int, n: int) -> List[HydrogenicOrbital]:
    """All orbitals of one shell, l ascending, then m from -l to l"""
    return [HydrogenicOrbital(center, j, l, m, Z=Z, n_scale=n)
            for l in range(j) for m in range(-l, l + 1)]


def window_at(geometry: NuclearGeometry, lam: float, j_cut: Optional[int] = None) -> SpectralWindow:
    """
    Basis of all fragment eigenfunctions with eigenvalue <= lam.

    Each nucleus contributes its shells j with -n Z_k^2 / (2 j^2) <= lam; lambda~_k is the
    first level of that nucleus above lam.
    """
    if lam >= 0:
        raise DomainError(f"Window threshold must lie below the essential spectrum (0), got {lam}")
    n = geometry.n
    basis: List[HydrogenicOrbital] = []
    shells: List[int] = []
    tilde: List[float] = []
    for k, Z in enumerate(geometry.charges):
        j = 0
        while hydrogenic_level(j + 1, Z, n) <= lam + 1e-12 * abs(lam):
            j += 1
            if j > settings.MAX_SHELL:
                raise DomainError(f"Window at {lam} needs shells beyond j = {settings.MAX_SHELL} on nucleus {k}")
        shells.append(j)
        tilde.append(hydrogenic_level(j + 1, Z, n))
        for shell in range(1, j + 1):
            basis.extend(_shell_orbitals(k, shell, Z, n))
    if not basis:
        raise DomainError(f"No fragment eigenvalue lies below the window threshold {lam}")
    return SpectralWindow(j_cut=j_cut if j_cut is not None else max(shells), lam=lam, basis=tuple(basis),
                          shells=tuple(shells), lambda_tilde=tuple(tilde))


def build_window(geometry: NuclearGeometry, j_cut: int) -> SpectralWindow:
    """Window with lambda = lambda_{j_cut} of the smallest charge"""
    if j_cut < 1:
        raise DomainError(f"j_cut must be >= 1, got {j_cut}")
    lam = hydrogenic_level(j_cut, min(geometry.charges), geometry.n)
    window = window_at(geometry, lam, j_cut=j_cut)
    logger.debug(f"Window j_cut={j_cut}: {window.size} functions, shells {window.shells}, shift {window.shift:.6f}")
    return window


def _check_dimensions(window: SpectralWindow, gram: np.ndarray):
    if gram.shape != (window.size, window.size):
        raise DomainError(f"Gram matrix shape {gram.shape} does not match window size {window.size}")


def build_B(window: SpectralWindow, gram: np.ndarray) -> np.ndarray:
    """B_ij = (lambda_i - lambda~_k(i)) G_ij"""
    _check_dimensions(window, gram)
    return window.row_scaling()[:, None] * gram


def build_A(window: SpectralWindow, gram: np.ndarray) -> np.ndarray:
    """A_ij = sum_s (lambda_s - lambda~_k(s)) G_is G_sj, so that G^-1 A = B"""
    _check_dimensions(window, gram)
    return (gram * window.row_scaling()) @ gram


def whitened_matrix(window: SpectralWindow, gram: np.ndarray) -> np.ndarray:
    """G^-1/2 A G^-1/2, symmetric and similar to B"""
    s = inv_sqrt(gram)
    h = s @ build_A(window, gram) @ s
    return 0.5 * (h + h.T)


def lower_bounds(window: SpectralWindow, gram: np.ndarray, label: str = '', R: Optional[float] = None) -> BoundReport:
    """Ascending eigenvalues of B (through the symmetric form) shifted by the sum of lambda~_k"""
    values, _ = sym_eigen(whitened_matrix(window, gram))
    condition = condition_number(gram)
    report = BoundReport(bounds=tuple(values + window.shift), window=window, gram_condition=condition,
                         label=label, R=R)
    if condition > settings.GRAM_WARN_CONDITION:
        message = f"Gram matrix poorly conditioned ({condition:.3e})"
        logger.warning(f"{label}: {message}" if label else message)
        report.notes.append(message)
    return report


def compute_bounds(geometry: NuclearGeometry, j_cut: int, quad: Optional[QuadratureSettings] = None,
                   workers: Optional[int] = None, R: Optional[float] = None
                   ) -> Tuple[SpectralWindow, np.ndarray, BoundReport]:
    """Window, Gram matrix and lower bounds for one geometry"""
    window = build_window(geometry, j_cut)
    gram = gram_matrix(list(window.basis), geometry, use_scaled=True, quad=quad, workers=workers)
    report = lower_bounds(window, gram, label=geometry.label, R=R)
    logger.info(f"{geometry.label or 'geometry'} j_cut={j_cut}: mu1 >= {report.bounds[0]:.6f}")
    return window, gram, report
