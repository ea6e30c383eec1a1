"""
Dense symmetric eigensolvers and factorizations for the bound engines
"""
from typing import Tuple
import numpy as np
import scipy.linalg
from loguru import logger

from ..config import settings
from ..exceptions import DomainError, SingularGramError


def as_symmetric(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate near-symmetry (relative to the largest entry) and return the symmetrized matrix"""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"Expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("Matrix has non-finite entries")
    scale = max(float(np.max(np.abs(a))), 1e-300) if a.size else 1.0
    if a.size and np.max(np.abs(a - a.T)) > tol * scale:
        raise DomainError(f"Matrix is not symmetric (deviation {np.max(np.abs(a - a.T)):.3e})")
    return 0.5 * (a + a.T)


def sym_eigen(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a symmetric matrix"""
    values, vectors = scipy.linalg.eigh(as_symmetric(a))
    return values, vectors


def _spd_spectrum(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = sym_eigen(g)
    largest = float(values[-1]) if len(values) else 0.0
    if len(values) and values[0] <= settings.GRAM_MIN_EIGEN_RATIO * max(largest, 0.0):
        logger.error(f"Gram matrix numerically singular: eigenvalues [{values[0]:.3e}, {largest:.3e}]")
        raise SingularGramError(
            f"Gram matrix is numerically singular (smallest eigenvalue {values[0]:.3e}, largest {largest:.3e}); "
            "the basis functions are linearly dependent",
            min_eigenvalue=float(values[0]))
    return values, vectors


def inv_sqrt(g: np.ndarray) -> np.ndarray:
    """G^(-1/2) of a symmetric positive definite matrix, symmetric and positive definite"""
    values, vectors = _spd_spectrum(g)
    s = (vectors / np.sqrt(values)) @ vectors.T
    return 0.5 * (s + s.T)


def sqrt_spd(g: np.ndarray) -> np.ndarray:
    """G^(1/2) of a symmetric positive definite matrix"""
    values, vectors = _spd_spectrum(g)
    s = (vectors * np.sqrt(values)) @ vectors.T
    return 0.5 * (s + s.T)


def condition_number(g: np.ndarray) -> float:
    """Spectral condition number of a symmetric positive definite matrix"""
    values = scipy.linalg.eigvalsh(as_symmetric(g))
    if values[0] <= 0:
        return float('inf')
    return float(values[-1] / values[0])


def solve_spd(g: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve G X = B by Cholesky factorization"""
    g = as_symmetric(g)
    try:
        factor = scipy.linalg.cho_factor(g, lower=True, check_finite=True)
    except scipy.linalg.LinAlgError as e:
        logger.error(f"Cholesky factorization failed: {e}")
        raise SingularGramError(f"Matrix is not positive definite: {e}") from e
    return scipy.linalg.cho_solve(factor, np.asarray(b, dtype=float))
