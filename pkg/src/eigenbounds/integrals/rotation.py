"""
Rotation matrices for real spherical harmonics
"""
from functools import lru_cache
from typing import Tuple
import numpy as np

from ..config import settings
from ..exceptions import DomainError, GeometryError
from ..numerics.quadrature import gauss_legendre
from ..numerics.specfun import real_sph_harm_cartesian


def check_orthogonal(rotation: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Return the matrix as a float array, raising GeometryError unless Q Q^T = I"""
    rotation = np.asarray(rotation, dtype=float)
    if rotation.shape != (3, 3):
        raise GeometryError(f"Expected a 3x3 matrix, got shape {rotation.shape}")
    deviation = np.max(np.abs(rotation @ rotation.T - np.eye(3)))
    if deviation > tol:
        raise GeometryError(f"Matrix is not orthogonal (deviation {deviation:.3e})")
    return rotation


@lru_cache(maxsize=None)
def _sphere_rule(l: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Product rule exact for polynomials of degree 2l on the sphere, with Y_lm at its nodes"""
    theta_rule = gauss_legendre(l + 2)
    n_phi = 2 * l + 2
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    cos_theta, phi_grid = np.meshgrid(theta_rule.nodes, phi, indexing='ij')
    sin_theta = np.sqrt(1.0 - cos_theta ** 2)
    directions = np.stack([sin_theta * np.cos(phi_grid), sin_theta * np.sin(phi_grid), cos_theta], axis=-1)
    directions = directions.reshape(-1, 3)
    weights = np.repeat(theta_rule.weights, n_phi) * (2.0 * np.pi / n_phi)
    harmonics = np.array([real_sph_harm_cartesian(l, m, directions) for m in range(-l, l + 1)])
    return directions, weights, harmonics


def real_sh_rotation(l: int, rotation: np.ndarray) -> np.ndarray:
    """
    Matrix D with Y_lm(rotation^-1 u) = sum_m' D[m, m'] Y_lm'(u) for every direction u.

    Rows and columns are ordered m = -l..l (sine flavours, m = 0, cosine flavours), so for
    l = 1 the order is (p_y, p_z, p_x). Works for proper and improper orthogonal matrices.
    Entries are projections onto the harmonics with a product rule that is exact at degree 2l.
    """
    if l < 0 or l > settings.MAX_SHELL:
        raise DomainError(f"Harmonic rotation supports 0 <= l <= {settings.MAX_SHELL}, got {l}")
    rotation = check_orthogonal(rotation)
    if l == 0:
        return np.ones((1, 1))
    directions, weights, harmonics = _sphere_rule(l)
    # Row vectors: u^T Q equals (Q^T u)^T = (Q^-1 u)^T
    rotated = directions @ rotation
    rotated_harmonics = np.array([real_sph_harm_cartesian(l, m, rotated) for m in range(-l, l + 1)])
    return (rotated_harmonics * weights) @ harmonics.T
