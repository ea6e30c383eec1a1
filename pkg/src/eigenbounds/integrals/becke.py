"""
Becke multi-center integration grid
"""
from dataclasses import dataclass
from typing import Optional
import numpy as np
from loguru import logger

from ..config import settings
from ..exceptions import DomainError
from ..numerics.quadrature import gauss_legendre


@dataclass(frozen=True, eq=False)
class MolecularGrid:
    """Points (N, 3) and weights (N,) such that sum w f(p) ~ integral of f over space"""
    points: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def atomic_grid(center: np.ndarray, radial_order: int, theta_order: int, phi_points: int,
                radial_scale: float = 1.0):
    """Spherical product grid around one center, radial map r = r_m (1 + x) / (1 - x)"""
    x = gauss_legendre(radial_order)
    r = radial_scale * (1.0 + x.nodes) / (1.0 - x.nodes)
    radial_weights = x.weights * 2.0 * radial_scale / (1.0 - x.nodes) ** 2 * r * r

    cos_theta = gauss_legendre(theta_order)
    phi = 2.0 * np.pi * np.arange(phi_points) / phi_points
    ct, ph = np.meshgrid(cos_theta.nodes, phi, indexing='ij')
    st = np.sqrt(1.0 - ct * ct)
    directions = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1).reshape(-1, 3)
    angular_weights = np.repeat(cos_theta.weights, phi_points) * (2.0 * np.pi / phi_points)

    points = center + (r[:, None, None] * directions[None, :, :]).reshape(-1, 3)
    weights = np.outer(radial_weights, angular_weights).ravel()
    return points, weights


def _becke_step(mu: np.ndarray, iterations: int = 3) -> np.ndarray:
    """Cell function s(mu) = (1 - f^k(mu)) / 2 with f(mu) = 3/2 mu - 1/2 mu^3"""
    for _ in range(iterations):
        mu = 1.5 * mu - 0.5 * mu ** 3
    return 0.5 * (1.0 - mu)


def becke_weights(points: np.ndarray, centers: np.ndarray, owner: int) -> np.ndarray:
    """Fuzzy-cell partition weight of center owner at every point"""
    n = len(centers)
    if n == 1:
        return np.ones(len(points))
    distances = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=-1)
    cell = np.ones((len(points), n))
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            separation = np.linalg.norm(centers[a] - centers[b])
            mu = (distances[:, a] - distances[:, b]) / separation
            cell[:, a] *= _becke_step(mu)
    total = cell.sum(axis=1)
    return np.where(total > 0, cell[:, owner] / np.where(total > 0, total, 1.0), 0.0)


def becke_grid(centers: np.ndarray, radial_order: Optional[int] = None, theta_order: Optional[int] = None,
               phi_points: Optional[int] = None, radial_scale: float = 1.0) -> MolecularGrid:
    """Atomic grids on every center combined with Becke partition weights"""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[1] != 3 or len(centers) < 1:
        raise DomainError(f"Centers must be an (n, 3) array, got shape {centers.shape}")
    radial_order = radial_order or settings.BECKE_RADIAL_ORDER
    theta_order = theta_order or settings.BECKE_THETA_ORDER
    phi_points = phi_points or settings.BECKE_PHI_POINTS

    all_points, all_weights = [], []
    for owner, center in enumerate(centers):
        points, weights = atomic_grid(center, radial_order, theta_order, phi_points, radial_scale)
        all_points.append(points)
        all_weights.append(weights * becke_weights(points, centers, owner))
    grid = MolecularGrid(np.concatenate(all_points), np.concatenate(all_weights))
    logger.debug(f"Becke grid with {len(grid.weights)} points on {len(centers)} centers")
    return grid
