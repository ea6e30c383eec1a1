"""
Two-center overlap integrals in prolate spheroidal coordinates and Gram assembly
"""
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from loguru import logger

from ..config import settings
from ..config.settings import DEFAULT_QUADRATURE, QuadratureSettings
from ..data.models import HydrogenicOrbital, NuclearGeometry
from ..exceptions import DomainError, GeometryError
from ..numerics.quadrature import composite_tail_rule, gauss_legendre, integrate_semi_infinite
from ..numerics.specfun import azimuthal_weight, polar_factor, radial_R
from .rotation import real_sh_rotation


@dataclass(frozen=True, eq=False)
class PairFrame:
    """Frame with origin at the midpoint of nuclei k, l and z-axis pointing from k to l"""
    rotation: np.ndarray
    separation: float
    midpoint: np.ndarray

    def to_pair(self, points: np.ndarray) -> np.ndarray:
        """Global Cartesian points (..., 3) to pair coordinates"""
        return (np.asarray(points, dtype=float) - self.midpoint) @ self.rotation.T

    def to_global(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.rotation + self.midpoint


@dataclass(frozen=True)
class SpheroidalPoint:
    xi: float
    eta: float
    phi: float

    def __post_init__(self):
        if self.xi < 1.0 or abs(self.eta) > 1.0 or not 0.0 <= self.phi < 2.0 * np.pi:
            raise DomainError(f"Invalid spheroidal point (xi={self.xi}, eta={self.eta}, phi={self.phi})")

    def r_k(self, separation: float) -> float:
        return separation * (self.xi + self.eta) / 2.0

    def r_l(self, separation: float) -> float:
        return separation * (self.xi - self.eta) / 2.0


def complete_frame(z_axis: np.ndarray) -> np.ndarray:
    """
    Orthogonal matrix with rows (ex, ey, ez) and ez along z_axis.

    ex is the global axis least parallel to ez (first one on ties), orthonormalized
    against ez; ey = ez x ex keeps the frame right-handed.
    """
    ez = np.asarray(z_axis, dtype=float)
    length = np.linalg.norm(ez)
    if length < 1e-12:
        raise GeometryError("Frame axis must be nonzero")
    ez = ez / length
    trial = np.eye(3)[int(np.argmin(np.abs(ez)))]
    ex = trial - np.dot(trial, ez) * ez
    ex /= np.linalg.norm(ex)
    ey = np.cross(ez, ex)
    return np.vstack([ex, ey, ez])


def pair_frame(geometry: NuclearGeometry, k: int, l: int, use_scaled: bool = True) -> PairFrame:
    """Pair frame of nuclei k and l; nucleus k sits at (0, 0, -R/2), nucleus l at (0, 0, R/2)"""
    if k == l:
        raise GeometryError(f"Pair frame needs two distinct nuclei, got k = l = {k}")
    a = geometry.position(k, use_scaled)
    b = geometry.position(l, use_scaled)
    separation = float(np.linalg.norm(b - a))
    if separation < 1e-10:
        raise GeometryError(f"Nuclei {k} and {l} coincide")
    return PairFrame(rotation=complete_frame(b - a), separation=separation, midpoint=0.5 * (a + b))


def spheroidal_to_cartesian(frame: PairFrame, xi: np.ndarray, eta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Global Cartesian points of spheroidal coordinates (xi, eta, phi) of a pair frame"""
    xi, eta, phi = (np.asarray(v, dtype=float) for v in (xi, eta, phi))
    half = frame.separation / 2.0
    rho = half * np.sqrt(np.clip((xi * xi - 1.0) * (1.0 - eta * eta), 0.0, None))
    local = np.stack([rho * np.cos(phi), rho * np.sin(phi), half * xi * eta], axis=-1)
    return frame.to_global(local)


def cartesian_to_spheroidal(frame: PairFrame, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(xi, eta, phi) of global Cartesian points with phi in [0, 2 pi)"""
    local = frame.to_pair(points)
    half = frame.separation / 2.0
    r_k = np.linalg.norm(local - np.array([0.0, 0.0, -half]), axis=-1)
    r_l = np.linalg.norm(local - np.array([0.0, 0.0, half]), axis=-1)
    xi = np.maximum((r_k + r_l) / frame.separation, 1.0)
    eta = np.clip((r_k - r_l) / frame.separation, -1.0, 1.0)
    phi = np.mod(np.arctan2(local[..., 1], local[..., 0]), 2.0 * np.pi)
    return xi, eta, phi


@dataclass(frozen=True, eq=False)
class SpheroidalGrid:
    """Flattened (xi, eta) product grid with the volume element folded into the weights"""
    separation: float
    xi: np.ndarray
    eta: np.ndarray
    weights: np.ndarray

    @property
    def r_k(self) -> np.ndarray:
        return self.separation * (self.xi + self.eta) / 2.0

    @property
    def r_l(self) -> np.ndarray:
        return self.separation * (self.xi - self.eta) / 2.0

    @property
    def cos_k(self) -> np.ndarray:
        return (1.0 + self.xi * self.eta) / (self.xi + self.eta)

    @property
    def cos_l(self) -> np.ndarray:
        return (self.xi * self.eta - 1.0) / (self.xi - self.eta)


@lru_cache(maxsize=32)
def spheroidal_grid(separation: float, decay: float, quad: QuadratureSettings = DEFAULT_QUADRATURE) -> SpheroidalGrid:
    """Gauss-Legendre in eta times the composite tail rule in xi for integrands ~ exp(-decay xi)"""
    eta_rule = gauss_legendre(quad.eta_order)
    xi_rule = composite_tail_rule(1.0, decay, quad.xi_order, quad.xi_span)
    xi, eta = np.meshgrid(xi_rule.nodes, eta_rule.nodes, indexing='ij')
    weights = np.outer(xi_rule.weights, eta_rule.weights) * (separation ** 3 / 8.0) * (xi * xi - eta * eta)
    return SpheroidalGrid(separation, xi.ravel(), eta.ravel(), weights.ravel())


def _pair_components(orb: HydrogenicOrbital, rotation: np.ndarray) -> np.ndarray:
    """Real-harmonic components (m' = -l..l) of the orbital's angular part in a rotated frame"""
    return real_sh_rotation(orb.l, rotation @ orb.axes_matrix().T)[orb.m + orb.l]


def _side_factors(orbitals: Sequence[HydrogenicOrbital], rotation: np.ndarray, radius: np.ndarray,
                  cos_theta: np.ndarray) -> Dict[int, np.ndarray]:
    """Per azimuthal label m', the (points, orbitals) matrix of radial x polar factors"""
    factors: Dict[int, np.ndarray] = {}
    radial_cache: Dict[Tuple[int, int, int], np.ndarray] = {}
    polar_cache: Dict[Tuple[int, int], np.ndarray] = {}
    for i, orb in enumerate(orbitals):
        key = (orb.j, orb.l, orb.Z)
        if key not in radial_cache:
            radial_cache[key] = radial_R(orb.j, orb.l, orb.Z, radius)
        components = _pair_components(orb, rotation)
        for offset, coefficient in enumerate(components):
            if abs(coefficient) < 1e-15:
                continue
            mp = offset - orb.l
            if (orb.l, abs(mp)) not in polar_cache:
                polar_cache[(orb.l, abs(mp))] = polar_factor(orb.l, mp, cos_theta)
            if mp not in factors:
                factors[mp] = np.zeros((len(radius), len(orbitals)))
            factors[mp][:, i] += coefficient * radial_cache[key] * polar_cache[(orb.l, abs(mp))]
    return factors


def overlap_block(left: Sequence[HydrogenicOrbital], right: Sequence[HydrogenicOrbital],
                  geometry: NuclearGeometry, use_scaled: bool = True,
                  quad: Optional[QuadratureSettings] = None) -> np.ndarray:
    """
    All overlaps between orbitals on one nucleus (left) and orbitals on another (right).

    Both sets are re-expanded in the pair frame, the azimuthal integral is done by
    trigonometric orthogonality and the (xi, eta) integral on one shared grid.
    """
    quad = quad or DEFAULT_QUADRATURE
    if not left or not right:
        return np.zeros((len(left), len(right)))
    k, l = left[0].center, right[0].center
    if any(orb.center != k for orb in left) or any(orb.center != l for orb in right):
        raise DomainError("overlap_block needs all left orbitals on one nucleus and all right orbitals on another")
    frame = pair_frame(geometry, k, l, use_scaled)
    decay = 0.5 * frame.separation * (min(orb.Z / orb.j for orb in left) + min(orb.Z / orb.j for orb in right))
    grid = spheroidal_grid(frame.separation, decay, quad)

    left_factors = _side_factors(left, frame.rotation, grid.r_k, grid.cos_k)
    right_factors = _side_factors(right, frame.rotation, grid.r_l, grid.cos_l)
    block = np.zeros((len(left), len(right)))
    for mp in sorted(set(left_factors) & set(right_factors)):
        block += azimuthal_weight(mp) * (left_factors[mp].T @ (grid.weights[:, None] * right_factors[mp]))
    logger.debug(f"Overlap block {k}-{l}: {len(left)}x{len(right)} on {len(grid.weights)} points "
                 f"(R={frame.separation:.6g})")
    return block


def _radial_product(a: HydrogenicOrbital, b: HydrogenicOrbital) -> float:
    if a.Z == b.Z:
        return 1.0 if a.j == b.j else 0.0
    decay = a.Z / a.j + b.Z / b.j
    return integrate_semi_infinite(
        lambda r: radial_R(a.j, a.l, a.Z, r) * radial_R(b.j, b.l, b.Z, r) * r * r, start=0.0, decay=decay)


def same_center_overlap(a: HydrogenicOrbital, b: HydrogenicOrbital) -> float:
    """Overlap of two orbitals on the same nucleus: radial orthonormality times harmonic components"""
    if a.center != b.center:
        raise DomainError("same_center_overlap needs orbitals on the same nucleus")
    if a.l != b.l:
        return 0.0
    radial = _radial_product(a, b)
    if radial == 0.0:
        return 0.0
    identity = np.eye(3)
    return radial * float(np.dot(_pair_components(a, identity), _pair_components(b, identity)))


def overlap_pair(orb_a: HydrogenicOrbital, orb_b: HydrogenicOrbital, geometry: NuclearGeometry,
                 use_scaled: bool = True, quad: Optional[QuadratureSettings] = None) -> float:
    """<psi_a, psi_b> with the orbitals centered on their nuclei"""
    if orb_a.center == orb_b.center:
        return same_center_overlap(orb_a, orb_b)
    return float(overlap_block([orb_a], [orb_b], geometry, use_scaled, quad)[0, 0])


def _group_by_center(orbitals: Sequence[HydrogenicOrbital]) -> Dict[int, List[int]]:
    groups: Dict[int, List[int]] = defaultdict(list)
    for i, orb in enumerate(orbitals):
        groups[orb.center].append(i)
    return dict(groups)


def _run_tasks(tasks: List, worker, workers: Optional[int]) -> List:
    """Map worker over tasks, on a thread pool when more than one worker is configured"""
    workers = settings.MAX_WORKERS if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(worker, tasks))


def overlap_matrix(left: Sequence[HydrogenicOrbital], right: Sequence[HydrogenicOrbital],
                   geometry: NuclearGeometry, use_scaled: bool = True,
                   quad: Optional[QuadratureSettings] = None, workers: Optional[int] = None) -> np.ndarray:
    """Rectangular matrix of overlaps <left_i, right_j>"""
    result = np.zeros((len(left), len(right)))
    left_groups, right_groups = _group_by_center(left), _group_by_center(right)
    tasks = [(k, l) for k in left_groups for l in right_groups]

    def compute(task: Tuple[int, int]) -> np.ndarray:
        k, l = task
        lefts = [left[i] for i in left_groups[k]]
        rights = [right[j] for j in right_groups[l]]
        if k == l:
            return np.array([[same_center_overlap(a, b) for b in rights] for a in lefts]).reshape(len(lefts), len(rights))
        return overlap_block(lefts, rights, geometry, use_scaled, quad)

    for (k, l), block in zip(tasks, _run_tasks(tasks, compute, workers)):
        result[np.ix_(left_groups[k], right_groups[l])] = block
    return result


def gram_matrix(basis: Sequence[HydrogenicOrbital], geometry: NuclearGeometry, use_scaled: bool = True,
                quad: Optional[QuadratureSettings] = None, workers: Optional[int] = None) -> np.ndarray:
    """
    Symmetric Gram matrix G_ij = <psi_i, psi_j> of a multi-center basis.

    Only blocks k <= l are integrated; the rest follow by symmetry. Assembly order does not
    depend on the thread schedule.
    """
    if not basis:
        raise DomainError("Gram matrix needs a nonempty basis")
    groups = _group_by_center(basis)
    centers = sorted(groups)
    tasks = [(k, l) for a, k in enumerate(centers) for l in centers[a:]]

    def compute(task: Tuple[int, int]) -> np.ndarray:
        k, l = task
        lefts = [basis[i] for i in groups[k]]
        if k == l:
            return np.array([[same_center_overlap(a, b) for b in lefts] for a in lefts])
        return overlap_block(lefts, [basis[j] for j in groups[l]], geometry, use_scaled, quad)

    gram = np.zeros((len(basis), len(basis)))
    for (k, l), block in zip(tasks, _run_tasks(tasks, compute, workers)):
        gram[np.ix_(groups[k], groups[l])] = block
        gram[np.ix_(groups[l], groups[k])] = block.T
    gram = 0.5 * (gram + gram.T)

    excess = float(np.max(np.abs(gram))) - 1.0
    if excess > 1e-9:
        logger.warning(f"Gram entry exceeds 1 by {excess:.3e}; quadrature may be under-resolved")
    logger.debug(f"Gram matrix of size {len(basis)} assembled from {len(tasks)} center blocks")
    return gram
