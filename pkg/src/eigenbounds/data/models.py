"""
Data models for eigenbounds
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np

from ..exceptions import DomainError, GeometryError, NumericalError
from ..numerics.specfun import hydrogenic_level


@dataclass(frozen=True, eq=False)
class NuclearGeometry:
    """Nuclear positions (bohr) and integer charges of a one-electron Hamiltonian"""
    positions: np.ndarray
    charges: Tuple[int, ...]
    label: str = ''

    def __post_init__(self):
        positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if positions.ndim != 2 or positions.shape[1] != 3 or positions.shape[0] < 1:
            raise GeometryError(f"Positions must be a non-empty (n, 3) array, got shape {positions.shape}")
        if not np.all(np.isfinite(positions)):
            raise GeometryError("Positions must be finite")
        charges = tuple(int(z) for z in self.charges)
        if len(charges) != positions.shape[0]:
            raise GeometryError(f"{len(charges)} charges given for {positions.shape[0]} nuclei")
        if any(z < 1 for z in charges) or any(float(z) != float(c) for z, c in zip(charges, self.charges)):
            raise GeometryError(f"Charges must be positive integers, got {self.charges}")
        for k in range(len(charges)):
            for l in range(k + 1, len(charges)):
                if np.linalg.norm(positions[k] - positions[l]) < 1e-10:
                    raise GeometryError(f"Nuclei {k} and {l} coincide")
        positions.setflags(write=False)
        object.__setattr__(self, 'positions', positions)
        object.__setattr__(self, 'charges', charges)

    @property
    def n(self) -> int:
        """Number of nuclei (also the kinetic scaling of each fragment operator)"""
        return len(self.charges)

    def scaled_positions(self) -> np.ndarray:
        """Nuclear positions after the dilation by n"""
        return self.n * self.positions

    def position(self, k: int, use_scaled: bool = True) -> np.ndarray:
        return self.n * self.positions[k] if use_scaled else self.positions[k]

    def distance(self, k: int, l: int, use_scaled: bool = True) -> float:
        return float(np.linalg.norm(self.position(k, use_scaled) - self.position(l, use_scaled)))

    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def to_dict(self) -> dict:
        """Convert to the run-configuration representation"""
        return {
            'label': self.label,
            'nuclei': [{'position': [float(x) for x in p], 'charge': z}
                       for p, z in zip(self.positions, self.charges)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'NuclearGeometry':
        """Create a geometry from its run-configuration representation"""
        nuclei = data.get('nuclei', [])
        return cls(
            positions=np.array([nucleus['position'] for nucleus in nuclei], dtype=float).reshape(-1, 3),
            charges=tuple(nucleus.get('charge', 1) for nucleus in nuclei),
            label=data.get('label', ''),
        )

    @classmethod
    def h2_plus(cls, R: float) -> 'NuclearGeometry':
        """Two unit charges on the z-axis, R bohr apart"""
        return cls(np.array([[0.0, 0.0, -R / 2], [0.0, 0.0, R / 2]]), (1, 1), label=f"h2+ R={R:g}")

    @classmethod
    def h3_equilateral(cls, R: float) -> 'NuclearGeometry':
        """Three unit charges on an equilateral triangle of side R in the xy-plane"""
        radius = R / np.sqrt(3.0)
        angles = np.pi / 2 + np.array([0.0, 2.0, 4.0]) * np.pi / 3
        positions = np.column_stack([radius * np.cos(angles), radius * np.sin(angles), np.zeros(3)])
        return cls(positions, (1, 1, 1), label=f"h3++ R={R:g}")


@dataclass(frozen=True)
class HydrogenicOrbital:
    """
    One hydrogenic eigenfunction psi^k_{jlm} of the fragment operator of nucleus `center`.
    m > 0 selects the cosine flavour of the real harmonic, m < 0 the sine flavour.
    `axes` (global -> local rotation, row-major) orients the harmonic; None means the global frame.
    """
    center: int
    j: int
    l: int
    m: int
    Z: int = 1
    n_scale: int = 1
    axes: Optional[Tuple[Tuple[float, float, float], ...]] = None

    def __post_init__(self):
        if self.center < 0:
            raise DomainError(f"Invalid center index {self.center}")
        if self.j < 1 or not 0 <= self.l <= self.j - 1 or abs(self.m) > self.l:
            raise DomainError(f"Invalid quantum numbers (j={self.j}, l={self.l}, m={self.m})")
        if self.Z < 1 or self.n_scale < 1:
            raise DomainError(f"Charge and scaling must be positive, got Z={self.Z}, n={self.n_scale}")

    @property
    def eigenvalue(self) -> float:
        """Eigenvalue of the fragment operator in hartree"""
        return hydrogenic_level(self.j, self.Z, self.n_scale)

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return (self.center, self.j, self.l, self.m)

    def axes_matrix(self) -> np.ndarray:
        if self.axes is None:
            return np.eye(3)
        return np.array(self.axes, dtype=float)

    def transformed(self, center: int, axes: np.ndarray) -> 'HydrogenicOrbital':
        """Same function moved to another nucleus with a re-oriented harmonic"""
        return replace(self, center=center, axes=tuple(tuple(float(x) for x in row) for row in axes))

    @property
    def label(self) -> str:
        letter = 'spdfghi'[self.l]
        return f"{self.j}{letter}({self.m:+d})@{self.center}" if self.l else f"{self.j}s@{self.center}"


@dataclass(frozen=True, eq=False)
class SpectralWindow:
    """Basis and thresholds selected by lambda in [lambda_j, lambda_{j+1})"""
    j_cut: int
    lam: float
    basis: Tuple[HydrogenicOrbital, ...]
    shells: Tuple[int, ...]
    lambda_tilde: Tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([orb.eigenvalue for orb in self.basis])

    @property
    def centers(self) -> np.ndarray:
        return np.array([orb.center for orb in self.basis], dtype=int)

    @property
    def shift(self) -> float:
        """Sum of the per-center thresholds lambda~_k"""
        return float(sum(self.lambda_tilde))

    def row_scaling(self) -> np.ndarray:
        """lambda_i - lambda~_{k(i)} for every basis function"""
        tilde = np.asarray(self.lambda_tilde)
        return self.eigenvalues - tilde[self.centers]

    def index(self) -> Dict[Tuple[int, int, int, int], int]:
        return {orb.key: i for i, orb in enumerate(self.basis)}


@dataclass
class BoundReport:
    """Ordered lower bounds for one geometry and window, plus optional refinements"""
    bounds: Tuple[float, ...]
    window: SpectralWindow
    gram_condition: float
    label: str = ''
    R: Optional[float] = None
    restricted_bounds: Optional[Tuple[float, ...]] = None
    upper_bound: Optional[float] = None
    temple_bound: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.bounds = tuple(float(b) for b in self.bounds)
        if any(b2 < b1 for b1, b2 in zip(self.bounds, self.bounds[1:])):
            raise NumericalError("Bounds must be ascending")
        if self.restricted_bounds is not None:
            self.restricted_bounds = tuple(float(b) for b in self.restricted_bounds)

    @staticmethod
    def _pick(values: Optional[Sequence[float]], index: int) -> Optional[float]:
        if values is None or len(values) <= index:
            return None
        return values[index]

    def to_dict(self) -> dict:
        """Convert to a flat dictionary for CSV/JSON emission"""
        return {
            'label': self.label,
            'R': self.R,
            'j_cut': self.window.j_cut,
            'basis_size': self.window.size,
            'shift': self.window.shift,
            'mu1_lb': self._pick(self.bounds, 0),
            'mu2_lb': self._pick(self.bounds, 1),
            'mu1_lb_sym': self._pick(self.restricted_bounds, 0),
            'mu2_lb_sym': self._pick(self.restricted_bounds, 1),
            'mu1_ub': self.upper_bound,
            'mu1_lb_temple': self.temple_bound,
            'gram_condition': self.gram_condition,
            'bounds': list(self.bounds),
            'restricted_bounds': list(self.restricted_bounds) if self.restricted_bounds is not None else None,
            'notes': list(self.notes),
        }
