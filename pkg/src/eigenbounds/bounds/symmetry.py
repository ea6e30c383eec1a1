"""
Point-group representations on the fragment basis and symmetry-restricted bounds
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import numpy as np
from loguru import logger

from ..config import settings
from ..config.settings import QuadratureSettings
from ..data.models import BoundReport, HydrogenicOrbital, NuclearGeometry, SpectralWindow
from ..exceptions import GeometryError, SymmetryError
from ..integrals.rotation import check_orthogonal, real_sh_rotation
from ..integrals.twocenter import complete_frame, overlap_matrix
from ..numerics.linalg import inv_sqrt, solve_spd, sqrt_spd, sym_eigen
from .lowerbound import build_B, lower_bounds, whitened_matrix

# Sign patterns of the D2h elements in their own frame: E, C2(z), C2(y), C2(x), i, sigma(xy), sigma(xz), sigma(yz)
D2H_SIGNS = ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1),
             (-1, -1, -1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Orthogonal maps x -> center + Q (x - center) that permute the nuclei"""
    name: str
    elements: Tuple[np.ndarray, ...]
    center: np.ndarray

    def __post_init__(self):
        elements = tuple(check_orthogonal(q, tol=settings.SYMMETRY_TOL) for q in self.elements)
        if not elements:
            raise SymmetryError(f"Group {self.name} has no elements")
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, 'center', np.asarray(self.center, dtype=float).reshape(3))

    @property
    def order(self) -> int:
        return len(self.elements)

    def find(self, matrix: np.ndarray) -> int:
        """Index of the element equal to matrix, or -1"""
        for index, q in enumerate(self.elements):
            if np.max(np.abs(q - matrix)) < settings.SYMMETRY_TOL:
                return index
        return -1

    def product_index(self, a: int, b: int) -> int:
        """Index of Q_a Q_b"""
        index = self.find(self.elements[a] @ self.elements[b])
        if index < 0:
            raise SymmetryError(f"Group {self.name} is not closed under multiplication")
        return index

    def validate(self):
        """Check the identity is present and the set is closed"""
        if self.find(np.eye(3)) < 0:
            raise SymmetryError(f"Group {self.name} does not contain the identity")
        for a in range(self.order):
            for b in range(self.order):
                self.product_index(a, b)

    def apply(self, index: int, points: np.ndarray, center: Optional[np.ndarray] = None) -> np.ndarray:
        """Image of points (..., 3) under element index, about center (default the group center)"""
        origin = self.center if center is None else np.asarray(center, dtype=float)
        return origin + (np.asarray(points, dtype=float) - origin) @ self.elements[index].T

    def permutations(self, geometry: NuclearGeometry) -> List[Tuple[int, ...]]:
        """Nuclear permutation induced by every element; charges must be preserved"""
        scale = max(1.0, float(np.max(np.abs(geometry.positions))))
        images = []
        for index in range(self.order):
            moved = self.apply(index, geometry.positions)
            perm = []
            for k, point in enumerate(moved):
                distances = np.linalg.norm(geometry.positions - point, axis=1)
                target = int(np.argmin(distances))
                if distances[target] > settings.SYMMETRY_TOL * scale:
                    raise SymmetryError(f"Element {index} of {self.name} does not map nucleus {k} onto a nucleus")
                if geometry.charges[target] != geometry.charges[k]:
                    raise SymmetryError(f"Element {index} of {self.name} maps nuclei of different charge")
                perm.append(target)
            if len(set(perm)) != len(perm):
                raise SymmetryError(f"Element {index} of {self.name} does not permute the nuclei")
            images.append(tuple(perm))
        return images

    @classmethod
    def from_matrices(cls, name: str, matrices: Sequence, center: Sequence[float]) -> 'GroupSpec':
        """Build and validate a group from explicit 3x3 matrices"""
        try:
            group = cls(name=name, elements=tuple(np.asarray(m, dtype=float) for m in matrices), center=center)
        except GeometryError as e:
            raise SymmetryError(f"Group {name}: {e}") from e
        group.validate()
        return group

    @classmethod
    def trivial(cls, center: Sequence[float] = (0.0, 0.0, 0.0)) -> 'GroupSpec':
        return cls(name='C1', elements=(np.eye(3),), center=center)


def d2h_group(axis: Sequence[float], center: Sequence[float]) -> GroupSpec:
    """
    The eight D2h elements for a linear molecule along axis.

    The perpendicular axes follow the pair-frame completion rule, so for the z-axis
    the elements are the diagonal sign matrices.
    """
    frame = complete_frame(np.asarray(axis, dtype=float))
    elements = tuple(frame.T @ np.diag(signs) @ frame for signs in D2H_SIGNS)
    return GroupSpec(name='D2h', elements=elements, center=center)


def harmonic_parity(l: int, m: int, signs: Sequence[int]) -> int:
    """Sign of Y_lm under (x, y, z) -> (sx x, sy y, sz z)"""
    sx, sy, sz = (int(s) for s in signs)
    am = abs(m)
    planar = sx ** am if m >= 0 else sx ** (am + 1) * sy
    return planar * sz ** (l - am)


@dataclass(frozen=True, eq=False)
class RepMatrix:
    """Matrix of U(g) on the coefficient vectors of a window basis"""
    element: int
    matrix: np.ndarray
    permutation: Tuple[int, ...]
    method: str = 'rotation'


def _is_diagonal(q: np.ndarray) -> bool:
    return bool(np.max(np.abs(q - np.diag(np.diag(q)))) < settings.SYMMETRY_TOL)


def _fast_rep(q: np.ndarray, perm: Tuple[int, ...], basis: Sequence[HydrogenicOrbital]) -> Tuple[np.ndarray, str]:
    """U(g) psi^k_jlm = sum_m' D(l, Q)[m, m'] psi^pi(k)_jlm' for orbitals in the global frame"""
    index = {orb.key: i for i, orb in enumerate(basis)}
    matrix = np.zeros((len(basis), len(basis)))
    diagonal = _is_diagonal(q)
    signs = np.sign(np.diag(q)) if diagonal else None
    rotations = {}
    for col, orb in enumerate(basis):
        target = perm[orb.center]
        if diagonal:
            row = index.get((target, orb.j, orb.l, orb.m))
            if row is None:
                raise SymmetryError(f"Basis is not closed under the group: missing image of {orb.label}")
            matrix[row, col] = harmonic_parity(orb.l, orb.m, signs)
            continue
        if orb.l not in rotations:
            rotations[orb.l] = real_sh_rotation(orb.l, q)
        for offset, coefficient in enumerate(rotations[orb.l][orb.m + orb.l]):
            row = index.get((target, orb.j, orb.l, offset - orb.l))
            if row is None:
                raise SymmetryError(f"Basis is not closed under the group: missing image of {orb.label}")
            matrix[row, col] = coefficient
    return matrix, 'signed-permutation' if diagonal else 'rotation'


def _general_rep(q: np.ndarray, perm: Tuple[int, ...], basis: Sequence[HydrogenicOrbital], gram: np.ndarray,
                 geometry: NuclearGeometry, quad: Optional[QuadratureSettings]) -> np.ndarray:
    """G^-1 W with W_jl = <psi_j, U(g) psi_l> integrated directly"""
    moved = [orb.transformed(perm[orb.center], orb.axes_matrix() @ q.T) for orb in basis]
    overlaps = overlap_matrix(list(basis), moved, geometry, use_scaled=True, quad=quad)
    return solve_spd(gram, overlaps)


def rep_matrix(group: GroupSpec, element: int, window: SpectralWindow, gram: np.ndarray,
               geometry: NuclearGeometry, cross_check: Optional[bool] = None,
               quad: Optional[QuadratureSettings] = None, permutation: Optional[Tuple[int, ...]] = None) -> RepMatrix:
    """
    Representation matrix of one group element on the window basis.

    The closed form (signed permutation for axis-aligned elements) is returned; with
    cross_check it is compared against G^-1 <psi_j, U(g) psi_l>.
    """
    cross_check = settings.REP_CROSS_CHECK if cross_check is None else cross_check
    q = group.elements[element]
    perm = permutation if permutation is not None else group.permutations(geometry)[element]
    basis = list(window.basis)

    if all(orb.axes is None for orb in basis):
        matrix, method = _fast_rep(q, perm, basis)
        if cross_check:
            general = _general_rep(q, perm, basis, gram, geometry, quad)
            mismatch = float(np.max(np.abs(general - matrix)))
            if mismatch > settings.REP_MATCH_TOL:
                logger.error(f"Representation paths disagree for {group.name}[{element}]: {mismatch:.3e}")
                raise SymmetryError(f"Representation of element {element} of {group.name} is inconsistent "
                                    f"(paths differ by {mismatch:.3e})")
            logger.debug(f"{group.name}[{element}] representation cross-checked ({mismatch:.2e})")
    else:
        matrix, method = _general_rep(q, perm, basis, gram, geometry, quad), 'general'
    return RepMatrix(element=element, matrix=matrix, permutation=tuple(perm), method=method)


def representation(group: GroupSpec, window: SpectralWindow, gram: np.ndarray, geometry: NuclearGeometry,
                   cross_check: Optional[bool] = None, quad: Optional[QuadratureSettings] = None) -> List[RepMatrix]:
    """RepMatrix of every group element, in group order"""
    perms = group.permutations(geometry)
    reps = [rep_matrix(group, index, window, gram, geometry, cross_check, quad, perms[index])
            for index in range(group.order)]
    identity = group.find(np.eye(3))
    if identity >= 0 and np.max(np.abs(reps[identity].matrix - np.eye(window.size))) > settings.REP_MATCH_TOL:
        raise SymmetryError("Identity element is not represented by the identity matrix")
    return reps


def trivial_projector(reps: Sequence[RepMatrix]) -> np.ndarray:
    """P = (1/|G|) sum_g U(g), idempotent onto the invariant coefficient vectors"""
    if not reps:
        raise SymmetryError("Projector needs at least one representation matrix")
    projector = np.mean([rep.matrix for rep in reps], axis=0)
    defect = float(np.max(np.abs(projector @ projector - projector)))
    if defect > settings.PROJECTOR_TOL * max(1.0, float(np.max(np.abs(projector)))):
        logger.error(f"Projector is not idempotent (defect {defect:.3e})")
        raise SymmetryError(f"Averaged representation is not a projector (defect {defect:.3e})")
    return projector


def restricted_basis(gram: np.ndarray, projector: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the range of G^1/2 P G^-1/2"""
    whitened = sqrt_spd(gram) @ projector @ inv_sqrt(gram)
    values, vectors = sym_eigen(0.5 * (whitened + whitened.T))
    return vectors[:, values > 0.5]


def symmetric_lower_bounds(window: SpectralWindow, gram: np.ndarray, projector: np.ndarray,
                           label: str = '', R: Optional[float] = None) -> BoundReport:
    """
    Lower bounds for the invariant subspace, alongside the unrestricted ones.

    The spectrum of B is restricted to range(P) on an orthonormal basis of that range,
    so the zero eigenvalues of BP on ker(P) never enter the ordering.
    """
    b = build_B(window, gram)
    commutator = float(np.max(np.abs(b @ projector - projector @ b)))
    if commutator > settings.COMMUTATION_TOL * max(1.0, float(np.max(np.abs(b)))):
        logger.error(f"B and P do not commute ({commutator:.3e})")
        raise SymmetryError(f"Group does not match the geometry: ||BP - PB|| = {commutator:.3e}")

    report = lower_bounds(window, gram, label=label, R=R)
    vectors = restricted_basis(gram, projector)
    if vectors.shape[1] == 0:
        report.restricted_bounds = ()
        report.notes.append("invariant subspace is empty")
        return report
    restricted = vectors.T @ whitened_matrix(window, gram) @ vectors
    values, _ = sym_eigen(0.5 * (restricted + restricted.T))
    report.restricted_bounds = tuple(float(v) for v in values + window.shift)
    logger.debug(f"Invariant subspace of dimension {vectors.shape[1]} of {window.size}")
    return report
