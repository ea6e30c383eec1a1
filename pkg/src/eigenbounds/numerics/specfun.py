"""
Orthogonal polynomials, real spherical harmonics and hydrogenic orbitals
"""
import math
from functools import lru_cache
from typing import TYPE_CHECKING, Union
import numpy as np

from ..exceptions import DomainError
from .quadrature import integrate_semi_infinite

if TYPE_CHECKING:
    from ..data.models import HydrogenicOrbital

ArrayLike = Union[float, np.ndarray]


def _output(x, values: np.ndarray) -> ArrayLike:
    """Return a float for scalar input, an array otherwise"""
    return float(values) if np.ndim(x) == 0 else values


def hydrogenic_level(j: int, Z: int = 1, n: int = 1) -> float:
    """Eigenvalue -n Z^2 / (2 j^2) of -(1/2n) Laplacian - Z/r, in hartree"""
    if j < 1:
        raise DomainError(f"Principal quantum number must be >= 1, got {j}")
    return -n * Z * Z / (2.0 * j * j)


def assoc_legendre(l: int, m: int, x: ArrayLike) -> ArrayLike:
    """
    Associated Legendre function P_l^m(x) without the Condon-Shortley phase.

    Upward recurrence in l starting from P_m^m = (2m-1)!! (1-x^2)^(m/2).
    """
    if m < 0 or l < 0 or m > l:
        raise DomainError(f"assoc_legendre needs 0 <= m <= l, got l={l}, m={m}")
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0 + 1e-14):
        raise DomainError("assoc_legendre argument outside [-1, 1]")
    xs = np.clip(xs, -1.0, 1.0)

    double_factorial = 1.0
    for k in range(1, 2 * m, 2):
        double_factorial *= k
    p_mm = double_factorial * (1.0 - xs * xs) ** (0.5 * m)
    if l == m:
        return _output(x, p_mm)

    p_prev, p_curr = p_mm, (2 * m + 1) * xs * p_mm
    for ll in range(m + 2, l + 1):
        p_prev, p_curr = p_curr, ((2 * ll - 1) * xs * p_curr - (ll + m - 1) * p_prev) / (ll - m)
    return _output(x, p_curr)


def assoc_laguerre(q: int, p: int, x: ArrayLike) -> ArrayLike:
    """
    Associated Laguerre polynomial indexed the classical way (q, p) with q >= p.

    Convention: L_q^p(x) := L^{(p)}_{q-p}(x), the generalized Laguerre polynomial of
    degree q - p and parameter p, so L_q^p(0) = C(q, p) > 0. Three-term recurrence in degree.
    """
    if p < 0 or q < p:
        raise DomainError(f"assoc_laguerre needs q >= p >= 0, got q={q}, p={p}")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise DomainError("assoc_laguerre argument must be nonnegative")

    degree = q - p
    alpha = float(p)
    l_prev = np.ones_like(xs)
    if degree == 0:
        return _output(x, l_prev)
    l_curr = 1.0 + alpha - xs
    for k in range(1, degree):
        l_prev, l_curr = l_curr, ((2 * k + 1 + alpha - xs) * l_curr - (k + alpha) * l_prev) / (k + 1)
    return _output(x, l_curr)


@lru_cache(maxsize=None)
def harmonic_norm(l: int, m: int) -> float:
    """Normalization of the real harmonic N P_l^|m|(cos theta) trig(|m| phi)"""
    am = abs(m)
    if am > l:
        raise DomainError(f"|m| must not exceed l, got l={l}, m={m}")
    ratio = math.factorial(l - am) / math.factorial(l + am)
    if am == 0:
        return math.sqrt((2 * l + 1) / (4.0 * math.pi))
    return math.sqrt((2 * l + 1) / (2.0 * math.pi) * ratio)


def azimuthal_weight(m: int) -> float:
    """Integral of trig(|m| phi)^2 over a full turn"""
    return 2.0 * math.pi if m == 0 else math.pi


def polar_factor(l: int, m: int, cos_theta: ArrayLike) -> ArrayLike:
    """Theta part N P_l^|m|(cos theta) of the real harmonic (m) without the azimuthal factor"""
    return harmonic_norm(l, m) * assoc_legendre(l, abs(m), cos_theta)


def real_sph_harm(l: int, m: int, theta: ArrayLike, phi: ArrayLike) -> ArrayLike:
    """
    Real spherical harmonic, orthonormal on the unit sphere.

    m > 0: N P_l^m(cos theta) cos(m phi); m < 0: N P_l^|m|(cos theta) sin(|m| phi); m = 0: N P_l(cos theta).
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"Invalid harmonic label l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    values = polar_factor(l, m, np.cos(theta))
    if m > 0:
        values = values * np.cos(m * phi)
    elif m < 0:
        values = values * np.sin(-m * phi)
    else:
        values = values * np.ones_like(phi)
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def real_sph_harm_cartesian(l: int, m: int, directions: np.ndarray) -> np.ndarray:
    """Real harmonic evaluated at direction vectors of shape (..., 3); zero vectors map to the pole"""
    directions = np.asarray(directions, dtype=float)
    norm = np.linalg.norm(directions, axis=-1)
    safe = np.where(norm > 0, norm, 1.0)
    cos_theta = np.where(norm > 0, directions[..., 2] / safe, 1.0)
    phi = np.arctan2(directions[..., 1], directions[..., 0])
    values = polar_factor(l, m, np.clip(cos_theta, -1.0, 1.0))
    if m > 0:
        values = values * np.cos(m * phi)
    elif m < 0:
        values = values * np.sin(-m * phi)
    return np.asarray(values, dtype=float) * np.ones(norm.shape)


def radial_R(j: int, l: int, Z: float, r: ArrayLike) -> ArrayLike:
    """
    Normalized hydrogenic radial function, int_0^inf R^2 r^2 dr = 1.

    R = N rho^l exp(-rho/2) L_{j+l}^{2l+1}(rho), rho = 2 Z r / j; positive as r -> 0+.
    """
    if j < 1 or not 0 <= l <= j - 1:
        raise DomainError(f"Invalid quantum numbers (j={j}, l={l})")
    if Z <= 0:
        raise DomainError(f"Charge must be positive, got {Z}")
    rs = np.asarray(r, dtype=float)
    if np.any(rs < 0):
        raise DomainError("Radius must be nonnegative")
    scale = 2.0 * Z / j
    norm = math.sqrt(scale ** 3 * math.factorial(j - l - 1) / (2.0 * j * math.factorial(j + l)))
    rho = scale * rs
    values = norm * rho ** l * np.exp(-0.5 * rho) * assoc_laguerre(j + l, 2 * l + 1, rho)
    return _output(r, np.asarray(values, dtype=float))


def orbital_value(orb: 'HydrogenicOrbital', point: np.ndarray, center_position: np.ndarray) -> ArrayLike:
    """psi evaluated at point(s) of shape (..., 3), polar coordinates taken about center_position"""
    point = np.asarray(point, dtype=float)
    offset = point - np.asarray(center_position, dtype=float)
    local = offset @ orb.axes_matrix().T
    r = np.linalg.norm(offset, axis=-1)
    values = radial_R(orb.j, orb.l, orb.Z, r) * real_sph_harm_cartesian(orb.l, orb.m, local)
    return _output(r, np.asarray(values, dtype=float))


def radial_overlap(j1: int, l1: int, j2: int, l2: int, Z: float = 1.0, tol: float = 1e-13) -> float:
    """int_0^inf R_{j1 l1} R_{j2 l2} r^2 dr for two radial functions of the same charge"""
    decay = Z * (1.0 / j1 + 1.0 / j2)
    return integrate_semi_infinite(
        lambda r: radial_R(j1, l1, Z, r) * radial_R(j2, l2, Z, r) * r * r,
        start=0.0, decay=decay, tol=tol)
