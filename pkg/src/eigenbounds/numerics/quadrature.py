"""
Gauss-Legendre rules and composite schemes for finite and semi-infinite intervals
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple
import numpy as np
from loguru import logger

from ..config import settings
from ..exceptions import ConvergenceError, DomainError

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes and positive weights on an interval; b = inf marks a semi-infinite rule"""
    nodes: np.ndarray
    weights: np.ndarray
    interval: Tuple[float, float]

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def scaled(self, a: float, b: float) -> 'QuadRule':
        """Affine image of a [-1, 1] rule on [a, b]"""
        lo, hi = self.interval
        if (lo, hi) != (-1.0, 1.0):
            raise DomainError("Only [-1, 1] rules can be rescaled")
        half = 0.5 * (b - a)
        return QuadRule(a + half * (self.nodes + 1.0), half * self.weights, (a, b))

    def integrate(self, f: Integrand) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> QuadRule:
    """
    Gauss-Legendre rule on [-1, 1].

    Roots of P_order by Newton iteration on the three-term recurrence, started from the
    Tricomi estimate; weights 2 / ((1 - x^2) P'(x)^2).
    """
    if order < 1 or order > settings.MAX_GAUSS_ORDER:
        raise DomainError(f"Gauss-Legendre order must be in [1, {settings.MAX_GAUSS_ORDER}], got {order}")
    if order == 1:
        return QuadRule(np.array([0.0]), np.array([2.0]), (-1.0, 1.0))

    k = np.arange(1, order + 1)
    x = (1.0 - (order - 1) / (8.0 * order ** 3)) * np.cos(np.pi * (k - 0.25) / (order + 0.5))

    for iteration in range(100):
        p_prev, p_curr = np.ones_like(x), x.copy()
        for n in range(2, order + 1):
            p_prev, p_curr = p_curr, ((2 * n - 1) * x * p_curr - (n - 1) * p_prev) / n
        derivative = order * (x * p_curr - p_prev) / (x * x - 1.0)
        step = p_curr / derivative
        x = x - step
        if np.max(np.abs(step)) < 3e-15:
            break
    else:
        if np.max(np.abs(step)) > 1e-12:
            raise ConvergenceError(f"Newton iteration for Gauss-Legendre order {order} stalled",
                                   estimates=(float(np.max(np.abs(step))),))

    # Recompute the derivative at the converged roots
    p_prev, p_curr = np.ones_like(x), x.copy()
    for n in range(2, order + 1):
        p_prev, p_curr = p_curr, ((2 * n - 1) * x * p_curr - (n - 1) * p_prev) / n
    derivative = order * (x * p_curr - p_prev) / (x * x - 1.0)
    weights = 2.0 / ((1.0 - x * x) * derivative * derivative)

    idx = np.argsort(x)
    nodes = x[idx]
    weights = weights[idx]
    # Enforce exact symmetry of the rule
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return QuadRule(nodes, weights, (-1.0, 1.0))


def _panel_edges(start: float, decay: float, span: float, first_width: Optional[float] = None) -> List[float]:
    """Edges start, start+h, start+3h, start+7h, ... until span e-folds are covered"""
    width = first_width if first_width is not None else 1.0 / decay
    edges = [start]
    while (edges[-1] - start) * decay < span:
        edges.append(edges[-1] + width)
        width *= 2.0
    return edges


def composite_tail_rule(start: float, decay: float, order: int, span: float) -> QuadRule:
    """Fixed composite Gauss-Legendre rule on [start, inf) with doubling panel widths"""
    if decay <= 0:
        raise DomainError(f"Decay rate must be positive, got {decay}")
    base = gauss_legendre(order)
    edges = _panel_edges(start, decay, span)
    panels = [base.scaled(a, b) for a, b in zip(edges[:-1], edges[1:])]
    return QuadRule(np.concatenate([p.nodes for p in panels]),
                    np.concatenate([p.weights for p in panels]), (start, math.inf))


def graded_rule(a: float, b: float, order: int, levels: int, ratio: float, toward: str = 'b') -> QuadRule:
    """
    Composite rule on [a, b] with panels shrinking geometrically toward one endpoint.

    Panel edges sit at distances (b - a) * ratio^k from the graded endpoint, k = 0..levels.
    """
    if not 0.0 < ratio < 1.0:
        raise DomainError(f"Grading ratio must lie in (0, 1), got {ratio}")
    base = gauss_legendre(order)
    length = b - a
    distances = [length * ratio ** k for k in range(levels + 1)] + [0.0]
    if toward == 'b':
        edges = [b - d for d in distances]
    elif toward == 'a':
        edges = [a + d for d in reversed(distances)]
    else:
        raise DomainError(f"toward must be 'a' or 'b', got {toward!r}")
    edges = sorted(edges)
    panels = [base.scaled(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    return QuadRule(np.concatenate([p.nodes for p in panels]),
                    np.concatenate([p.weights for p in panels]), (a, b))


def join_rules(*rules: QuadRule) -> QuadRule:
    """Rule on the union of adjacent intervals"""
    return QuadRule(np.concatenate([r.nodes for r in rules]), np.concatenate([r.weights for r in rules]),
                    (rules[0].interval[0], rules[-1].interval[1]))


def _accumulate(f: Integrand, start: float, width: float, order: int, tol: float,
                max_panels: int) -> Tuple[float, float, int]:
    """Sum doubling panels until one contributes less than tol of the accumulated magnitude"""
    base = gauss_legendre(order)
    total, magnitude = 0.0, 0.0
    a = start
    for panel in range(max_panels):
        contribution = base.scaled(a, a + width).integrate(f)
        total += contribution
        magnitude += abs(contribution)
        if panel >= 2 and abs(contribution) <= tol * magnitude:
            return total, magnitude, panel + 1
        a += width
        width *= 2.0
    raise ConvergenceError(f"Panel budget of {max_panels} exhausted", estimates=(total,))


def integrate_semi_infinite(f: Integrand, start: float, decay: float, tol: Optional[float] = None,
                            order: Optional[int] = None, max_panels: Optional[int] = None) -> float:
    """
    Integral of f over [start, inf) for f decaying like exp(-decay x).

    Composite Gauss-Legendre on panels of width h, 2h, 4h, ... (h = 1/decay) until a panel
    contributes less than tol of the accumulated magnitude; then panel count and order are
    doubled once and the two results must agree within tol. Returns the refined value.
    """
    if decay <= 0:
        raise DomainError(f"Decay rate must be positive, got {decay}")
    tol = settings.INTEGRATION_TOL if tol is None else tol
    order = settings.XI_ORDER if order is None else order
    max_panels = settings.MAX_PANELS if max_panels is None else max_panels

    h = 1.0 / decay
    coarse, _, coarse_panels = _accumulate(f, start, h, order, tol, max_panels)
    try:
        fine, magnitude, fine_panels = _accumulate(f, start, 0.5 * h, min(2 * order, settings.MAX_GAUSS_ORDER),
                                                   tol, 2 * max_panels)
    except ConvergenceError as e:
        raise ConvergenceError(f"Refined integration failed: {e}", estimates=(coarse,) + (e.estimates or ())) from e

    # Relative to the integrated magnitude so that cancelling integrands (orthogonality) pass
    if abs(fine - coarse) > tol * max(magnitude, 1e-300):
        logger.error(f"Semi-infinite integral disagrees after refinement: {coarse!r} vs {fine!r}")
        raise ConvergenceError("Refinement changed the integral beyond tolerance", estimates=(coarse, fine))
    logger.debug(f"Semi-infinite integral {fine:.15g} ({coarse_panels}/{fine_panels} panels)")
    return fine


def integrate_xi(f: Integrand, decay: float, tol: Optional[float] = None) -> float:
    """Integral over xi in [1, inf) of an integrand decaying like exp(-decay xi)"""
    return integrate_semi_infinite(f, start=1.0, decay=decay, tol=tol)
