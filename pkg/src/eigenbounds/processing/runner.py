"""
Orchestration of bound computations for configurations and reference tables
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence
import numpy as np
import pandas as pd
from loguru import logger

from ..bounds.lowerbound import compute_bounds
from ..bounds.symmetry import GroupSpec, d2h_group, representation, symmetric_lower_bounds, trivial_projector
from ..bounds.variational import lcao_upper_bound, optimize_temple_bound, optimize_upper_bound
from ..config import settings
from ..config.settings import QuadratureSettings
from ..data import reference
from ..data.models import BoundReport, NuclearGeometry
from ..data.run_config import RunConfig

LOWER_BOUND_SHELLS = (1, 2, 3)
SYMMETRY_SHELL = 2


class BoundsRunner:
    """Runs the bound engines over geometries, windows and reference sweeps"""

    def __init__(self, quad: Optional[QuadratureSettings] = None, workers: Optional[int] = None):
        self.quad = quad
        self.workers = settings.MAX_WORKERS if workers is None else workers

    def _map(self, func: Callable, items: Sequence) -> List:
        """Apply func to every item; results keep the input order"""
        if self.workers <= 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(func, items))

    def _inner_workers(self) -> int:
        # Rows already run in parallel
        return 1 if self.workers > 1 else settings.MAX_WORKERS

    def bounds_for(self, geometry: NuclearGeometry, j_cut: int, group: Optional[GroupSpec] = None,
                   R: Optional[float] = None) -> BoundReport:
        """Lower bounds for one window, restricted to the invariant subspace when a group is given"""
        window, gram, report = compute_bounds(geometry, j_cut, quad=self.quad, workers=self._inner_workers(), R=R)
        if group is None:
            return report
        reps = representation(group, window, gram, geometry, quad=self.quad)
        projector = trivial_projector(reps)
        restricted = symmetric_lower_bounds(window, gram, projector, label=geometry.label, R=R)
        restricted.notes = report.notes + [n for n in restricted.notes if n not in report.notes]
        return restricted

    def run_geometry(self, geometry: NuclearGeometry, config: RunConfig) -> List[BoundReport]:
        """One report per window of the configuration"""
        R = geometry.distance(0, 1, use_scaled=False) if geometry.n == 2 else None
        group = config.group_for(geometry)
        reports = [self.bounds_for(geometry, j_cut, group, R) for j_cut in config.windows]
        if not config.temple:
            return reports

        upper = optimize_upper_bound(R)
        for report in reports:
            report.upper_bound = upper.value
            second = report.restricted_bounds or ()
            if len(second) < 2:
                report.notes.append("no second bound for Temple's inequality")
                continue
            report.temple_bound = optimize_temple_bound(R, second[1], start=upper).value
        return reports

    def run_bounds(self, config: RunConfig) -> List[BoundReport]:
        """All reports of a configuration, geometry-major in input order"""
        geometries = config.geometries()
        logger.info(f"Computing bounds for {len(geometries)} geometries and windows {config.windows}")
        per_geometry = self._map(lambda g: self.run_geometry(g, config), geometries)
        reports = [report for group in per_geometry for report in group]
        logger.success(f"Computed {len(reports)} bound reports")
        return reports

    def table1_row(self, R: float) -> Dict[str, float]:
        geometry = NuclearGeometry.h2_plus(R)
        row = {'R': R}
        mu2_sym = None
        for j in LOWER_BOUND_SHELLS:
            if j == SYMMETRY_SHELL:
                report = self.bounds_for(geometry, j, self._h2_group(geometry), R)
                mu2_sym = report.restricted_bounds[1]
            else:
                report = compute_bounds(geometry, j, quad=self.quad, workers=self._inner_workers())[2]
            row[f'lb_j{j}'] = report.bounds[0]
        upper = optimize_upper_bound(R)
        row['mu1_ub'] = upper.value
        row['mu1_lb'] = optimize_temple_bound(R, mu2_sym, start=upper).value
        return row

    def table2_row(self, R: float) -> Dict[str, float]:
        geometry = NuclearGeometry.h3_equilateral(R)
        row = {'R': R}
        for j in LOWER_BOUND_SHELLS:
            row[f'lb_j{j}'] = compute_bounds(geometry, j, quad=self.quad, workers=self._inner_workers())[2].bounds[0]
        row['mu1_ub_lcao'] = lcao_upper_bound(geometry).value
        return row

    def table3_row(self, R: float) -> Dict[str, float]:
        geometry = NuclearGeometry.h2_plus(R)
        report = self.bounds_for(geometry, SYMMETRY_SHELL, self._h2_group(geometry), R)
        return {'R': R, 'mu2_lb': report.bounds[1], 'mu2_lb_sym': report.restricted_bounds[1]}

    @staticmethod
    def _h2_group(geometry: NuclearGeometry) -> GroupSpec:
        return d2h_group(geometry.positions[1] - geometry.positions[0], geometry.centroid())

    def reproduce_table(self, number: int, radii: Optional[Sequence[float]] = None) -> pd.DataFrame:
        """Recompute one reference table; rows follow the reference radii unless radii is given"""
        builders = {1: self.table1_row, 2: self.table2_row, 3: self.table3_row}
        if number not in builders:
            raise KeyError(f"No table {number}")
        radii = list(radii) if radii is not None else reference.table_radii(number)
        logger.info(f"Reproducing table {number} for {len(radii)} distances")
        rows = self._map(builders[number], radii)
        frame = pd.DataFrame(rows, columns=reference.table_columns(number))
        self.log_deviation(number, frame)
        return frame

    @staticmethod
    def log_deviation(number: int, frame: pd.DataFrame) -> float:
        """Largest absolute deviation from the reference table over the rows present in both"""
        expected = reference.reference_table(number)
        merged = frame.merge(expected, on='R', suffixes=('', '_ref'))
        if merged.empty:
            return 0.0
        columns = [c for c in reference.table_columns(number) if c != 'R']
        deviations = {c: float(np.max(np.abs(merged[c] - merged[f'{c}_ref']))) for c in columns}
        worst = max(deviations.values())
        summary = ', '.join(f"{c}: {d:.1e}" for c, d in deviations.items())
        if number == 2:
            # The upper-bound column comes from a different trial function
            worst = max(d for c, d in deviations.items() if c != 'mu1_ub_lcao')
            logger.warning("Table 2 upper bounds use a 1s LCAO trial function; compare them for ordering only")
        logger.info(f"Table {number} deviation from reference: {summary}")
        return worst
