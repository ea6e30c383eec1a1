"""
Configuration settings for eigenbounds
"""
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent

# Quadrature
ETA_ORDER = int(os.getenv('EIGENBOUNDS_ETA_ORDER', '64'))
XI_ORDER = int(os.getenv('EIGENBOUNDS_XI_ORDER', '48'))
XI_SPAN = float(os.getenv('EIGENBOUNDS_XI_SPAN', '80'))  # e-folds covered by the xi tail
INTEGRATION_TOL = float(os.getenv('EIGENBOUNDS_INTEGRATION_TOL', '1e-12'))
MAX_PANELS = int(os.getenv('EIGENBOUNDS_MAX_PANELS', '60'))
MAX_GAUSS_ORDER = 512

# Variational integrals (graded panels toward the nuclei)
GRADED_ORDER = int(os.getenv('EIGENBOUNDS_GRADED_ORDER', '12'))
GRADED_LEVELS = int(os.getenv('EIGENBOUNDS_GRADED_LEVELS', '20'))
GRADED_RATIO = float(os.getenv('EIGENBOUNDS_GRADED_RATIO', '0.25'))

# Basis limits
MAX_SHELL = int(os.getenv('EIGENBOUNDS_MAX_SHELL', '6'))

# Linear algebra / symmetry tolerances
GRAM_MIN_EIGEN_RATIO = float(os.getenv('EIGENBOUNDS_GRAM_MIN_EIGEN_RATIO', '1e-12'))
GRAM_WARN_CONDITION = float(os.getenv('EIGENBOUNDS_GRAM_WARN_CONDITION', '1e8'))
SYMMETRY_TOL = float(os.getenv('EIGENBOUNDS_SYMMETRY_TOL', '1e-10'))
REP_MATCH_TOL = float(os.getenv('EIGENBOUNDS_REP_MATCH_TOL', '1e-8'))
PROJECTOR_TOL = float(os.getenv('EIGENBOUNDS_PROJECTOR_TOL', '1e-10'))
COMMUTATION_TOL = float(os.getenv('EIGENBOUNDS_COMMUTATION_TOL', '1e-8'))
REP_CROSS_CHECK = os.getenv('EIGENBOUNDS_REP_CROSS_CHECK', 'true').lower() == 'true'

# Optimizer
OPTIMIZER_FTOL = float(os.getenv('EIGENBOUNDS_OPTIMIZER_FTOL', '1e-8'))
OPTIMIZER_MAXITER = int(os.getenv('EIGENBOUNDS_OPTIMIZER_MAXITER', '2000'))
ALPHA_STARTS = (0.8, 1.2, 1.6)
BETA_STARTS = (-0.2, 0.0, 0.3)

# Becke grid for the LCAO upper bound
BECKE_RADIAL_ORDER = int(os.getenv('EIGENBOUNDS_BECKE_RADIAL_ORDER', '80'))
BECKE_THETA_ORDER = int(os.getenv('EIGENBOUNDS_BECKE_THETA_ORDER', '24'))
BECKE_PHI_POINTS = int(os.getenv('EIGENBOUNDS_BECKE_PHI_POINTS', '48'))

# Execution
MAX_WORKERS = int(os.getenv('EIGENBOUNDS_MAX_WORKERS', '1'))

# Logging
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_TO_FILE = os.getenv('LOG_TO_FILE', 'false').lower() == 'true'
LOG_RETENTION_DAYS = int(os.getenv('LOG_RETENTION_DAYS', '30'))

# File paths
DATA_DIR = PROJECT_ROOT / 'data'
TABLES_DIR = DATA_DIR / 'tables'
LOGS_DIR = PROJECT_ROOT / 'logs'


@dataclass(frozen=True)
class QuadratureSettings:
    """Quadrature orders shared by every integral module"""
    eta_order: int = ETA_ORDER
    xi_order: int = XI_ORDER
    xi_span: float = XI_SPAN

    def with_overrides(self, eta_order: Optional[int] = None, xi_order: Optional[int] = None,
                       xi_span: Optional[float] = None) -> 'QuadratureSettings':
        """Return a copy with the given fields replaced"""
        changes = {}
        if eta_order is not None:
            changes['eta_order'] = int(eta_order)
        if xi_order is not None:
            changes['xi_order'] = int(xi_order)
        if xi_span is not None:
            changes['xi_span'] = float(xi_span)
        return replace(self, **changes)


DEFAULT_QUADRATURE = QuadratureSettings()
