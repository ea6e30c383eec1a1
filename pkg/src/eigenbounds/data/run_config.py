"""
Run configuration for the bounds command
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Union
import numpy as np
from loguru import logger

from ..bounds.symmetry import GroupSpec, d2h_group
from ..config import settings
from ..config.settings import DEFAULT_QUADRATURE, QuadratureSettings
from ..exceptions import ConfigError, EigenboundsError
from .models import NuclearGeometry

SCHEMA_VERSION = 1
TEMPLATES = ('h2+', 'h3++')
FORMATS = ('csv', 'json')
_KNOWN_KEYS = {'schema', 'geometry', 'windows', 'group', 'temple', 'sweep', 'output', 'quadrature'}


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _positive_int(value: Any, name: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool) and value >= 1,
             f"{name} must be a positive integer, got {value!r}")
    return value


def _number(value: Any, name: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value),
             f"{name} must be a finite number, got {value!r}")
    return float(value)


@dataclass
class RunConfig:
    """Validated run configuration"""
    windows: List[int]
    geometry: Optional[NuclearGeometry] = None
    template: Optional[str] = None
    radii: List[float] = field(default_factory=list)
    group: Union[None, str, GroupSpec] = None
    temple: bool = False
    output_path: Optional[str] = None
    output_format: str = 'csv'
    quadrature: QuadratureSettings = DEFAULT_QUADRATURE

    @property
    def is_sweep(self) -> bool:
        return self.template is not None

    def geometries(self) -> List[NuclearGeometry]:
        """Geometries in output order: the sweep radii in input order, or the single geometry"""
        if not self.is_sweep:
            return [self.geometry]
        if self.template == 'h2+':
            return [NuclearGeometry.h2_plus(R) for R in self.radii]
        return [NuclearGeometry.h3_equilateral(R) for R in self.radii]

    def group_for(self, geometry: NuclearGeometry) -> Optional[GroupSpec]:
        """Symmetry group for one geometry; 'D2h' is built along the first internuclear axis"""
        if self.group is None:
            return None
        if isinstance(self.group, GroupSpec):
            return self.group
        if geometry.n < 2:
            raise ConfigError("D2h needs at least two nuclei to fix its axis")
        return d2h_group(geometry.positions[1] - geometry.positions[0], geometry.centroid())

    def to_dict(self) -> dict:
        """Convert back to the JSON representation"""
        if isinstance(self.group, GroupSpec):
            group = {'name': self.group.name, 'center': self.group.center.tolist(),
                     'elements': [q.tolist() for q in self.group.elements]}
        else:
            group = self.group or 'none'
        data = {
            'schema': SCHEMA_VERSION,
            'windows': list(self.windows),
            'group': group,
            'temple': self.temple,
            'output': {'path': self.output_path, 'format': self.output_format},
            'quadrature': {'eta_order': self.quadrature.eta_order, 'xi_order': self.quadrature.xi_order,
                           'xi_span': self.quadrature.xi_span},
        }
        if self.is_sweep:
            data['sweep'] = {'template': self.template, 'R': list(self.radii)}
        else:
            data['geometry'] = self.geometry.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Any) -> 'RunConfig':
        """Create a RunConfig from its JSON representation; every violation raises ConfigError"""
        _require(isinstance(data, dict), "Configuration must be a JSON object")
        _require(data.get('schema') == SCHEMA_VERSION,
                 f"Unsupported schema {data.get('schema')!r}; expected {SCHEMA_VERSION}")
        unknown = set(data) - _KNOWN_KEYS
        _require(not unknown, f"Unknown configuration keys: {sorted(unknown)}")

        windows = data.get('windows', [1])
        _require(isinstance(windows, list) and len(windows) > 0, "windows must be a non-empty list of shells")
        windows = [_positive_int(j, 'window shell') for j in windows]
        _require(max(windows) <= settings.MAX_SHELL,
                 f"window shells must not exceed {settings.MAX_SHELL}, got {max(windows)}")

        geometry, template, radii = cls._parse_geometry(data)
        if geometry is not None:
            # heavier nuclei contribute shells up to j_cut * Z / Z_min
            deepest = max(windows) * max(geometry.charges) // min(geometry.charges)
            _require(deepest <= settings.MAX_SHELL,
                     f"window {max(windows)} needs shell {deepest} on the heaviest nucleus (max {settings.MAX_SHELL})")
        group = cls._parse_group(data.get('group', 'none'))

        temple = data.get('temple', False)
        _require(isinstance(temple, bool), f"temple must be true or false, got {temple!r}")
        if temple:
            _require(max(windows) >= 2, "temple needs a window with at least two bounds (j_cut >= 2)")
            _require(template == 'h2+' or (geometry is not None and geometry.charges == (1, 1)),
                     "temple is only available for two unit charges")
            if group is None:
                # Temple takes its separation from the symmetry-restricted second bound
                logger.info("temple requested without a group; restricting to D2h")
                group = 'D2h'

        output = data.get('output', {})
        _require(isinstance(output, dict), "output must be an object")
        output_format = output.get('format', 'csv')
        _require(output_format in FORMATS, f"output format must be one of {FORMATS}, got {output_format!r}")
        output_path = output.get('path')
        _require(output_path is None or isinstance(output_path, str), "output path must be a string")

        quadrature = cls._parse_quadrature(data.get('quadrature', {}))
        return cls(windows=windows, geometry=geometry, template=template, radii=radii, group=group,
                   temple=temple, output_path=output_path, output_format=output_format, quadrature=quadrature)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'RunConfig':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError as e:
            logger.error(f"Configuration file not found: {path}")
            raise ConfigError(f"Configuration file not found: {path}") from e
        except json.JSONDecodeError as e:
            logger.error(f"Configuration is not valid JSON: {e}")
            raise ConfigError(f"Configuration is not valid JSON: {e}") from e
        return cls.from_dict(data)

    @staticmethod
    def _parse_geometry(data: dict):
        has_geometry, has_sweep = 'geometry' in data, 'sweep' in data
        _require(has_geometry != has_sweep, "Exactly one of geometry or sweep must be given")
        if has_sweep:
            sweep = data['sweep']
            _require(isinstance(sweep, dict), "sweep must be an object")
            template = sweep.get('template')
            _require(template in TEMPLATES, f"sweep template must be one of {TEMPLATES}, got {template!r}")
            radii = sweep.get('R', [])
            _require(isinstance(radii, list), "sweep R must be a list")
            radii = [_number(R, 'R') for R in radii]
            _require(all(R > 0 for R in radii), "sweep R values must be positive")
            return None, template, radii

        raw = data['geometry']
        _require(isinstance(raw, dict), "geometry must be an object")
        nuclei = raw.get('nuclei')
        _require(isinstance(nuclei, list) and len(nuclei) >= 1, "geometry needs at least one nucleus")
        for nucleus in nuclei:
            _require(isinstance(nucleus, dict), "each nucleus must be an object")
            position = nucleus.get('position')
            _require(isinstance(position, list) and len(position) == 3, "nucleus position must be [x, y, z]")
            for x in position:
                _number(x, 'position coordinate')
            _positive_int(nucleus.get('charge', 1), 'nuclear charge')
        try:
            return NuclearGeometry.from_dict(raw), None, []
        except EigenboundsError as e:
            raise ConfigError(f"Invalid geometry: {e}") from e

    @staticmethod
    def _parse_group(raw: Any) -> Union[None, str, GroupSpec]:
        if raw in (None, 'none'):
            return None
        if raw == 'D2h':
            return 'D2h'
        _require(isinstance(raw, dict), f"group must be 'none', 'D2h' or an object, got {raw!r}")
        elements = raw.get('elements')
        _require(isinstance(elements, list) and len(elements) > 0, "explicit group needs a list of elements")
        center = raw.get('center', [0.0, 0.0, 0.0])
        try:
            matrices = [np.asarray(m, dtype=float) for m in elements]
            center = np.asarray(center, dtype=float)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Group elements must be numeric 3x3 matrices: {e}") from e
        _require(all(m.shape == (3, 3) for m in matrices), "group elements must be 3x3 matrices")
        _require(center.shape == (3,), "group center must be [x, y, z]")
        try:
            return GroupSpec.from_matrices(str(raw.get('name', 'custom')), matrices, center)
        except EigenboundsError as e:
            raise ConfigError(f"Invalid group: {e}") from e

    @staticmethod
    def _parse_quadrature(raw: Any) -> QuadratureSettings:
        _require(isinstance(raw, dict), "quadrature must be an object")
        unknown = set(raw) - {'eta_order', 'xi_order', 'xi_span'}
        _require(not unknown, f"Unknown quadrature keys: {sorted(unknown)}")
        eta_order = _positive_int(raw['eta_order'], 'eta_order') if 'eta_order' in raw else None
        xi_order = _positive_int(raw['xi_order'], 'xi_order') if 'xi_order' in raw else None
        _require(all(order is None or order <= settings.MAX_GAUSS_ORDER for order in (eta_order, xi_order)),
                 f"quadrature orders must not exceed {settings.MAX_GAUSS_ORDER}")
        xi_span = _number(raw['xi_span'], 'xi_span') if 'xi_span' in raw else None
        _require(xi_span is None or xi_span > 0, "xi_span must be positive")
        return DEFAULT_QUADRATURE.with_overrides(eta_order=eta_order, xi_order=xi_order, xi_span=xi_span)
