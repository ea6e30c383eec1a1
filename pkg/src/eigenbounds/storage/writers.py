"""
CSV and JSON emission of bound reports and reproduced tables
"""
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Union
import pandas as pd
from loguru import logger

from ..data.models import BoundReport
from ..exceptions import ConfigError

# Scalar columns of a report, in output order
REPORT_COLUMNS = ['label', 'R', 'j_cut', 'basis_size', 'shift', 'mu1_lb', 'mu2_lb', 'mu1_lb_sym', 'mu2_lb_sym',
                  'mu1_ub', 'mu1_lb_temple', 'gram_condition']


def _clean(value):
    """JSON-safe value: NaN and missing numbers become null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, list):
        return [_clean(v) for v in value]
    return value


class ResultWriter:
    """Writes DataFrames as CSV or JSON to a file or stdout"""

    def __init__(self, fmt: str = 'csv', float_format: str = '%.15g'):
        if fmt not in ('csv', 'json'):
            raise ConfigError(f"Unknown output format {fmt!r}")
        self.fmt = fmt
        self.float_format = float_format

    def reports_to_dataframe(self, reports: Sequence[BoundReport]) -> pd.DataFrame:
        """Flat table of report scalars; always has the full column set"""
        if not reports:
            return pd.DataFrame(columns=REPORT_COLUMNS)
        return pd.DataFrame([report.to_dict() for report in reports]).reindex(columns=REPORT_COLUMNS)

    def render_reports(self, reports: Sequence[BoundReport]) -> str:
        if self.fmt == 'json':
            records = [{key: _clean(value) for key, value in report.to_dict().items()} for report in reports]
            return json.dumps(records, indent=2) + '\n'
        return self.reports_to_dataframe(reports).to_csv(index=False, float_format=self.float_format,
                                                         lineterminator='\n')

    def render_table(self, frame: pd.DataFrame) -> str:
        if self.fmt == 'json':
            records = [{key: _clean(value) for key, value in row.items()} for row in frame.to_dict(orient='records')]
            return json.dumps(records, indent=2) + '\n'
        return frame.to_csv(index=False, float_format=self.float_format, lineterminator='\n')

    def write(self, text: str, path: Optional[Union[str, Path]] = None) -> None:
        """Write text to path (parents created) or to stdout"""
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
        except OSError as e:
            logger.error(f"Could not write results to {path}: {e}")
            raise ConfigError(f"Could not write results to {path}: {e}") from e
        logger.info(f"Results written to {path}")

    def write_reports(self, reports: List[BoundReport], path: Optional[Union[str, Path]] = None) -> str:
        text = self.render_reports(reports)
        self.write(text, path)
        return text

    def write_table(self, frame: pd.DataFrame, path: Optional[Union[str, Path]] = None) -> str:
        text = self.render_table(frame)
        self.write(text, path)
        return text
