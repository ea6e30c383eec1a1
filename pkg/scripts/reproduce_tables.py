from typing import Sequence
from loguru import logger

from eigenbounds.config import settings
from eigenbounds.exceptions import EigenboundsError
from eigenbounds.processing.runner import BoundsRunner
from eigenbounds.storage.writers import ResultWriter


def reproduce_tables(tables: Sequence[int] = (1, 2, 3)):
    """
    Recomputes every reference table and writes each one as CSV (4 decimals)
    and JSON (full precision) into data/tables/.
    """
    logger.info(f"Reproducing tables {list(tables)} into {settings.TABLES_DIR}")
    runner = BoundsRunner()

    for number in tables:
        try:
            frame = runner.reproduce_table(number)
        except EigenboundsError as e:
            logger.error(f"Table {number} failed: {e}")
            continue

        ResultWriter('csv', float_format='%.4f').write_table(frame, settings.TABLES_DIR / f"table{number}.csv")
        ResultWriter('json').write_table(frame, settings.TABLES_DIR / f"table{number}.json")
        logger.success(f"Table {number} written ({len(frame)} rows)")


if __name__ == "__main__":
    # Configure logger
    logger.add("logs/reproduce_tables.log", rotation="50 MB", level="INFO")
    reproduce_tables()
