"""
Logging set-up for eigenbounds
"""
import sys
from pathlib import Path
from typing import Optional
from loguru import logger

from ..config import settings


def setup_logging(level: Optional[str] = None, log_file: Optional[Path] = None) -> None:
    """Route loguru output to stderr and, optionally, a rotating log file"""
    level = (level or settings.LOG_LEVEL).upper()
    logger.remove()
    logger.add(sys.stderr, level=level,
               format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{function} - {message}")

    if log_file is None and settings.LOG_TO_FILE:
        log_file = settings.LOGS_DIR / 'eigenbounds.log'

    if log_file is not None:
        try:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            logger.add(str(log_file), level=level, rotation="50 MB",
                       retention=f"{settings.LOG_RETENTION_DAYS} days")
            logger.debug(f"Logging to file {log_file}")
        except OSError as e:
            # Console logging still works
            logger.warning(f"Could not open log file {log_file}: {e}")
