"""
Logging setup
"""
import logging
from typing import Optional

from core.config import settings


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure the root logger once per process

    Args:
        level: Level name overriding settings.LOG_LEVEL
    """
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        force=True,
    )
    # celery is chatty at INFO in eager mode
    logging.getLogger("celery").setLevel(logging.WARNING)
