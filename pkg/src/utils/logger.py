"""
UCERT - Uniform-measurement Certification
Logging Configuration
"""

import sys
from pathlib import Path
from typing import Optional

from loguru import logger


CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[component]}</cyan> | <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[component]} | {message}"


def setup_logging(
    log_file: Optional[str] = None,
    level: str = "INFO",
    console: bool = True
):
    """
    Configure application logging.

    Args:
        log_file: Optional path of a rotating log file
        level: Minimum level for every sink
        console: Also log to stderr (colourised)
    """
    # Remove default handler
    logger.remove()
    logger.configure(extra={"component": "ucert"})

    if console:
        logger.add(
            sys.stderr,
            format=CONSOLE_FORMAT,
            level=level,
            colorize=True
        )

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        logger.add(
            str(log_path),
            format=FILE_FORMAT,
            level=level,
            rotation="10 MB",
            retention="1 week",
            compression="zip"
        )


def get_logger(name: Optional[str] = None):
    """Get a logger bound to a component name (the module's short name)."""
    component = (name or "ucert").rsplit(".", 1)[-1]
    return logger.bind(component=component)
