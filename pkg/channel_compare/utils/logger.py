"""Logging utilities for channel_compare."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a module logger.

    Handlers are installed once on the root logger by ``setup_rich_logging``;
    library modules only name their logger so that importing the package never
    writes to standard output.

    Args:
        name: Logger name (usually __name__)
        level: Optional logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        Logger instance
    """
    logger = logging.getLogger(name)
    if level:
        logger.setLevel(getattr(logging, level.upper()))
    return logger


def setup_rich_logging(level: str = "WARNING") -> None:
    """Route log records through a RichHandler on standard error."""
    if level.upper() not in LOG_LEVELS:
        raise ValueError(f"unknown log level {level!r}; choose from {', '.join(LOG_LEVELS)}")

    console = Console(stderr=True)
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True, show_path=False)],
        force=True,
    )
