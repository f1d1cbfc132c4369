"""
Logging utility for the workbench.
Provides simple, consistent logging across all modules.
Logs go to stderr and an optional file; stdout is reserved for JSON reports.
"""

import logging
import os
from pathlib import Path

from dotenv import find_dotenv, load_dotenv


def setup_logger(name: str = "gapbench") -> logging.Logger:
    """
    Set up a logger with file and console handlers.

    LOG_LEVEL and LOG_FILE may come from a `.env` file in the working directory.

    Args:
        name: Logger name (typically module name)

    Returns:
        Configured logger instance
    """
    load_dotenv(find_dotenv(usecwd=True))
    log_level = os.getenv("LOG_LEVEL", "INFO")
    log_file = os.getenv("LOG_FILE", "logs/gapbench.log")
    level = getattr(logging, log_level.upper(), logging.INFO)

    handlers = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers
    )

    logger = logging.getLogger(name)
    logger.setLevel(level)
    return logger


# Default logger instance
logger = setup_logger()
