"""
Logging configuration for acgb.

This module provides a centralized logging configuration for the library and the
command-line driver: a console handler on stderr (stdout carries results), an
optional rotating log file, and structured key/value messages.
"""

import logging
import logging.handlers
import platform
import sys
from pathlib import Path
from typing import Any, Optional, Union

# Default log format
DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Default date format
DEFAULT_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

LOG_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}

DEFAULT_MAX_BYTES = 10 * 1024 * 1024  # 10 MB
DEFAULT_BACKUP_COUNT = 5

ROOT_LOGGER = 'acgb'


class StructuredMessage:
    """Structured log message formatter."""

    def __init__(self, message: str, **kwargs: Any):
        self.message = message
        self.kwargs = kwargs

    def __str__(self) -> str:
        if not self.kwargs:
            return self.message
        items = ", ".join(f"{k}={v!r}" for k, v in self.kwargs.items())
        return f"{self.message} | {items}"


# Alias for easier use
struct_message = StructuredMessage


class ColorFormatter(logging.Formatter):
    """Color formatter for console output."""

    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[32m',       # Green
        'WARNING': '\033[33m',    # Yellow
        'ERROR': '\033[31m',      # Red
        'CRITICAL': '\033[31;1m', # Bright Red
        'RESET': '\033[0m',
    }

    def __init__(self, fmt: str, datefmt: str, colored: bool):
        super().__init__(fmt, datefmt=datefmt)
        self.colored = colored

    def format(self, record: logging.LogRecord) -> str:
        msg = super().format(record)
        if self.colored and record.levelname in self.COLORS:
            return f"{self.COLORS[record.levelname]}{msg}{self.COLORS['RESET']}"
        return msg


def setup_logging(
    log_level: str = 'WARNING',
    log_file: Optional[Union[str, Path]] = None,
    console: bool = True,
    max_bytes: int = DEFAULT_MAX_BYTES,
    backup_count: int = DEFAULT_BACKUP_COUNT,
    log_format: str = DEFAULT_LOG_FORMAT,
    date_format: str = DEFAULT_DATE_FORMAT,
) -> logging.Logger:
    """
    Set up logging configuration.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file. If None, file logging is disabled.
        console: Whether to log to stderr.
        max_bytes: Maximum log file size before rotation.
        backup_count: Number of backup log files to keep.
        log_format: Log message format.
        date_format: Date format for log messages.

    Returns:
        The package logger.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(LOG_LEVELS.get(log_level.upper(), logging.INFO))

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(
            ColorFormatter(log_format, date_format, colored=sys.stderr.isatty())
        )
        logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file).absolute()
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_path,
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding='utf-8'
        )
        file_handler.setFormatter(logging.Formatter(log_format, datefmt=date_format))
        logger.addHandler(file_handler)

    logging.captureWarnings(True)
    logger.propagate = False
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger with the specified name.

    Args:
        name: Logger name. If None, returns the package logger.

    Returns:
        Logger instance under the ``acgb`` namespace.
    """
    if name is None:
        return logging.getLogger(ROOT_LOGGER)
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + '.'):
        return logging.getLogger(name)
    return logging.getLogger(f'{ROOT_LOGGER}.{name}')


def log_system_info(logger: logging.Logger) -> None:
    """Log interpreter and platform information at debug level."""
    logger.debug(
        "%s",
        struct_message(
            "System information",
            python_version=platform.python_version(),
            implementation=platform.python_implementation(),
            platform=platform.platform(),
        ),
    )
