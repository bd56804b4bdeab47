"""
Logging for mp2s-lab.

Library modules only call ``logging.getLogger(__name__)``. Everything lives under
the ``src`` namespace, so one call to ``setup_logger("src", ...)`` (the CLI makes
it from Settings) decides where engine, builder and fooling-search messages go.
Console output is written to stderr through Rich; stdout is reserved for
verdicts and JSON reports.

Example:
    >>> from src.utils.logger import setup_logger, log_with_context
    >>> logger = setup_logger(name="src", level="DEBUG")
    >>> log_with_context(logger, "info", "sweep finished", runs=256, disagreements=0)
"""

import json
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler

_CONFIGURED: Dict[str, logging.Logger] = {}
_PLAIN_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
_LOG_DIR = Path(__file__).resolve().parents[2] / "logs"


class StructuredFormatter(logging.Formatter):
    """Appends the ``structured_data`` of a record (see log_with_context) as sorted JSON."""

    def format(self, record: logging.LogRecord) -> str:
        context = record.__dict__.pop("structured_data", None)
        if context is not None:
            try:
                record.msg = f"{record.msg} | {json.dumps(context, sort_keys=True, default=str)}"
            except (TypeError, ValueError) as e:
                record.msg = f"{record.msg} | [unserializable context: {e}]"
        return super().format(record)


def _level(name: str) -> int:
    level = logging.getLevelName(name.upper())
    if isinstance(level, int):
        return level
    print(f"Warning: unknown log level '{name}', using INFO", file=sys.stderr)
    return logging.INFO


def _console_handler(use_rich: bool) -> logging.Handler:
    if use_rich:
        handler: logging.Handler = RichHandler(
            console=Console(stderr=True),
            rich_tracebacks=True,
            show_path=False,
            markup=False,
            log_time_format="[%Y-%m-%d %H:%M:%S]",
        )
        handler.setFormatter(StructuredFormatter("%(message)s"))
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredFormatter(_PLAIN_FORMAT, datefmt=_DATE_FORMAT))
    return handler


def _file_handler(log_file: str, log_dir: Optional[Path], max_bytes: int, backup_count: int) -> logging.Handler:
    directory = Path(log_dir) if log_dir is not None else _LOG_DIR
    directory.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(
        directory / log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
    )
    handler.setFormatter(StructuredFormatter(_PLAIN_FORMAT, datefmt=_DATE_FORMAT))
    return handler


def setup_logger(
    name: str = "src",
    log_file: Optional[str] = None,
    level: str = "INFO",
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    use_rich: bool = True,
    log_dir: Optional[Path] = None,
) -> logging.Logger:
    """
    Configure a logger once; later calls only change its level.

    Args:
        name: Logger name, normally "src" so that every module is covered
        log_file: File name for a rotating log under ``log_dir`` (console only if None)
        level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        max_bytes: Rotation size of the log file
        backup_count: Rotated files to keep
        use_rich: Rich console output instead of plain lines
        log_dir: Directory for log files (default: logs/ at the project root)

    Returns:
        The configured logger
    """
    logger = _CONFIGURED.get(name)
    if logger is not None:
        logger.setLevel(_level(level))
        return logger

    logger = logging.getLogger(name)
    logger.setLevel(_level(level))
    logger.propagate = False
    logger.handlers.clear()
    logger.addHandler(_console_handler(use_rich))

    if log_file:
        try:
            logger.addHandler(_file_handler(log_file, log_dir, max_bytes, backup_count))
        except OSError as e:
            logger.error(f"Cannot open log file {log_file}: {e}")

    _CONFIGURED[name] = logger
    return logger


def get_logger(name: str) -> logging.Logger:
    """Return a configured logger, setting it up with defaults on first use."""
    return _CONFIGURED.get(name) or setup_logger(name=name)


def log_with_context(logger: logging.Logger, level: str, message: str, **context: Any) -> None:
    """
    Log ``message`` with keyword context rendered as JSON.

    Example:
        >>> log_with_context(logger, "info", "bucket statistics", x0=16, x1=4, x2=4)
    """
    log_method = getattr(logger, level.lower(), logger.info)
    log_method(message, extra={"structured_data": context})


def log_exception(logger: logging.Logger, message: str = "An error occurred", **context: Any) -> None:
    """
    Log the exception being handled, with traceback and optional context.

    Example:
        >>> try:
        ...     run(automaton, s, t)
        ... except StallError:
        ...     log_exception(logger, "run stalled", automaton="builtin:sqrt:4")
    """
    extra = {"structured_data": context} if context else None
    logger.error(message, exc_info=True, extra=extra)
