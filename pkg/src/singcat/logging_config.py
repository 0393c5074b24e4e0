"""Structured JSON logging configuration.

Never logs polynomial text; only sizes, dimensions and verdict kinds.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

OWN_HANDLER_MARK = "_singcat_handler"


class JSONFormatter(logging.Formatter):
    """Single-line JSON log formatter."""

    SAFE_FIELDS = {
        "command",
        "variables",
        "degree_cap",
        "tau",
        "mu",
        "size",
        "pivots",
        "candidates",
        "verdict",
        "certificate",
        "side",
        "elapsed_ms",
        "exit_code",
        "error",
        "environment",
        "line",
    }

    def format(self, record: logging.LogRecord) -> str:
        log_entry: dict = {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="milliseconds"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for field in sorted(self.SAFE_FIELDS):
            value = getattr(record, field, None)
            if value is not None:
                log_entry[field] = value

        if record.exc_info:
            log_entry["error"] = log_entry.get("error", "Unhandled exception")

        return json.dumps(log_entry, separators=(",", ":"))


class ContextAdapter(logging.LoggerAdapter):
    """Adds fixed context fields without dropping per-call ``extra``."""

    def process(self, msg, kwargs):
        kwargs["extra"] = {**self.extra, **kwargs.get("extra", {})}
        return msg, kwargs


def setup_logging(
    level: str = "WARNING",
    log_directory: Optional[Path] = None,
    environment: str = "production",
) -> ContextAdapter:
    """Configure structured logging to stderr and, optionally, a JSON-lines file."""

    logger = logging.getLogger("singcat")
    adapter = ContextAdapter(logger, extra={"environment": environment})
    if any(getattr(handler, OWN_HANDLER_MARK, False) for handler in logger.handlers):
        return adapter

    logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    formatter = JSONFormatter()

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setFormatter(formatter)
    setattr(stderr_handler, OWN_HANDLER_MARK, True)
    logger.addHandler(stderr_handler)

    if log_directory is not None:
        log_directory.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S_%f")
        log_file = log_directory / f"session_{timestamp}.jsonl"

        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        setattr(file_handler, OWN_HANDLER_MARK, True)
        logger.addHandler(file_handler)

    logger.propagate = False
    return adapter
