"""
SKEWTHETA - Structured JSON Logger
==================================

One JSON object per line on stderr, carrying a per-process ``RUN_ID``.
Exported CSV/JSON files carry the seed; the log lines carry the seed and the
run id, so any artefact can be traced to the invocation that wrote it.

Usage
-----
    # once, in the CLI entry point
    from src.logger import configure_logging
    configure_logging(CONFIG.log_level)

    # everywhere else
    log = logging.getLogger(__name__)
    log.info("x sample drawn", extra={"N": 2260, "count": 10000, "seed": 0})

Record schema
-------------
    timestamp   UTC, millisecond ISO 8601 with a trailing "Z"
    level       "DEBUG" .. "CRITICAL"
    module      logger name, e.g. "src.limit_laws"
    message     formatted message
    run_id      UUID4, constant per process
    ...         every key passed through extra={}

Values from ``extra`` are made JSON-safe: numpy scalars become Python
numbers, non-finite floats and complex numbers become strings, and anything
else json cannot encode is passed through ``str``.

Records go to stderr only; stdout belongs to command output.  Samplers log
once per call, never per block.
"""

from __future__ import annotations

import datetime
import json
import logging
import math
import sys
import uuid

import numpy as np

RUN_ID: str = str(uuid.uuid4())

# Attributes every LogRecord has; anything else on a record came from extra={}.
_RESERVED: frozenset[str] = frozenset(
    logging.LogRecord("", logging.INFO, "", 0, "", None, None).__dict__
) | {"message", "run_id", "asctime"}


# ---------------------------------------------------------------------------
# Value coercion
# ---------------------------------------------------------------------------

def _jsonable(value):
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, complex):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# Formatter and filter
# ---------------------------------------------------------------------------

class _JsonFormatter(logging.Formatter):
    """LogRecord -> single-line JSON."""

    def format(self, record: logging.LogRecord) -> str:
        stamp = datetime.datetime.fromtimestamp(record.created, tz=datetime.UTC)
        payload: dict = {
            "timestamp": stamp.isoformat(timespec="milliseconds").replace("+00:00", "Z"),
            "level": record.levelname,
            "module": record.name,
            "message": record.getMessage(),
            "run_id": getattr(record, "run_id", RUN_ID),
        }
        payload.update(
            (key, _jsonable(val))
            for key, val in vars(record).items()
            if key not in _RESERVED and not key.startswith("_")
        )
        if record.exc_info and record.exc_info[0] is not None:
            payload["exc"] = self.formatException(record.exc_info).replace("\n", " | ")
        return json.dumps(payload, default=str, separators=(",", ":"))


class _RunIdFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = RUN_ID
        return True


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def configure_logging(level: str = "INFO") -> None:
    """Install the JSON handler on the root logger, replacing any existing ones.

    Args:
        level: Level name, normally ``CONFIG.log_level``.  Unknown names fall
               back to INFO.
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonFormatter())
    handler.addFilter(_RunIdFilter())

    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.getLevelNamesMapping().get(level.upper(), logging.INFO))
    logging.getLogger(__name__).debug("JSON logging configured", extra={"log_level": level})
