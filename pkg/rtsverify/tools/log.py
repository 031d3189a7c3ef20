import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Optional

# -------------------------
# Logging
# -------------------------
LOGGER_NAME = "rtsverify"

_fmt = logging.Formatter(
    fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    Configure the package logger once: console handler plus an optional
    rotating file. Level and file default to RTS_LOG_LEVEL / RTS_LOG_FILE.
    Calling it again only adjusts the level.
    """
    level_name = (level or os.getenv("RTS_LOG_LEVEL", "INFO")).upper()
    lvl = getattr(logging, level_name, logging.INFO)
    log_file = log_file or os.getenv("RTS_LOG_FILE")

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(lvl)
    logger.propagate = False  # uvicorn configures the root logger too

    if not getattr(logger, "_rts_configured", False):
        console = logging.StreamHandler()
        console.setFormatter(_fmt)
        logger.addHandler(console)

        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            # rotating file (5MB x 5)
            fh = RotatingFileHandler(log_file, maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8")
            fh.setFormatter(_fmt)
            logger.addHandler(fh)
        logger._rts_configured = True

    for h in logger.handlers:
        h.setLevel(lvl)
    return logger


def preview(text: Any, n: int = 200) -> str:
    s = "" if text is None else str(text)
    s = s.replace("\n", "\\n")
    return s[:n] + ("..." if len(s) > n else "")
