from __future__ import annotations
import logging
import logging.config

from .config import load_logging_config


def setup_logging(level: int | str | None = None) -> None:
    cfg = load_logging_config()
    logging.config.dictConfig(cfg)
    if level is not None:
        logging.getLogger().setLevel(level)
