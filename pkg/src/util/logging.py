import logging
import colorlog

from pathlib import Path
from typing import Dict

from concurrent_log_handler import ConcurrentRotatingFileHandler

LEVELS = {
    "CRITICAL": logging.CRITICAL,
    "ERROR": logging.ERROR,
    "WARNING": logging.WARNING,
    "INFO": logging.INFO,
    "DEBUG": logging.DEBUG,
    "NOTSET": logging.NOTSET,
}


def initialize_logging(command_name: str, logging_config: Dict, root_path: Path):
    """
    Attaches one handler to the root logger: colored stdout when log_stdout is set,
    otherwise a rotating file under the root. Calling it twice does not duplicate output.
    """
    file_name_length = 33 - len(command_name)
    logger = logging.getLogger()
    for old in list(logger.handlers):
        if getattr(old, "_pointforge", False):
            logger.removeHandler(old)

    handler: logging.Handler
    if logging_config.get("log_stdout", True):
        handler = colorlog.StreamHandler()
        handler.setFormatter(
            colorlog.ColoredFormatter(
                f"%(asctime)s.%(msecs)03d {command_name} %(name)-{file_name_length}s: "
                f"%(log_color)s%(levelname)-8s%(reset)s %(message)s",
                datefmt="%H:%M:%S",
                reset=True,
            )
        )
    else:
        log_path = Path(logging_config.get("log_filename", "log/debug.log")).expanduser()
        if not log_path.is_absolute():
            log_path = root_path / log_path
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = ConcurrentRotatingFileHandler(
            log_path, "a", maxBytes=20 * 1024 * 1024, backupCount=7
        )
        handler.setFormatter(
            logging.Formatter(
                fmt=f"%(asctime)s.%(msecs)03d {command_name} %(name)-{file_name_length}s: %(levelname)-8s %(message)s",
                datefmt="%H:%M:%S",
            )
        )
    setattr(handler, "_pointforge", True)
    logger.addHandler(handler)
    logger.setLevel(LEVELS.get(logging_config.get("log_level", "INFO"), logging.INFO))
