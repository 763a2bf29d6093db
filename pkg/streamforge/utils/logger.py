import os
import sys
import threading
from datetime import datetime

from dotenv import load_dotenv

from streamforge.errors import ConfigError

load_dotenv()  # reads .env file from current or parent dir

LEVELS = {"ERROR": 40, "WARNING": 30, "INFO": 20, "DEBUG": 10}
THRESHOLDS = {"error": "ERROR", "info": "INFO", "debug": "DEBUG"}


class Logger:
    """
    Simple logger: writes to stderr in development, appends to a log file otherwise.
    Stdout is left alone because it carries the synthesized scheme.
    """

    def __init__(self, threshold: str = None, env: str = None, log_file: str = None):
        self.env = env or os.getenv("ENVIRONMENT", "development")
        raw = (threshold or os.getenv("STREAMFORGE_LOG", "info")).lower()
        if raw not in THRESHOLDS:
            raise ConfigError(f"STREAMFORGE_LOG must be one of {sorted(THRESHOLDS)}, got '{raw}'")
        self.threshold = THRESHOLDS[raw]
        self.log_file = log_file or os.getenv("STREAMFORGE_LOG_FILE", "streamforge.log")
        self._lock = threading.Lock()

    def enabled(self, level: str) -> bool:
        return LEVELS.get(level, 20) >= LEVELS[self.threshold]

    def log(self, message: str, level: str = "INFO"):
        if not self.enabled(level):
            return
        ts = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        line = f"[{ts}] [{level}] {message}"
        with self._lock:
            if self.env == "development":
                print(line, file=sys.stderr)
            else:
                with open(self.log_file, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")


class NullLogger:
    """Drops everything; used when a caller passes no logger."""

    def enabled(self, level: str) -> bool:
        return False

    def log(self, message: str, level: str = "INFO"):
        return


def ensure_logger(logger):
    return logger if logger is not None else NullLogger()
