import dataclasses
import os
from dataclasses import dataclass
from typing import Tuple

from dotenv import load_dotenv

from streamforge.errors import ConfigError

load_dotenv()  # reads .env file from current or parent dir


@dataclass(frozen=True)
class SearchConfig:
    max_size: int = 25
    timeout_seconds: float = 600.0          # per hole
    test_count: int = 200
    list_length_range: Tuple[int, int] = (0, 12)
    value_grid: str = "k/2 for integer k in -10..10"
    seed: int = 0
    # symbolic layer
    unroll_depth: int = 3
    node_budget: int = 10_000
    axiom_checks: int = 50
    bounded_lengths: int = 3
    # enumeration
    search_sample_count: int = 32
    # template solving
    sample_lengths: Tuple[int, ...] = tuple(range(1, 12))
    sample_retries: int = 5
    min_interp_points: int = 6
    # driver
    final_test_count: int = 500
    workers: int = 1
    use_decomposition: bool = True
    use_symbolic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "list_length_range", tuple(self.list_length_range))
        object.__setattr__(self, "sample_lengths", tuple(self.sample_lengths))
        positive = ("max_size", "timeout_seconds", "test_count", "unroll_depth", "node_budget",
                    "axiom_checks", "search_sample_count", "sample_retries", "min_interp_points",
                    "final_test_count", "workers")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        lo, hi = self.list_length_range
        if lo < 0 or hi < lo:
            raise ConfigError(f"list_length_range must satisfy 0 <= min <= max, got {self.list_length_range}")
        if self.bounded_lengths < 0:
            raise ConfigError(f"bounded_lengths must be nonnegative, got {self.bounded_lengths}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if len(set(self.sample_lengths)) != len(self.sample_lengths) or any(n <= 0 for n in self.sample_lengths):
            raise ConfigError(f"sample_lengths must be distinct positive ints, got {self.sample_lengths}")

    def replace(self, **changes) -> "SearchConfig":
        return dataclasses.replace(self, **changes)


_INT_VARS = {
    "max_size": "STREAMFORGE_MAX_SIZE",
    "test_count": "STREAMFORGE_TESTS",
    "seed": "STREAMFORGE_SEED",
    "unroll_depth": "STREAMFORGE_UNROLL_DEPTH",
    "workers": "STREAMFORGE_WORKERS",
}


def _flag(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


def load_search_config(**overrides) -> SearchConfig:
    """Defaults, then environment (.env supported), then explicit overrides."""
    env_config = {}
    try:
        if os.getenv("STREAMFORGE_TIMEOUT"):
            env_config["timeout_seconds"] = float(os.getenv("STREAMFORGE_TIMEOUT"))
        for key, var in _INT_VARS.items():
            if os.getenv(var):
                env_config[key] = int(os.getenv(var))
    except ValueError as exc:
        raise ConfigError(f"invalid numeric setting in environment: {exc}") from exc
    if os.getenv("STREAMFORGE_NO_DECOMPOSE"):
        env_config["use_decomposition"] = not _flag(os.getenv("STREAMFORGE_NO_DECOMPOSE"))
    if os.getenv("STREAMFORGE_NO_SYMBOLIC"):
        env_config["use_symbolic"] = not _flag(os.getenv("STREAMFORGE_NO_SYMBOLIC"))

    # Allow kwargs override (for tests or CLI flags)
    env_config.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(env_config) - {f.name for f in dataclasses.fields(SearchConfig)}
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    return SearchConfig(**env_config)


def default_config() -> SearchConfig:
    return SearchConfig()


__all__ = ["SearchConfig", "load_search_config", "default_config"]
