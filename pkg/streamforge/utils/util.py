import hashlib
import random
import re
import threading
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

VALUE_NUMERATORS = range(-10, 11)   # values are k/2 for k in -10..10


class NameSupply:
    """
    Hands out fresh names `<prefix><n>`. One supply per call site keeps numbering
    deterministic; the counter is lock protected so a supply may be shared by
    worker threads.
    """

    def __init__(self, prefix: str, start: int = 1):
        if not prefix:
            raise ValueError("NameSupply needs a non-empty prefix")
        self.prefix = prefix
        self.sequence = start - 1
        self.sequence_lock = threading.Lock()

    def fresh(self) -> str:
        with self.sequence_lock:
            self.sequence += 1
            seq = self.sequence
        return f"{self.prefix}{seq}"


def natural_key(name: str) -> Tuple[str, int]:
    """Sort key that puts v2 before v10."""
    m = re.match(r"^(.*?)(\d+)$", name)
    if not m:
        return (name, -1)
    return (m.group(1), int(m.group(2)))


def derive_seed(seed: int, *parts) -> int:
    """
    Stable 64-bit seed for a sub-task, independent of scheduling and of
    PYTHONHASHSEED.

    Example:
        derive_seed(7, "hole", 2) always gives the same value
    """
    text = ":".join([str(seed)] + [str(p) for p in parts])
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def random_value(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(VALUE_NUMERATORS), 2)


def random_list(rng: random.Random, min_len: int, max_len: int) -> List[Fraction]:
    if min_len < 0 or max_len < min_len:
        raise ValueError(f"bad list length range ({min_len}, {max_len})")
    return [random_value(rng) for _ in range(rng.randint(min_len, max_len))]


def random_extras(rng: random.Random, names: Sequence[str]) -> Dict[str, Fraction]:
    return {n: random_value(rng) for n in names}


def list_lengths_for(count: int, min_len: int, max_len: int, rng: random.Random) -> List[int]:
    """Lengths for `count` samples; 0 and 1 always come first when the range allows them."""
    fixed = [n for n in (0, 1) if min_len <= n <= max_len][:count]
    return fixed + [rng.randint(min_len, max_len) for _ in range(count - len(fixed))]
