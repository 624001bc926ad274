"""Scan configuration.

Only fields that change the numbers live here; execution options (worker
count, output paths, checkpoint file) are passed separately so reports do
not depend on them.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields

from ..errors import InvalidInputError
from .thresholds import EPSILON_RULES

SCANS = ("thm1", "thm2", "thm4", "conditions", "matthews", "corollary3", "baseline", "density-divisor")
XI_MODES = ("scan", "per-prime")
X_MAX = 1 << 63
COROLLARY3_X_MAX = 1 << 40


@dataclass(frozen=True)
class ScanConfig:
    scan: str
    x: int
    bases: tuple[int, ...] = ()
    N: int | None = None
    xi_mode: str = "scan"
    epsilon_rule: str = "default"
    chunk_size: int = 1 << 16
    buckets: tuple[int, ...] | None = None
    verify: bool = False
    max_exceptions: int = 100_000
    y_grid: tuple[float, ...] = ()
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(int(b) for b in self.bases))
        object.__setattr__(self, "y_grid", tuple(self.y_grid))
        if self.buckets is not None:
            object.__setattr__(self, "buckets", tuple(int(b) for b in self.buckets))
        if self.interval is not None:
            object.__setattr__(self, "interval", tuple(self.interval))
        self.validate()

    def validate(self) -> None:
        if self.scan not in SCANS:
            raise InvalidInputError(f"unknown scan {self.scan!r}")
        if not 100 <= self.x <= X_MAX:
            raise InvalidInputError(f"x must lie in [100, 2^63], got {self.x}")
        if self.scan == "corollary3" and self.x > COROLLARY3_X_MAX:
            raise InvalidInputError("corollary3 scans need x <= 2^40")
        if any(b == 0 for b in self.bases):
            raise InvalidInputError("bases must be nonzero")
        if self.xi_mode not in XI_MODES:
            raise InvalidInputError(f"xi_mode must be one of {XI_MODES}")
        if self.epsilon_rule not in EPSILON_RULES:
            raise InvalidInputError(f"epsilon_rule must be one of {EPSILON_RULES}")
        if self.chunk_size < 1:
            raise InvalidInputError("chunk_size must be >= 1")
        if self.max_exceptions < 0:
            raise InvalidInputError("max_exceptions must be >= 0")
        if self.buckets is not None:
            b = self.buckets
            if len(b) < 2 or list(b) != sorted(set(b)) or b[0] < 1 or b[-1] != self.x:
                raise InvalidInputError("bucket edges must increase from >= 1 and end at x")

    @property
    def num_chunks(self) -> int:
        return -(-(self.x - 1) // self.chunk_size)

    def chunk_range(self, index: int) -> tuple[int, int]:
        """Inclusive integer range [lo, hi] of chunk ``index``; chunks tile [2, x]."""
        lo = 2 + index * self.chunk_size
        return lo, min(self.x, lo + self.chunk_size - 1)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("bases", "buckets", "y_grid", "interval"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScanConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()
