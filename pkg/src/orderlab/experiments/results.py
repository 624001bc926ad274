"""Scan outputs: density curves, exception reports and per-chunk partials."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


def sig12(v: float) -> float:
    """Round to 12 significant digits, the precision every report carries."""
    return float(f"{float(v):.12g}")


def dyadic_edges(x: int, start: int = 64) -> list[int]:
    """Bucket edges 1, start, 2*start, ... , x; buckets are (e_i, e_i+1]."""
    edges = [1]
    e = start
    while e < x:
        edges.append(e)
        e *= 2
    edges.append(x)
    return edges


def bucket_index(edges: list[int], values: np.ndarray) -> np.ndarray:
    return np.searchsorted(np.asarray(edges, dtype=np.float64), np.asarray(values, dtype=np.float64), side="left") - 1


def bincount(edges: list[int], values, mask=None) -> list[int]:
    idx = bucket_index(edges, values)
    if mask is not None:
        idx = idx[np.asarray(mask, dtype=bool)]
    return np.bincount(idx, minlength=len(edges) - 1).astype(np.int64).tolist()


@dataclass(frozen=True)
class DensityCurve:
    """Bucketed (lo, hi, population, exceptions) rows over (edges[0], x]."""

    buckets: tuple[tuple[int, int, int, int], ...]

    @classmethod
    def from_counts(cls, edges, population, exceptions) -> "DensityCurve":
        rows = tuple(
            (int(edges[i]), int(edges[i + 1]), int(population[i]), int(exceptions[i])) for i in range(len(edges) - 1)
        )
        return cls(rows)

    @property
    def population(self) -> int:
        return sum(b[2] for b in self.buckets)

    @property
    def exceptions(self) -> int:
        return sum(b[3] for b in self.buckets)

    def fractions(self) -> list[float]:
        return [sig12(e / n) if n else 0.0 for _, _, n, e in self.buckets]

    def to_list(self) -> list[list[int]]:
        return [list(b) for b in self.buckets]

    @classmethod
    def from_list(cls, rows) -> "DensityCurve":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))


@dataclass
class ChunkResult:
    """Partial state for one chunk; merging is order-dependent only via rows."""

    counts: dict[str, list[int]] = field(default_factory=dict)
    rows: list[tuple] = field(default_factory=list)
    aux_rows: list[tuple] = field(default_factory=list)
    tallies: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add_counts(self, name: str, values) -> None:
        cur = self.counts.get(name)
        self.counts[name] = list(values) if cur is None else [a + b for a, b in zip(cur, values)]

    def tally(self, name: str, v: int = 1) -> None:
        self.tallies[name] = self.tallies.get(name, 0) + int(v)


class Accumulator:
    """Merges chunk results in ascending chunk order, capping row lists."""

    def __init__(self, max_rows: int):
        self.max_rows = max_rows
        self.state = ChunkResult()
        self.overflow = 0
        self.aux_overflow = 0
        self.chunks_done = 0

    def merge(self, part: ChunkResult) -> None:
        for name, vals in part.counts.items():
            self.state.add_counts(name, vals)
        for name, v in part.tallies.items():
            self.state.tally(name, v)
        room = self.max_rows - len(self.state.rows)
        self.state.rows.extend(part.rows[: max(room, 0)])
        self.overflow += max(len(part.rows) - max(room, 0), 0)
        room = self.max_rows - len(self.state.aux_rows)
        self.state.aux_rows.extend(part.aux_rows[: max(room, 0)])
        self.aux_overflow += max(len(part.aux_rows) - max(room, 0), 0)
        for note in part.notes:
            if len(self.state.notes) < 100:
                self.state.notes.append(note)
        self.chunks_done += 1

    def to_dict(self) -> dict[str, Any]:
        s = self.state
        return {
            "chunks_done": self.chunks_done,
            "counts": s.counts,
            "rows": [list(r) for r in s.rows],
            "aux_rows": [list(r) for r in s.aux_rows],
            "tallies": s.tallies,
            "notes": s.notes,
            "overflow": self.overflow,
            "aux_overflow": self.aux_overflow,
        }

    @classmethod
    def from_dict(cls, d: dict, max_rows: int) -> "Accumulator":
        acc = cls(max_rows)
        acc.chunks_done = d["chunks_done"]
        acc.state = ChunkResult(
            counts={k: list(v) for k, v in d["counts"].items()},
            rows=[tuple(r) for r in d["rows"]],
            aux_rows=[tuple(r) for r in d["aux_rows"]],
            tallies=dict(d["tallies"]),
            notes=list(d["notes"]),
        )
        acc.overflow = d["overflow"]
        acc.aux_overflow = d["aux_overflow"]
        return acc


@dataclass(frozen=True)
class ExceptionReport:
    """Everything a scan produces; JSON round-trips exactly via to_dict/from_dict."""

    scan: str
    version: str
    config: dict
    config_hash: str
    rules: dict
    columns: tuple[str, ...]
    exceptions: tuple[tuple, ...]
    exceptions_overflow: int
    density: DensityCurve
    series: dict
    aux_columns: tuple[str, ...] = ()
    aux_rows: tuple[tuple, ...] = ()
    summary: dict = field(default_factory=dict)

    @property
    def exception_count(self) -> int:
        return self.density.exceptions

    def series_curve(self, name: str) -> DensityCurve:
        """Density curve of a named bucket series against the population."""
        pop = [b[2] for b in self.density.buckets]
        edges = [self.density.buckets[0][0]] + [b[1] for b in self.density.buckets]
        return DensityCurve.from_counts(edges, pop, self.series[name])

    def to_dict(self) -> dict:
        return {
            "tool": "orderlab",
            "version": self.version,
            "scan": self.scan,
            "config": self.config,
            "config_hash": self.config_hash,
            "rules": self.rules,
            "columns": list(self.columns),
            "exceptions": [list(r) for r in self.exceptions],
            "exceptions_overflow": self.exceptions_overflow,
            "density": self.density.to_list(),
            "series": self.series,
            "aux_columns": list(self.aux_columns),
            "aux_rows": [list(r) for r in self.aux_rows],
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExceptionReport":
        return cls(
            scan=d["scan"],
            version=d["version"],
            config=d["config"],
            config_hash=d["config_hash"],
            rules=d["rules"],
            columns=tuple(d["columns"]),
            exceptions=tuple(tuple(r) for r in d["exceptions"]),
            exceptions_overflow=d["exceptions_overflow"],
            density=DensityCurve.from_list(d["density"]),
            series={k: list(v) for k, v in d["series"].items()},
            aux_columns=tuple(d["aux_columns"]),
            aux_rows=tuple(tuple(r) for r in d["aux_rows"]),
            summary=d["summary"],
        )
