"""Chunked, resumable scan driver.

The range [2, x] is cut into fixed chunks. Workers evaluate chunks
independently and the parent merges them strictly in chunk order, so the
final report does not depend on the worker count or on interruptions.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from ..errors import CheckpointMismatchError
from .config import ScanConfig
from .results import Accumulator, ChunkResult

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = 1


def default_threads() -> int:
    env = os.environ.get("ORDERLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer ORDERLAB_THREADS=%r", env)
    return 1


def _evaluate(args) -> ChunkResult:
    config_dict, index = args
    from .scans import evaluate_chunk

    return evaluate_chunk(ScanConfig.from_dict(config_dict), index)


def write_checkpoint(path, config: ScanConfig, acc: Accumulator) -> None:
    path = Path(path)
    body = {
        "format": CHECKPOINT_FORMAT,
        "config_hash": config.digest(),
        "config": config.to_dict(),
        "last_chunk": acc.chunks_done - 1,
        "state": acc.to_dict(),
    }
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(body, separators=(",", ":")))
    os.replace(tmp, path)


def read_checkpoint(path, config: ScanConfig) -> Accumulator | None:
    path = Path(path)
    if not path.exists():
        return None
    body = json.loads(path.read_text())
    if body.get("config_hash") != config.digest():
        raise CheckpointMismatchError(f"checkpoint {path} was written for a different scan configuration")
    acc = Accumulator.from_dict(body["state"], config.max_exceptions)
    if acc.chunks_done - 1 != body["last_chunk"]:
        raise CheckpointMismatchError(f"checkpoint {path} is internally inconsistent")
    return acc


def run_chunks(
    config: ScanConfig,
    threads: int = 1,
    checkpoint=None,
    stop_after: int | None = None,
    progress: Callable[[int, int], None] | None = None,
    checkpoint_interval: float = 5.0,
) -> Accumulator | None:
    """Evaluate and merge all chunks; returns None if stopped by ``stop_after``."""
    acc = read_checkpoint(checkpoint, config) if checkpoint else None
    if acc is None:
        acc = Accumulator(config.max_exceptions)
    start = acc.chunks_done
    total = config.num_chunks
    todo = range(start, total)
    if stop_after is not None:
        todo = range(start, min(total, start + stop_after))
    cfg = config.to_dict()
    last_write = time.monotonic()

    def consume(results):
        nonlocal last_write
        for part in results:
            acc.merge(part)
            if progress:
                progress(acc.chunks_done, total)
            if checkpoint and time.monotonic() - last_write >= checkpoint_interval:
                write_checkpoint(checkpoint, config, acc)
                last_write = time.monotonic()

    jobs = [(cfg, i) for i in todo]
    if threads <= 1 or len(jobs) <= 1:
        consume(_evaluate(j) for j in jobs)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            consume(pool.map(_evaluate, jobs))
    if checkpoint:
        write_checkpoint(checkpoint, config, acc)
    if acc.chunks_done < total:
        return None
    return acc
