"""Deterministic fan-out helpers.

Results always come back in input order, so anything reduced from them is
independent of how many workers ran.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "DISCORDLAB_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Resolve a worker count; ``None`` reads ``DISCORDLAB_THREADS`` and 0 means auto."""
    if requested is None:
        raw = os.environ.get(ENV_THREADS, "1").strip() or "1"
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError("worker count must be >= 0")
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def ordered_map(fn, items, workers: int | None = None) -> list:
    items = list(items)
    n = worker_count(workers)
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
