"""Worker-pool helper; TMT_THREADS caps the pool size."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence


def worker_count() -> int:
    env = os.environ.get("TMT_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def pool_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Order-preserving map over a process pool (serial when capped at 1)."""
    n = worker_count() if threads is None else threads
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    try:
        with ProcessPoolExecutor(max_workers=n) as ex:
            chunk = max(1, len(items) // (4 * n))
            return list(ex.map(fn, items, chunksize=chunk))
    except (ImportError, AttributeError, TypeError, OSError):
        # unpicklable work items or a restricted environment: run serially
        return [fn(x) for x in items]
