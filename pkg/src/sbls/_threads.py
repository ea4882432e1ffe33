"""Thread pool sized by the SBLS_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "parallel_map"]


def worker_count() -> int:
    env = os.environ.get("SBLS_THREADS")
    if env is not None:
        k = int(env)
        if k < 1:
            raise ValueError(f"SBLS_THREADS must be >= 1, got {env}")
        return k
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """map() preserving order, threaded when the pool has more than one worker.

    Callers must pass independent, deterministic jobs; the ordered reduction
    keeps results reproducible regardless of scheduling.
    """
    items = list(items)
    k = min(worker_count(), len(items))
    if k <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
