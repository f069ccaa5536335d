"""Order-preserving parallel map capped by SPARSESHALLOW_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

ENV_THREADS = "SPARSESHALLOW_THREADS"


def worker_count(requested: Optional[int] = None) -> int:
    env = os.environ.get(ENV_THREADS)
    cap = int(env) if env and env.strip().isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    if requested is None:
        return cap
    return max(1, min(int(requested), cap))


def pmap(fn: Callable, items: Iterable, workers: Optional[int] = None) -> list:
    """``[fn(x) for x in items]``, possibly on threads; output order is input order."""
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
