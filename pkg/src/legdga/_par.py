"""Optional thread parallelism, capped by LEGDGA_THREADS; results keep input order."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def threads() -> int:
    try:
        return max(1, int(os.environ.get("LEGDGA_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    n = min(threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
