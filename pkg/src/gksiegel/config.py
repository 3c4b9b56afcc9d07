"""Process-wide knobs: enumeration budget and worker count."""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

DEFAULT_BUDGET = 2 * 10**8
BUDGET_ENV = "GKSIEGEL_BUDGET"

T = TypeVar("T")
R = TypeVar("R")

_lock = threading.Lock()
_state = {"budget": None, "threads": None}


def get_budget() -> int:
    if _state["budget"] is not None:
        return _state["budget"]
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value > 0:
            return value
    return DEFAULT_BUDGET


def set_budget(value: int | None) -> None:
    if value is not None and value <= 0:
        raise ValueError("budget must be positive")
    with _lock:
        _state["budget"] = value


def get_threads() -> int:
    return _state["threads"] or (os.cpu_count() or 1)


def set_threads(value: int | None) -> None:
    if value is not None and value <= 0:
        raise ValueError("thread count must be positive")
    with _lock:
        _state["threads"] = value


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> List[R]:
    """Map ``fn`` over ``items`` on a thread pool; results keep input order."""
    items = list(items)
    workers = threads or get_threads()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
