"""Order-preserving map over worker processes."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def ordered_map(fn: Callable[[T], R], items: Iterable[T],
                threads: int = 1) -> list[R]:
    """Apply ``fn`` to every item; results come back in input order.

    With ``threads > 1`` the calls run in a process pool. ``fn`` and the items
    must then be picklable (module-level functions, plain data).
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items))
    logger.debug("dispatching %d tasks to %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
