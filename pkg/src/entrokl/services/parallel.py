"""Ordered thread-pool mapping for Monte Carlo loops."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply fn to every item, returning results in input order.

    With workers > 1 the calls run on a thread pool. Each call must derive its
    own random stream from its item, so the output does not depend on workers.

    Args:
        fn: Function of one item
        items: Inputs
        workers: Number of threads (1 runs inline)

    Returns:
        List of results, aligned with items
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
