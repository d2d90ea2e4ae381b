# Worker partitioning of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Partition an index range into contiguous chunks and process the chunks in worker threads.

Results come back in index order, so the concatenated output does not depend on the number
of threads.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Tuple, TypeVar

import trio

logger = logging.getLogger(__name__)

T = TypeVar("T")

#: Chunks smaller than this are not worth a thread
MIN_CHUNK = 256


def partition(count: int, threads: int) -> List[Tuple[int, int]]:
    """
    Split ``range(count)`` into at most ``threads`` contiguous ``(start, stop)`` chunks.
    """
    if count <= 0:
        return [(0, 0)]
    chunks = max(1, min(threads, count // MIN_CHUNK))
    bounds = [count * k // chunks for k in range(chunks + 1)]
    return list(zip(bounds[:-1], bounds[1:]))


async def map_partitioned_async(
    fn: Callable[[int, int], T], count: int, threads: int = 1
) -> List[T]:
    """
    Run ``fn(start, stop)`` for every chunk of ``range(count)``.

    Chunks run in threads via :py:func:`trio.to_thread.run_sync`, at most ``threads`` at a time.

    Args:
        fn: Chunk worker. Must only read shared state.
        count: Size of the index range
        threads: Number of concurrent workers

    Returns:
        Chunk results in index order
    """
    chunks = partition(count, threads)
    if len(chunks) == 1:
        return [fn(*chunks[0])]

    results: List[T] = [None] * len(chunks)  # type: ignore[list-item]
    limiter = trio.CapacityLimiter(threads)

    async def run(k: int, start: int, stop: int) -> None:
        results[k] = await trio.to_thread.run_sync(fn, start, stop, limiter=limiter)

    logger.debug("Running %d chunks of %d items on %d threads", len(chunks), count, threads)
    async with trio.open_nursery() as nursery:
        for k, (start, stop) in enumerate(chunks):
            nursery.start_soon(run, k, start, stop)
    return results


def map_partitioned(fn: Callable[[int, int], T], count: int, threads: int = 1) -> List[T]:
    """
    Synchronous entry point of :py:func:`map_partitioned_async`.

    Must not be called from inside a running trio task; use the async variant there.
    """
    if threads <= 1 or len(partition(count, threads)) == 1:
        return [fn(0, count)]
    return trio.run(map_partitioned_async, fn, count, threads)
