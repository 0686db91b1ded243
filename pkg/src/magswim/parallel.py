"""Deterministic thread-parallel evaluation over array chunks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def map_chunks(fn, items: np.ndarray, threads: int = 1) -> np.ndarray:
    """Apply ``fn`` to contiguous chunks of ``items`` along axis 0.

    Results are concatenated in chunk order, so the output is independent of
    the thread count.  ``fn`` must be pure.
    """
    threads = max(1, int(threads))
    if threads == 1 or len(items) < 2 * threads:
        return fn(items)
    chunks = np.array_split(items, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=0)
