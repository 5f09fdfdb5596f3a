"""Small shared helpers: deterministic parallel map and seeded RNG spawning."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np


def ordered_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """Map `fn` over `items`, preserving order.

    With workers > 1 a thread pool is used; the output is identical to the
    sequential result because work units are fixed a priori and the reduce
    order follows the input order, never the completion order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def spawned_rng(seed: int, key: Sequence[int] | int) -> np.random.Generator:
    """Generator seeded by (seed, key); the same pair always yields the same stream."""
    if isinstance(key, int):
        key = (key,)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)
