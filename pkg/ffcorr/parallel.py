"""
Deterministic data-parallel helpers.

Work is split into chunks whose boundaries depend only on the problem size,
never on the number of threads, and results are returned in chunk order, so
any reduction over them is reproducible bit for bit.
"""

from concurrent.futures import ThreadPoolExecutor
import os


DEFAULT_CHUNK = 1 << 16


def default_threads():
    """Number of worker threads used when none is configured."""
    return os.cpu_count() or 1


def chunk_bounds(size, chunk=DEFAULT_CHUNK):
    """Half-open (start, stop) ranges covering range(size)."""
    if chunk < 1:
        raise ValueError('Chunk size must be positive.')
    return [(start, min(start + chunk, size)) for start in range(0, size, chunk)]


def map_chunks(func, size, threads=1, chunk=DEFAULT_CHUNK):
    """Applies func(start, stop) to every chunk of range(size).

    Results come back in chunk order regardless of thread count.
    """
    bounds = chunk_bounds(size, chunk)
    if threads is None or threads <= 1 or len(bounds) <= 1:
        return [func(start, stop) for start, stop in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda bound: func(*bound), bounds))


def map_items(func, items, threads=1):
    """Applies func to every item, preserving order."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
