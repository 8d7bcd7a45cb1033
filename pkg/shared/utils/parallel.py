"""
Order-preserving parallel map over independent work items
"""

from concurrent.futures import ThreadPoolExecutor

from .system import SystemUtils


def ordered_map(func, items, workers=None):
    """
    Apply func to every item, possibly on several threads

    Results come back in input order, so the output never depends on
    the worker count.

    Args:
        func: Callable taking one item
        items: Iterable of work items
        workers: Thread count (defaults to SystemUtils.get_worker_count())

    Returns:
        List of results in input order
    """
    items = list(items)
    if workers is None:
        workers = SystemUtils.get_worker_count()
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
