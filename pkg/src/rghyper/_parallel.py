import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads: int | None) -> int:
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return int(threads)


def ordered_map(fn, items, threads: int | None = 1) -> list:
    """``[fn(x) for x in items]`` on a thread pool; results keep input order.

    The kernels release the GIL, so threads give real parallelism. Workers
    pull items as they free up, and every item carries its own seed, so the
    output does not depend on the thread count.
    """
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
