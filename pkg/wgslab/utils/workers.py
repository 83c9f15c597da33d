"""
Worker pool for grid scans.
"""

import logging
from typing import Callable, Iterable

from joblib import Parallel, delayed

logger = logging.getLogger(__name__)


def parallel_map(func: Callable, items: Iterable, workers: int = 1) -> list:
    """
    Apply func to every item, returning results in input order.

    Args:
        func: Picklable function of one argument
        items: Work items
        workers: Pool size; 1 or less runs inline

    Returns:
        List of results aligned with items
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("Dispatching %d items to %d workers", len(items), workers)
    return Parallel(n_jobs=workers)(delayed(func)(item) for item in items)
