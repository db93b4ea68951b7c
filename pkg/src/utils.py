import hashlib
import itertools
import json
import logging
from datetime import datetime
from math import comb
from typing import Any, Dict

import numpy as np
import pytz

from .errors import BudgetExceededError

logger = logging.getLogger(__name__)


def check_budget(what: str, requested: int, budget: int) -> None:
    """Refuse work whose item count exceeds the enumeration budget."""
    if requested > budget:
        logger.warning(f"{what} needs {requested} items, budget is {budget}")
        raise BudgetExceededError(what, requested, budget)


def combinations_array(n: int, r: int, start: int = 0) -> np.ndarray:
    """All r-subsets of range(start, n) as rows of an int64 array, lexicographic."""
    count = comb(n - start, r) if n > start else 0
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if count == 0:
        return np.zeros((0, r), dtype=np.int64)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(start, n), r)),
        dtype=np.int64,
        count=count * r,
    )
    return flat.reshape(count, r)


def subsets_above(table: np.ndarray, n: int, lowest: int) -> np.ndarray:
    """Rows of a lexicographic r-subset table of range(n) whose first entry is >= lowest.

    Those rows form the tail of the table, so this is a view, not a copy.
    """
    r = table.shape[1]
    if r == 0:
        return table
    return table[len(table) - comb(n - lowest, r):] if lowest < n else table[:0]


def binomial_table(v: int, t: int) -> np.ndarray:
    """table[x, i] = C(x, i) for 0 <= x <= v, 0 <= i <= t + 1."""
    table = np.zeros((v + 1, t + 2), dtype=np.int64)
    for x in range(v + 1):
        for i in range(t + 2):
            table[x, i] = comb(x, i)
    return table


def colex_ranks(subsets: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Colexicographic ranks of sorted t-subsets (rows), in [0, C(v, t))."""
    ranks = np.zeros(len(subsets), dtype=np.int64)
    for i in range(subsets.shape[1]):
        ranks += table[subsets[:, i], i + 1]
    return ranks


def utc_now() -> datetime:
    return datetime.now(pytz.UTC)


def payload_fingerprint(payload: Dict[str, Any]) -> str:
    """SHA256 of a canonical JSON rendering, used to key cached reports."""
    canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
