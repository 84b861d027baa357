"""Average ranks with tie handling."""
from __future__ import annotations

import numpy as np


def average_ranks(values) -> np.ndarray:
    """1-based ranks of ``values``; tied values share the mean of their ranks.

    Values are tied only when they compare equal, no tolerance is applied.
    Input must not contain NaN.

    >>> average_ranks([10, 20, 20, 40]).tolist()
    [1.0, 2.5, 2.5, 4.0]
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    out = np.empty(n)
    if n == 0:
        return out
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    starts = np.flatnonzero(np.r_[True, xs[1:] != xs[:-1]])
    ends = np.r_[starts[1:], n]
    # positions starts..ends-1 hold ranks starts+1..ends
    avg = (starts + 1 + ends) / 2.0
    out[order] = np.repeat(avg, ends - starts)
    return out


def tie_counts(values) -> np.ndarray:
    """Sizes of the groups of equal values (for tie corrections)."""
    x = np.sort(np.asarray(values, dtype=float), kind="mergesort")
    if x.size == 0:
        return np.zeros(0, dtype=np.int64)
    starts = np.flatnonzero(np.r_[True, x[1:] != x[:-1]])
    return np.diff(np.r_[starts, x.size])
