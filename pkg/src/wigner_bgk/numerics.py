"""Small numerical helpers shared by the verification modules."""

from __future__ import annotations

import os
from typing import Callable

import numpy as np


def thread_count() -> int:
    """Worker cap from WIGNER_BGK_THREADS (defaults to all cores)."""
    raw = os.environ.get("WIGNER_BGK_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"WIGNER_BGK_THREADS must be an integer, got {raw!r}")
        if n >= 1:
            return n
    return os.cpu_count() or 1


def richardson_derivative(f: Callable, x, h: float = 1e-2, levels: int = 3):
    """First derivative by central differences with Richardson extrapolation.

    Central differences D(h), D(h/2), ... are combined in a Neville table;
    ``levels`` rows give truncation error O(h^(2*levels)). Works for
    vector-valued ``f`` as long as it returns an array.
    """
    x = np.asarray(x, dtype=float)
    table = []
    step = h
    for i in range(levels):
        row = [(np.asarray(f(x + step)) - np.asarray(f(x - step))) / (2.0 * step)]
        fac = 4.0
        for j in range(i):
            row.append(row[j] + (row[j] - table[i - 1][j]) / (fac - 1.0))
            fac *= 4.0
        table.append(row)
        step /= 2.0
    return table[-1][-1]


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-4,
                     max_iter: int = 200) -> float:
    """Locate the switch point of a boolean predicate on [lo, hi].

    Returns the midpoint of the final bracket, whose width is below ``tol``.
    """
    plo, phi = bool(pred(lo)), bool(pred(hi))
    if plo == phi:
        raise ValueError(f"predicate does not change across [{lo}, {hi}] (both {plo})")
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        if bool(pred(mid)) == plo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
