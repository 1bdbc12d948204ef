"""P(I,S) from the second-order recurrence.

``recursive_P`` evaluates the recurrence literally and never caches, so its
cost grows exponentially; it exists to exhibit that cost.  ``memoized_P``
fills a table bottom-up and is the practical recursive engine.
"""

from __future__ import annotations

import threading
from typing import Dict, Optional, Tuple

from .model import Configuration, config
from .numerics import Backend, Scalar, as_backend


def _step(I: int, S: int, backend: Backend, down_diag: Scalar, down_infected: Scalar) -> Scalar:
    n = I + S - 1
    return (
        backend.ratio(1, n)
        + backend.ratio(S - 1, n) * down_diag
        + backend.ratio(I - 1, n) * down_infected
    )


def _base(I: int, S: int, backend: Backend) -> Optional[Scalar]:
    # order matters: (0,0) and (1,0) both resolve to zero before P(1,S)=1/S
    if I == 0:
        return backend.zero
    if S == 0:
        return backend.zero
    if I == 1:
        return backend.ratio(1, S)
    return None


def recursive_P(cfg: Configuration | tuple[int, int], backend: Backend | str = Backend.EXACT,
                stats: Optional[dict] = None) -> Scalar:
    """Naive recursive evaluation.  ``stats["calls"]`` counts invocations if given."""
    cfg = config(cfg)
    backend = as_backend(backend)

    zero = backend.zero
    if backend is Backend.FLOAT:
        def ratio(a, b):
            return a / b
    else:
        ratio = backend.ratio

    def rec(I: int, S: int) -> Scalar:
        if stats is not None:
            stats["calls"] = stats.get("calls", 0) + 1
        if I == 0 or S == 0:
            return zero
        if I == 1:
            return ratio(1, S)
        n = I + S - 1
        return ratio(1, n) + ratio(S - 1, n) * rec(I - 1, S - 1) + ratio(I - 1, n) * rec(I - 2, S)

    return rec(cfg.I, cfg.S)


class MemoTable:
    """Insert-once cache of P values for a single backend.

    Concurrent writers may compute the same entry twice; the first stored
    value wins and later writes of the same key are ignored.
    """

    def __init__(self, backend: Backend | str = Backend.EXACT):
        self.backend = as_backend(backend)
        self._values: Dict[Tuple[int, int], Scalar] = {}
        self._lock = threading.Lock()
        self.evaluations = 0

    def __contains__(self, key):
        return key in self._values

    def __len__(self):
        return len(self._values)

    def get(self, key):
        return self._values.get(key)

    def insert(self, key: Tuple[int, int], value: Scalar) -> Scalar:
        with self._lock:
            existing = self._values.get(key)
            if existing is not None:
                return existing
            self._values[key] = value
            self.evaluations += 1
            return value


def memoized_P(cfg: Configuration | tuple[int, int], backend: Backend | str = Backend.EXACT,
               memo: Optional[MemoTable] = None) -> Scalar:
    cfg = config(cfg)
    backend = as_backend(backend)
    if memo is None:
        memo = MemoTable(backend)
    elif memo.backend is not backend:
        raise ValueError(f"memo table holds {memo.backend.value} values, asked for {backend.value}")

    # explicit work-list instead of recursion: depth is unbounded by the stack
    stack = [(cfg.I, cfg.S)]
    while stack:
        I, S = key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        base = _base(I, S, backend)
        if base is not None:
            memo.insert(key, base)
            stack.pop()
            continue
        missing = [k for k in ((I - 1, S - 1), (I - 2, S)) if k not in memo]
        if missing:
            stack.extend(missing)
            continue
        memo.insert(key, _step(I, S, backend, memo.get((I - 1, S - 1)), memo.get((I - 2, S))))
        stack.pop()
    return memo.get((cfg.I, cfg.S))
