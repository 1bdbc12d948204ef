"""Seeded simulation of the pairing process.

Reproducibility contract
------------------------
Episode ``k`` of a run with seed ``seed`` draws from its own SplitMix64
stream whose initial state is ``mix64(seed ^ mix64(k))`` (all arithmetic mod
2**64).  Each draw advances the state by the golden-ratio increment
``0x9E3779B97F4A7C15`` and returns ``mix64(state)``.

A uniform index below ``m`` is drawn by rejection: words smaller than
``2**64 mod m`` are discarded, and the first accepted word ``w`` gives
``w mod m``.

In each episode the lowest-index unpaired infected device chooses next.  The
candidates are the other unpaired devices, listed as b_1..b_I and then
w_1..w_S, and the drawn index selects one of them.  The episode counts as a
hit once w_1 is paired.

The outcome of episode ``k`` depends only on ``(seed, k)``.  The total hit
count is therefore the same however the index range is split across
workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import Configuration, config

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

CHUNK = 1 << 16


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class Stream:
    """SplitMix64 word stream for one episode."""

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def for_sample(cls, seed: int, k: int) -> "Stream":
        return cls(mix64((seed & MASK64) ^ mix64(k)))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, m: int) -> int:
        reject = (1 << 64) % m
        while True:
            w = self.next_u64()
            if w >= reject:
                return w % m


def simulate_once(cfg: Configuration | tuple[int, int], stream: Stream) -> bool:
    """Run one episode; True when w_1 ends up paired with an infected device."""
    cfg = config(cfg)
    if cfg.S < 1:
        raise ValueError("simulation needs at least one clean device")
    # columns 0..I-1 are b_1..b_I, column I is w_1
    available = [True] * (cfg.I + cfg.S)
    target = cfg.I
    for chooser in range(cfg.I):
        if not available[chooser]:
            continue
        available[chooser] = False
        options = [c for c, free in enumerate(available) if free]
        if not options:
            return False
        pick = options[stream.below(len(options))]
        if pick == target:
            return True
        available[pick] = False
    return False


@dataclass(frozen=True)
class EstimateWithError:
    samples: int
    hits: int
    seed: int

    def __post_init__(self):
        if self.samples < 1 or not 0 <= self.hits <= self.samples:
            raise ValueError(f"invalid tally {self.hits}/{self.samples}")

    @property
    def estimate(self) -> float:
        return self.hits / self.samples

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.samples)

    def to_json(self) -> dict:
        return {
            "n": self.samples,
            "hits": self.hits,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "seed": self.seed,
        }


# -- vectorized kernel ------------------------------------------------------

_U = np.uint64


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U(30))) * _U(MIX1)
    z = (z ^ (z >> _U(27))) * _U(MIX2)
    return z ^ (z >> _U(31))


def _below_vec(state: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Advance ``state`` in place and return uniform draws below ``m``, lane-wise."""
    m = m.astype(np.uint64)
    reject = (_U(0) - m) % m  # 2**64 mod m
    out = np.empty(len(m), dtype=np.uint64)
    todo = np.arange(len(m))
    while todo.size:
        state[todo] += _U(GOLDEN)
        w = _mix64_vec(state[todo])
        ok = w >= reject[todo]
        out[todo[ok]] = w[ok] % m[todo[ok]]
        todo = todo[~ok]
    return out


def _count_hits(cfg: Configuration, seed: int, start: int, stop: int) -> int:
    I, S = cfg.I, cfg.S
    if I == 0 or stop <= start:
        return 0
    with np.errstate(over="ignore"):
        k = np.arange(start, stop, dtype=np.uint64)
        state = _mix64_vec(_U(seed & MASK64) ^ _mix64_vec(k))
        available = np.ones((stop - start, I + S), dtype=bool)
        hits = 0
        for _ in range(I):
            if not len(state):
                break
            infected_left = available[:, :I]
            alive = infected_left.any(axis=1)
            if not alive.all():
                state, available = state[alive], available[alive]
                infected_left = available[:, :I]
            rows = np.arange(len(state))
            chooser = infected_left.argmax(axis=1)
            available[rows, chooser] = False
            m = available.sum(axis=1)
            alive = m > 0
            if not alive.all():
                state, available, m = state[alive], available[alive], m[alive]
                rows = np.arange(len(state))
            if not len(state):
                break
            r = _below_vec(state, m)
            pick = (np.cumsum(available, axis=1) > r[:, None].astype(np.int64)).argmax(axis=1)
            available[rows, pick] = False
            hit = pick == I
            hits += int(hit.sum())
            keep = ~hit
            state, available = state[keep], available[keep]
    return hits


def _count_range(cfg: Configuration, seed: int, start: int, stop: int) -> int:
    return sum(
        _count_hits(cfg, seed, lo, min(lo + CHUNK, stop))
        for lo in range(start, stop, CHUNK)
    )


def estimate_P(cfg: Configuration | tuple[int, int], samples: int, seed: int,
               workers: int = 1) -> EstimateWithError:
    """Monte Carlo estimate of P(I,S) from ``samples`` independent episodes."""
    cfg = config(cfg)
    if samples < 1:
        raise ValueError("samples must be positive")
    if cfg.S < 1:
        raise ValueError("simulation needs at least one clean device")
    workers = max(1, min(workers, samples))
    bounds = [samples * w // workers for w in range(workers + 1)]
    if workers == 1:
        hits = _count_range(cfg, seed, 0, samples)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda w: _count_range(cfg, seed, bounds[w], bounds[w + 1]), range(workers))
            hits = sum(parts)
    return EstimateWithError(samples=samples, hits=hits, seed=seed)
