"""Exhaustive enumeration of the sequential pairing process.

Every choice sequence is expanded depth first with its exact probability.
The lowest-index unpaired infected device always chooses next, uniformly
among every other device that is still unpaired.  Leaves are grouped by the
final wiring they produce, so the census gives the exact probability of every
wiring.  This is the ground truth the formula engines are checked against.
"""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .model import Configuration, config
from .numerics import format_scalar

DEFAULT_CAP = 11
CAP_ENV_VAR = "PAIRPROB_ORACLE_CAP"

Device = Tuple[str, int]  # ("b", i) infected, ("w", i) clean; 1-based
Pair = Tuple[Device, Device]
WiringKey = Tuple[Pair, ...]


class CapExceeded(ValueError):
    """The configuration has too many devices to enumerate."""


def enumeration_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class Wiring:
    pairs: WiringKey
    unpaired_infected: Optional[int] = None

    @property
    def bb_pairs(self) -> Tuple[Pair, ...]:
        return tuple(p for p in self.pairs if p[0][0] == "b" and p[1][0] == "b")

    @property
    def j(self) -> int:
        return len(self.bb_pairs)

    def pairs_device(self, device: Device) -> bool:
        return any(device in p for p in self.pairs)


@dataclass
class WiringCensus:
    cfg: Configuration
    wirings: Dict[Wiring, Fraction] = field(default_factory=dict)

    @property
    def j_classes(self) -> Dict[int, Dict[Wiring, Fraction]]:
        classes: Dict[int, Dict[Wiring, Fraction]] = defaultdict(dict)
        for wiring, prob in self.wirings.items():
            classes[wiring.j][wiring] = prob
        return dict(sorted(classes.items()))

    def total_probability(self) -> Fraction:
        return sum(self.wirings.values(), Fraction(0))

    def wiring_count(self, j: int) -> int:
        return sum(1 for w in self.wirings if w.j == j)

    def class_probabilities(self, j: int) -> set:
        return {p for w, p in self.wirings.items() if w.j == j}

    def target_hit_count(self, j: int, target: int = 1) -> int:
        dev = ("w", target)
        return sum(1 for w in self.wirings if w.j == j and w.pairs_device(dev))

    def bb_selection_count(self, j: int) -> int:
        """Distinct sets of bb-pairings among the wirings with ``j`` of them."""
        return len({w.bb_pairs for w in self.wirings if w.j == j})

    def dagger_h_counts(self) -> Dict[int, int]:
        """Distinct bb-pairing sets per unpaired infected index h."""
        sets = defaultdict(set)
        for w in self.wirings:
            if w.unpaired_infected is not None:
                sets[w.unpaired_infected].add(w.bb_pairs)
        return {h: len(s) for h, s in sorted(sets.items())}

    def dagger_h_wiring_counts(self) -> Dict[int, int]:
        counts = Counter(w.unpaired_infected for w in self.wirings if w.unpaired_infected is not None)
        return dict(sorted(counts.items()))

    def to_json(self) -> dict:
        classes = []
        for j, members in self.j_classes.items():
            probs = set(members.values())
            if len(probs) != 1:
                raise ValueError(f"wirings with j={j} are not equiprobable: {probs}")
            classes.append({
                "j": j,
                "wiring_count": len(members),
                "per_wiring_prob": format_scalar(probs.pop()),
                "target_hit_count": self.target_hit_count(j),
            })
        return {
            "j_classes": classes,
            "dagger_h_counts": {str(h): n for h, n in self.dagger_h_counts().items()},
        }


def _check_cap(cfg: Configuration, cap: Optional[int]) -> None:
    cap = enumeration_cap() if cap is None else cap
    if cfg.I + cfg.S > cap:
        raise CapExceeded(f"{cfg} has {cfg.I + cfg.S} devices, enumeration cap is {cap}")


def enumerate_process(cfg: Configuration | tuple[int, int], cap: Optional[int] = None) -> WiringCensus:
    cfg = config(cfg)
    _check_cap(cfg, cap)
    devices = [("b", i) for i in range(1, cfg.I + 1)] + [("w", i) for i in range(1, cfg.S + 1)]
    census = WiringCensus(cfg)

    def leaf(pairs, prob, unpaired):
        key = Wiring(tuple(sorted(pairs)), unpaired)
        census.wirings[key] = census.wirings.get(key, Fraction(0)) + prob

    # explicit stack: (available devices in index order, pairs so far, path probability)
    stack = [(tuple(devices), (), Fraction(1))]
    while stack:
        available, pairs, prob = stack.pop()
        chooser = next((d for d in available if d[0] == "b"), None)
        if chooser is None:
            leaf(pairs, prob, None)
            continue
        options = [d for d in available if d != chooser]
        if not options:
            leaf(pairs, prob, chooser[1])
            continue
        step = prob / len(options)
        for choice in options:
            rest = tuple(d for d in options if d != choice)
            stack.append((rest, pairs + (tuple(sorted((chooser, choice))),), step))
    return census


def oracle_P(cfg: Configuration | tuple[int, int], target: int = 1, cap: Optional[int] = None) -> Fraction:
    """Exact probability that clean device ``w_target`` ends up paired."""
    cfg = config(cfg)
    if not 1 <= target <= cfg.S:
        raise ValueError(f"no clean device w_{target} in {cfg}")
    census = enumerate_process(cfg, cap)
    dev = ("w", target)
    return sum((p for w, p in census.wirings.items() if w.pairs_device(dev)), Fraction(0))


def symmetry_check(cfg: Configuration | tuple[int, int], cap: Optional[int] = None) -> bool:
    cfg = config(cfg)
    if cfg.S < 2:
        raise ValueError("symmetry needs at least two clean devices")
    census = enumerate_process(cfg, cap)
    values = {
        sum((p for w, p in census.wirings.items() if w.pairs_device(("w", t))), Fraction(0))
        for t in range(1, cfg.S + 1)
    }
    return len(values) == 1
