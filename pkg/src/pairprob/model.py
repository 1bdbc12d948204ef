"""Configurations of the pairing process and the feasibility of bb-pairing counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .numerics import heaviside, kronecker


@dataclass(frozen=True)
class Configuration:
    """``infected`` devices b_1..b_I meeting ``clean`` devices w_1..w_S."""

    infected: int
    clean: int

    def __post_init__(self):
        if self.infected < 0 or self.clean < 0:
            raise ValueError(f"device counts must be nonnegative, got {self}")

    @property
    def I(self) -> int:  # noqa: E743
        return self.infected

    @property
    def S(self) -> int:
        return self.clean

    def __str__(self):
        return f"({self.infected},{self.clean})"


def config(cfg: Configuration | tuple[int, int]) -> Configuration:
    if isinstance(cfg, Configuration):
        return cfg
    infected, clean = cfg
    return Configuration(int(infected), int(clean))


@dataclass(frozen=True)
class DaggerInfo:
    is_dagger: bool
    forced_j: Optional[int] = None


def dagger_info(cfg: Configuration | tuple[int, int]) -> DaggerInfo:
    """Whether the configuration can end with one infected device left unpaired.

    That happens only when I > S and I + S is odd, and then only for the
    single bb-pairing count returned as ``forced_j``.
    """
    cfg = config(cfg)
    I, S = cfg.I, cfg.S
    if I > S and (I + S) % 2 == 1:
        return DaggerInfo(True, (I - S - 1) // 2)
    return DaggerInfo(False)


def dagger_indicator(cfg: Configuration | tuple[int, int], j: int) -> int:
    cfg = config(cfg)
    I, S = cfg.I, cfg.S
    return heaviside(I - S - 1) * kronecker((I + S + 1) % 2) * kronecker(2 * j - I + S + 1)


def min_bb_pairings(cfg: Configuration | tuple[int, int]) -> int:
    cfg = config(cfg)
    I, S = cfg.I, cfg.S
    twice = I - S - (I + S) % 2
    assert twice % 2 == 0, "parity is removed before halving"
    return heaviside(I - S - 1) * (twice // 2)


def max_bb_pairings(cfg: Configuration | tuple[int, int]) -> int:
    return config(cfg).I // 2


def admissible_j(cfg: Configuration | tuple[int, int]) -> range:
    """The bb-pairing counts a final wiring can have."""
    return range(min_bb_pairings(cfg), max_bb_pairings(cfg) + 1)
