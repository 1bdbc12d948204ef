"""Infection probability of a clean device in a random sequential Bluetooth pairing process."""

from .closedform import (
    TermBreakdown,
    closed_form_P,
    count_bb_selections,
    count_generic_selections,
    count_target_selections,
    count_unpaired_dagger,
    term_breakdown,
    wiring_probability,
)
from .model import Configuration, DaggerInfo, dagger_indicator, dagger_info, max_bb_pairings, min_bb_pairings
from .montecarlo import EstimateWithError, estimate_P, simulate_once
from .numerics import Backend
from .oracle import enumerate_process, oracle_P, symmetry_check
from .recursion import MemoTable, memoized_P, recursive_P

__all__ = [
    "Backend",
    "Configuration",
    "DaggerInfo",
    "EstimateWithError",
    "MemoTable",
    "TermBreakdown",
    "closed_form_P",
    "count_bb_selections",
    "count_generic_selections",
    "count_target_selections",
    "count_unpaired_dagger",
    "dagger_indicator",
    "dagger_info",
    "enumerate_process",
    "estimate_P",
    "max_bb_pairings",
    "memoized_P",
    "min_bb_pairings",
    "oracle_P",
    "recursive_P",
    "simulate_once",
    "symmetry_check",
    "term_breakdown",
    "wiring_probability",
]
