import pytest
from hypothesis import given, strategies as st

from pairprob.model import (
    Configuration,
    dagger_indicator,
    dagger_info,
    max_bb_pairings,
    min_bb_pairings,
)
from pairprob.oracle import enumerate_process
from pairprob.closedform import normalization_sum, wiring_probability, count_bb_selections, count_generic_selections


def test_configuration_rejects_negative():
    with pytest.raises(ValueError):
        Configuration(-1, 3)


@pytest.mark.parametrize("cfg, j, expected", [((7, 2), 2, 1), ((3, 2), 0, 1), ((7, 2), 3, 0)])
def test_dagger_indicator(cfg, j, expected):
    assert dagger_indicator(cfg, j) == expected


def test_even_total_is_never_dagger():
    assert all(dagger_indicator((7, 5), j) == 0 for j in range(-3, 10))
    assert not dagger_info((7, 5)).is_dagger


def _dagger_by_conditions(I, S, j):
    return int(I > S and (I + S) % 2 == 1 and 2 * j == I - S - 1)


@given(st.integers(0, 40), st.integers(0, 40), st.integers(-5, 25))
def test_indicator_matches_conditions(I, S, j):
    assert dagger_indicator((I, S), j) == _dagger_by_conditions(I, S, j)


@pytest.mark.parametrize("cfg, expected", [((3, 5), 0), ((7, 2), 2), ((8, 2), 3), ((5, 5), 0), ((6, 2), 2)])
def test_min_bb_pairings(cfg, expected):
    assert min_bb_pairings(cfg) == expected


@pytest.mark.parametrize("cfg, expected", [((7, 2), 3), ((0, 5), 0), ((6, 1), 3)])
def test_max_bb_pairings(cfg, expected):
    assert max_bb_pairings(cfg) == expected


@given(st.integers(1, 60), st.integers(0, 60))
def test_min_below_max_and_dagger_j_inside(I, S):
    lo, hi = min_bb_pairings((I, S)), max_bb_pairings((I, S))
    assert lo <= hi
    hits = [j for j in range(-2, hi + 3) if dagger_indicator((I, S), j)]
    assert len(hits) <= 1
    assert all(lo <= j <= hi for j in hits)
    info = dagger_info((I, S))
    assert info.is_dagger == bool(hits)
    if info.is_dagger:
        assert hits == [info.forced_j]


def test_realized_j_values_match_nonzero_terms():
    for I in range(1, 9):
        for S in range(1, 10 - I):
            realized = set(enumerate_process((I, S)).j_classes)
            nonzero = {
                j for j in range(min_bb_pairings((I, S)), max_bb_pairings((I, S)) + 1)
                if wiring_probability((I, S), j) * count_bb_selections((I, S), j)
                * count_generic_selections((I, S), j) != 0
            }
            assert realized == nonzero, (I, S)
            assert normalization_sum((I, S)) == 1
