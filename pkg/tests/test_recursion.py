from fractions import Fraction

import pytest

from pairprob.numerics import Backend
from pairprob.recursion import MemoTable, memoized_P, recursive_P


@pytest.mark.parametrize("cfg, expected", [
    ((1, 4), Fraction(1, 4)),
    ((5, 0), Fraction(0)),
    ((3, 2), Fraction(5, 8)),
    ((2, 2), Fraction(2, 3)),
    ((0, 9), Fraction(0)),
    ((0, 0), Fraction(0)),
    ((1, 0), Fraction(0)),
    ((2, 1), Fraction(1, 2)),
    ((3, 1), Fraction(1)),
])
def test_known_values(cfg, expected):
    assert recursive_P(cfg) == expected
    assert memoized_P(cfg) == expected


def test_naive_and_memoized_agree_exactly():
    memo = MemoTable()
    for I in range(1, 21):
        for S in range(1, 21):
            a, b = recursive_P((I, S)), memoized_P((I, S), memo=memo)
            assert (a.numerator, a.denominator) == (b.numerator, b.denominator)
            assert 0 <= a <= 1


def test_float_backend_matches_exact():
    for I in range(0, 15):
        for S in range(0, 15):
            assert memoized_P((I, S), "float") == pytest.approx(float(memoized_P((I, S))), abs=1e-15)
            assert isinstance(recursive_P((I, S), Backend.FLOAT), float)


def test_naive_call_count_grows_superlinearly():
    counts = []
    for n in range(4, 16):
        stats = {}
        recursive_P((n, n), Backend.FLOAT, stats=stats)
        counts.append(stats["calls"])
    assert all(b > a for a, b in zip(counts, counts[1:]))
    ratios = [b / a for a, b in zip(counts, counts[1:])]
    assert min(ratios[-5:]) > 1.3


def test_memoized_evaluation_bound():
    for I, S in [(20, 20), (35, 7), (7, 35), (50, 50)]:
        memo = MemoTable(Backend.FLOAT)
        memoized_P((I, S), Backend.FLOAT, memo)
        assert memo.evaluations <= (I + 1) * (S + 1)
        assert len(memo) == memo.evaluations


def test_memoized_deep_configuration_has_no_stack_limit():
    value = memoized_P((200, 200), Backend.FLOAT)
    assert abs(value - 0.5) < 0.01
    assert memoized_P((1500, 3), Backend.FLOAT) > 0.97


def test_memo_table_is_insert_once():
    memo = MemoTable()
    assert memo.insert((2, 2), Fraction(2, 3)) == Fraction(2, 3)
    assert memo.insert((2, 2), Fraction(1, 9)) == Fraction(2, 3)
    assert memo.get((2, 2)) == Fraction(2, 3)


def test_memo_table_backend_mismatch():
    with pytest.raises(ValueError):
        memoized_P((3, 3), Backend.FLOAT, MemoTable(Backend.EXACT))


def test_shared_table_concurrent_use():
    from concurrent.futures import ThreadPoolExecutor

    memo = MemoTable()
    cfgs = [(I, S) for I in range(1, 25) for S in range(1, 25)]
    with ThreadPoolExecutor(max_workers=8) as pool:
        got = list(pool.map(lambda c: memoized_P(c, Backend.EXACT, memo), cfgs))
    fresh = [memoized_P(c) for c in cfgs]
    assert got == fresh
