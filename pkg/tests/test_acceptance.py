"""Exit criteria, one test per criterion, each at its pinned tolerance.

A one-line PASS/FAIL verdict per criterion is printed in the terminal
summary.
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from pairprob.bench import summarize, time_engine
from pairprob.closedform import closed_form_P, count_bb_selections, count_unpaired_dagger
from pairprob.montecarlo import estimate_P
from pairprob.numerics import Backend
from pairprob.oracle import enumerate_process
from pairprob.verification import (
    census_mismatches,
    census_suite,
    equivalence_suite,
    limits_probe,
    normalization_suite,
    oracle_suite,
    proof_identity_U,
)

MC_SEED = 20261016
MC_SAMPLES = 10**6


def verdict(label, ok, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
    return ok


def test_ac01_exact_engine_equivalence():
    t = time.perf_counter()
    r = equivalence_suite(30, Backend.EXACT)
    ok = r.passed and r.discrepancy == 0 and time.perf_counter() - t < 300
    verdict("AC1 exact memoized == closed, 1<=I,S<=30", ok, f"max diff {r.discrepancy}")
    assert ok, r.failures[:5]


def test_ac02_float_engine_equivalence():
    r = equivalence_suite(50, Backend.FLOAT)
    ok = r.passed and r.discrepancy <= 1e-12
    verdict("AC2 float |memoized - closed| <= 1e-12, 1<=I,S<=50", ok,
            f"worst {r.discrepancy:.2e} at {r.worst_input}")
    assert ok


def test_ac03_oracle_equivalence():
    r = oracle_suite(9)
    verdict("AC3 oracle == memoized == closed and symmetry, I+S<=9", r.passed)
    assert r.passed, r.failures[:5]


def test_ac04_lemma_census():
    r = census_suite(9)
    h_counts = enumerate_process((7, 2)).dagger_h_counts()
    per_h = {h: count_unpaired_dagger((7, 2), 2, h) for h in range(1, 8)}
    seven_two = (
        census_mismatches((7, 2)) == []
        and all(h_counts.get(h, 0) == n for h, n in per_h.items())
        and sum(h_counts.values()) == sum(per_h.values()) == count_bb_selections((7, 2), 2)
    )
    ok = r.passed and seven_two
    verdict("AC4 lemma counts match oracle census, I+S<=9, plus (7,2) j=2", ok,
            f"(7,2) per-h {h_counts}")
    assert ok, r.failures[:5]


def test_ac05_normalization():
    r = normalization_suite(30)
    verdict("AC5 sum_j P(I,S,j) N N_w == 1 exactly, 1<=I,S<=30", r.passed)
    assert r.passed, r.failures[:5]


def test_ac06_proof_identity():
    bad = [x for x in range(1, 21) if proof_identity_U(x) != 1]
    verdict("AC6 U(x) == 1 exactly, 1<=x<=20", not bad, f"failing x: {bad}" if bad else "")
    assert not bad


def test_ac07_paper_point_values():
    p10 = closed_form_P((10, 10), Backend.FLOAT)
    p25 = closed_form_P((25, 25), Backend.FLOAT)
    ok10 = abs(p10 - 0.52) <= 0.005
    ok25 = abs(p25 - 0.51) <= 0.005
    verdict("AC7 P(10,10) = 0.52 +/- 0.005 and P(25,25) = 0.51 +/- 0.005", ok10 and ok25,
            f"P(10,10)={p10:.6f}, P(25,25)={p25:.6f}")
    assert ok25, p25
    assert ok10, f"P(10,10) = {p10!r} = 10/19 is {abs(p10 - 0.52):.4f} from 0.52"


def test_ac08_limit_behavior():
    r = limits_probe()
    values = {c: closed_form_P(c, Backend.FLOAT) for c in [(200, 10), (10, 200), (100, 100)]}
    verdict("AC8 P(200,10)>=0.95, P(10,200)<=0.05, |P(100,100)-0.5|<=0.01", r.passed,
            ", ".join(f"P{c}={v:.4f}" for c, v in values.items()))
    assert r.passed, r.failures


@pytest.mark.parametrize("cfg", [(2, 2), (1, 4), (10, 10), (7, 2), (30, 15)])
def test_ac09_monte_carlo(cfg):
    runs = {w: estimate_P(cfg, MC_SAMPLES, MC_SEED, workers=w) for w in (1, 2, 8)}
    est = runs[1]
    exact = float(closed_form_P(cfg))
    within = abs(est.estimate - exact) <= 4 * est.std_error
    same = len({r.hits for r in runs.values()}) == 1
    verdict(f"AC9 Monte Carlo {cfg}: |est - P| <= 4 se, identical hits for 1/2/8 workers", within and same,
            f"est {est.estimate:.6f} vs {exact:.6f}, {abs(est.estimate - exact) / est.std_error:.2f} se")
    assert same
    assert within


def test_ac10_performance_shape():
    means = {}
    for n, reps in ((25, 5), (30, 5), (35, 3)):
        s = summarize(time_engine("recursive", (n, n), reps, 300))
        assert not s.timed_out
        means[n] = s.mean_s
    # a timeout at 3.5x t(35) already proves the ratio exceeds 3
    limit = 3.5 * means[35]
    s40 = summarize(time_engine("recursive", (40, 40), 1, limit))
    if s40.timed_out:
        ratio40, note40 = limit / means[35], ">="
    else:
        ratio40, note40 = s40.mean_s / means[35], "="
    ratios = {25: means[30] / means[25], 30: means[35] / means[30], 35: ratio40}
    closed = summarize(time_engine("closed", (100, 100), 10, 60))
    ok = all(r >= 3 for r in ratios.values()) and not closed.timed_out and closed.mean_s <= 1.0
    verdict("AC10 recursive t(n+5)/t(n) >= 3 for n=25,30,35; closed mean at 100 <= 1 s", ok,
            f"ratios 25:{ratios[25]:.1f} 30:{ratios[30]:.1f} 35:{note40}{ratios[35]:.1f}, "
            f"closed(100) mean {closed.mean_s:.4f} s")
    assert ok
