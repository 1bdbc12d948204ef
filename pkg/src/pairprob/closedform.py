"""Non-recursive evaluation of P(I,S) by counting final wirings.

P(I,S) is a sum over the number j of bb-pairings (pairings between two
infected devices).  Each term is the product of

* the probability of one particular wiring with j bb-pairings,
* the number of ways to pick the j bb-pairings, and
* the number of ways to pair the remaining infected devices with clean ones
  so that the target clean device is covered.

Each factor is a separate function so it can be checked against the
enumeration oracle.  ``closed_form_P_expanded`` evaluates the same sum as a
single gated expression, with every Heaviside/Kronecker switch written out,
and serves as a transcription check on the factored assembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .model import Configuration, config, dagger_indicator, max_bb_pairings, min_bb_pairings
from .numerics import (
    Backend,
    Scalar,
    as_backend,
    binomial,
    dispositions,
    factorial,
    format_scalar,
    heaviside,
    kronecker,
    product_range,
)


def _check_admissible(cfg: Configuration, j: int) -> None:
    if not min_bb_pairings(cfg) <= j <= max_bb_pairings(cfg):
        raise ValueError(
            f"j={j} outside admissible range [{min_bb_pairings(cfg)}, {max_bb_pairings(cfg)}] for {cfg}"
        )


# -- exact integer kernels -------------------------------------------------

def _wiring_denominator(cfg: Configuration, j: int) -> int:
    """Product of I+S-1-2k over the choices that shape one wiring; 0 if impossible."""
    I, S = cfg.I, cfg.S
    if j > max_bb_pairings(cfg) or j < min_bb_pairings(cfg) or j < 0:
        return 0
    z = dagger_indicator(cfg, j)
    return product_range(lambda k: I + S - 1 - 2 * k, 0, I - j - 1 - z)


def _pair_choices(start: int, count: int) -> int:
    """C(start,2)*C(start-2,2)*... with ``count`` factors."""
    return product_range(lambda k: binomial(start - 2 * k, 2), 0, count - 1)


def _unpaired_dagger(cfg: Configuration, j: int, h: int) -> int:
    I, S = cfg.I, cfg.S
    if h <= S:
        return 0
    if h == I:
        num, den = _pair_choices(I - 1, j), factorial(j)
    elif h == I - 1:
        num, den = (I - 2) * _pair_choices(I - 3, j - 1), factorial(j - 1)
    else:
        forced = I - h  # b_{h+1}..b_I are all claimed by lower-index choosers
        if j < forced:
            return 0
        claim = product_range(lambda t: h - t, 1, forced)
        num = claim * _pair_choices(2 * h - I - 1, j - forced)
        den = factorial(j - forced)
    assert num % den == 0
    return num // den


def _bb_selections(cfg: Configuration, j: int) -> int:
    I, S = cfg.I, cfg.S
    if not dagger_indicator(cfg, j):
        num, den = _pair_choices(I, j), factorial(j)
        assert num % den == 0
        return num // den
    if j == 0:
        return 1
    if j == 1:
        return binomial(I, 2) - 1
    return sum(_unpaired_dagger(cfg, j, h) for h in range(S + 1, I + 1))


def _target_selections(cfg: Configuration, j: int) -> int:
    I, S = cfg.I, cfg.S
    if dagger_indicator(cfg, j):
        return factorial(S)
    return factorial(I - 2 * j) * binomial(S - 1, I - 1 - 2 * j)


def _generic_selections(cfg: Configuration, j: int) -> int:
    I, S = cfg.I, cfg.S
    if dagger_indicator(cfg, j):
        return factorial(S)
    if I - 2 * j > S:
        raise ValueError(f"no wiring of {cfg} has j={j} bb-pairings")
    return dispositions(S, I - 2 * j)


# -- public lemma operations ----------------------------------------------

def wiring_probability(cfg: Configuration | tuple[int, int], j: int,
                       backend: Backend | str = Backend.EXACT) -> Scalar:
    """Probability that one specific final wiring with ``j`` bb-pairings occurs."""
    cfg, backend = config(cfg), as_backend(backend)
    den = _wiring_denominator(cfg, j)
    return backend.zero if den == 0 else backend.ratio(1, den)


def count_bb_selections(cfg: Configuration | tuple[int, int], j: int,
                        backend: Backend | str = Backend.EXACT) -> Scalar:
    cfg, backend = config(cfg), as_backend(backend)
    _check_admissible(cfg, j)
    return backend.convert(_bb_selections(cfg, j))


def count_unpaired_dagger(cfg: Configuration | tuple[int, int], j: int, h: int,
                          backend: Backend | str = Backend.EXACT) -> Scalar:
    """Number of bb-pairing sets leaving ``b_h`` as the unpaired infected device.

    Only defined in the unpaired-device case with at least two bb-pairings.
    """
    cfg, backend = config(cfg), as_backend(backend)
    if not dagger_indicator(cfg, j) or j < 2:
        raise ValueError(f"{cfg} with j={j} is not an unpaired-device case with j >= 2")
    if not 1 <= h <= cfg.I:
        raise ValueError(f"h={h} outside 1..{cfg.I}")
    return backend.convert(_unpaired_dagger(cfg, j, h))


def count_target_selections(cfg: Configuration | tuple[int, int], j: int,
                            backend: Backend | str = Backend.EXACT) -> Scalar:
    cfg, backend = config(cfg), as_backend(backend)
    if cfg.S < 1:
        raise ValueError("no clean device to target")
    _check_admissible(cfg, j)
    return backend.convert(_target_selections(cfg, j))


def count_generic_selections(cfg: Configuration | tuple[int, int], j: int,
                             backend: Backend | str = Backend.EXACT) -> Scalar:
    cfg, backend = config(cfg), as_backend(backend)
    _check_admissible(cfg, j)
    return backend.convert(_generic_selections(cfg, j))


# -- assembly ---------------------------------------------------------------

@dataclass(frozen=True)
class TermBreakdown:
    j: int
    wiring_prob: Scalar
    bb_count: Scalar
    target_count: Scalar
    generic_count: Scalar
    term_value: Scalar

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "wiring_prob": format_scalar(self.wiring_prob),
            "bb_count": format_scalar(self.bb_count),
            "target_count": format_scalar(self.target_count),
            "generic_count": format_scalar(self.generic_count),
            "term": format_scalar(self.term_value),
        }


def _terms(cfg: Configuration):
    """Yield (j, denominator, bb, target) with every count an exact integer."""
    for j in range(min_bb_pairings(cfg), max_bb_pairings(cfg) + 1):
        yield j, _wiring_denominator(cfg, j), _bb_selections(cfg, j), _target_selections(cfg, j)


def closed_form_P(cfg: Configuration | tuple[int, int], backend: Backend | str = Backend.EXACT) -> Scalar:
    cfg, backend = config(cfg), as_backend(backend)
    if cfg.I == 0 or cfg.S == 0:
        return backend.zero
    total = backend.zero
    for _, den, bb, target in _terms(cfg):
        # one rounding per term in float mode: the integer ratio never overflows
        total += backend.ratio(bb * target, den)
    return total


def term_breakdown(cfg: Configuration | tuple[int, int],
                   backend: Backend | str = Backend.EXACT) -> List[TermBreakdown]:
    cfg, backend = config(cfg), as_backend(backend)
    if cfg.I < 1 or cfg.S < 1:
        raise ValueError(f"term breakdown needs I, S >= 1, got {cfg}")
    rows = []
    for j, den, bb, target in _terms(cfg):
        rows.append(TermBreakdown(
            j=j,
            wiring_prob=backend.ratio(1, den),
            bb_count=backend.convert(bb),
            target_count=backend.convert(target),
            generic_count=backend.convert(_generic_selections(cfg, j)),
            term_value=backend.ratio(bb * target, den),
        ))
    return rows


def normalization_sum(cfg: Configuration | tuple[int, int]) -> Fraction:
    """Total probability over every wiring, which must equal one."""
    cfg = config(cfg)
    total = Fraction(0)
    for j, den, bb, _ in _terms(cfg):
        total += Fraction(bb * _generic_selections(cfg, j), den)
    return total


def closed_form_P_expanded(cfg: Configuration | tuple[int, int]) -> Fraction:
    """The whole sum as one gated expression, exact backend only.

    Gates are evaluated as written; a gated-off factor is skipped rather than
    evaluated, since several of them are meaningless (negative factorials)
    outside their branch.
    """
    cfg = config(cfg)
    I, S = cfg.I, cfg.S
    if I == 0 or S == 0:
        return Fraction(0)
    H, d = heaviside, kronecker
    half = I // 2
    low = (I - S - (I + S) % 2) // 2

    def gate(g, thunk):
        return thunk() if g else 0

    def dag(j):
        return H(I - S - 1) * d((I + S + 1) % 2) * d(2 * j - I + S + 1)

    def n_dagger(j, h):
        return (
            gate(d(h - I), lambda: Fraction(
                product_range(lambda k: binomial(I - 1 - 2 * k, 2), 0, j - 1), factorial(j)))
            + gate(d(h - I + 1), lambda: Fraction(
                (I - 2) * product_range(lambda k: binomial(I - 3 - 2 * k, 2), 0, j - 2), factorial(j - 1)))
            + gate(H(h - S - 1) * H(I - 2 - h), lambda: (
                gate(d(j - I + h), lambda: Fraction(
                    product_range(lambda k: h - k, 1, I - h), factorial(j - I + h)))
                + gate(H(j - I + h - 1), lambda: Fraction(
                    product_range(lambda k: h - k, 1, I - h)
                    * product_range(lambda t: binomial(2 * h - I - 1 - 2 * (t - 1), 2), 1, j - I + h),
                    factorial(j - I + h)))
            ))
        )

    total = Fraction(0)
    for j in range(H(I - S - 1) * low, half + 1):
        z = dag(j)
        first = H(half - j) * H(j - low) * product_range(
            lambda k: Fraction(1, I + S - 1 - 2 * k), 0, I - j - 1 - z, Fraction(1))
        second = (
            (1 - z) * Fraction(product_range(lambda k: binomial(I - 2 * (k - 1), 2), 1, j), factorial(j))
            + gate(z, lambda: (
                d(j)
                + d(j - 1) * (binomial(I, 2) - 1)
                + gate(H(j - 2), lambda: sum(n_dagger(j, h) for h in range(S + 1, I + 1)))
            ))
        )
        third = (
            gate(1 - z, lambda: factorial(I - 2 * j) * binomial(S - 1, I - 1 - 2 * j))
            + factorial(S) * z
        )
        total += first * second * third
    return total
