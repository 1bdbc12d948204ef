"""Scalar backends and the combinatorial primitives shared by every engine.

Exact values are :class:`fractions.Fraction` instances (always reduced, with a
positive denominator).  Float values are plain Python floats.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Callable, Union

ExactScalar = Fraction
Scalar = Union[Fraction, float]


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self is Backend.EXACT else 0.0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self is Backend.EXACT else 1.0

    def convert(self, value: int | Fraction) -> Scalar:
        """Map an exact integer or fraction into this backend."""
        if self is Backend.EXACT:
            return Fraction(value)
        return float(value)

    def ratio(self, num: int, den: int) -> Scalar:
        """``num/den`` in this backend.

        For floats this is a single correctly rounded division of two
        arbitrary-size integers, so huge counts never overflow as long as the
        quotient itself is representable.
        """
        if self is Backend.EXACT:
            return Fraction(num, den)
        return num / den


def as_backend(value: Backend | str) -> Backend:
    return value if isinstance(value, Backend) else Backend(value)


def heaviside(x: int) -> int:
    return 1 if x >= 0 else 0


def kronecker(x: int) -> int:
    return 1 if x == 0 else 0


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero when ``b < 0`` or ``b > a``.

    A negative upper argument with ``b >= 0`` has no agreed meaning in the
    model and is rejected.
    """
    if b < 0:
        return 0
    if a < 0:
        raise ValueError(f"binomial({a}, {b}) with negative upper argument")
    if b > a:
        return 0
    return math.comb(a, b)


def double_factorial(n: int) -> int:
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def product_range(f: Callable[[int], Scalar], lo: int, hi: int, one: Scalar = 1) -> Scalar:
    """Product of ``f(k)`` for ``k = lo..hi`` inclusive; ``one`` when empty."""
    acc = one
    for k in range(lo, hi + 1):
        acc = acc * f(k)
    return acc


def dispositions(n: int, k: int) -> int:
    """Ordered selections of ``k`` items out of ``n``: n!/(n-k)!."""
    if k < 0 or k > n:
        raise ValueError(f"no dispositions of {k} out of {n}")
    return math.perm(n, k)


def format_scalar(value: Scalar | int) -> str:
    """Render exact values as ``p/q`` (plain ``n`` for integers), floats as repr."""
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
