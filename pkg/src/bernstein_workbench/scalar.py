"""Exact rational scalars and binomial probability rows.

Every golden-path quantity in the library is a `fractions.Fraction`
(arbitrary-precision, always normalised, denominator > 0), so arithmetic
is exact and comparisons are decidable.  A float row backed by log-gamma
is available for large n where exact denominators become unmanageable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import CapacityError, ConstructionError, DomainError

# Exact pmf rows refuse larger n: denominators grow like den(x)**n.
EXACT_ROW_LIMIT = 5000

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value) -> Fraction:
    """Coerce ints, Fractions, and "p/q" strings to an exact Fraction.

    Decimal strings are rejected on purpose: exact mode never parses
    floats, which would silently lose precision.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise DomainError(f"exact mode takes 'p/q' strings, not decimals: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational {value!r}") from exc
    raise DomainError(f"cannot coerce {type(value).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k)."""
    if n < 0 or k < 0:
        raise DomainError(f"binom needs nonnegative arguments, got ({n}, {k})")
    if k > n:
        raise DomainError(f"binom requires k <= n, got ({n}, {k})")
    return math.comb(n, k)


@dataclass(frozen=True)
class PmfRow:
    """All n+1 binomial weights C(n,k) x^k (1-x)^(n-k) at a fixed x."""

    n: int
    x: Fraction
    weights: tuple

    def __post_init__(self):
        if len(self.weights) != self.n + 1:
            raise ConstructionError("pmf row must have n+1 weights")


def _check_unit_interval(x: Fraction):
    if not (0 <= x <= 1):
        raise DomainError(f"x must lie in [0,1], got {format_rational(x)}")


def _row_numerators(n: int, p: int, r: int) -> list:
    """Numerators of C(n,k) p^k r^(n-k) over the implicit denominator (p+r)^n.

    Multiplicative recurrence; every division is exact.
    """
    nums = [r ** n]
    cur = nums[0]
    for k in range(n):
        cur = cur * (n - k) * p // ((k + 1) * r)
        nums.append(cur)
    return nums


def pmf_row(n: int, x) -> PmfRow:
    """Exact binomial pmf row at x, for n up to `EXACT_ROW_LIMIT`."""
    if n < 0:
        raise DomainError("n must be a natural number")
    x = rational(x)
    _check_unit_interval(x)
    if n > EXACT_ROW_LIMIT:
        raise CapacityError(
            f"exact pmf row refused for n={n} > {EXACT_ROW_LIMIT}; use float mode"
        )
    p, q = x.numerator, x.denominator
    if p == 0:
        weights = (ONE,) + (ZERO,) * n
    elif p == q:
        weights = (ZERO,) * n + (ONE,)
    else:
        den = q ** n
        weights = tuple(Fraction(m, den) for m in _row_numerators(n, p, q - p))
    return PmfRow(n=n, x=x, weights=weights)


def pmf_row_float(n: int, x: float) -> np.ndarray:
    """Binomial pmf row in doubles, computed in log space via log-gamma."""
    if not 1 <= n <= 10 ** 6:
        raise DomainError(f"float pmf row supports 1 <= n <= 1e6, got {n}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0,1], got {x}")
    k = np.arange(n + 1)
    if x == 0.0:
        row = np.zeros(n + 1)
        row[0] = 1.0
        return row
    if x == 1.0:
        row = np.zeros(n + 1)
        row[n] = 1.0
        return row
    logs = (
        gammaln(n + 1)
        - gammaln(k + 1)
        - gammaln(n - k + 1)
        + k * math.log(x)
        + (n - k) * math.log1p(-x)
    )
    return np.exp(logs)


def second_moment(n: int, x) -> Fraction:
    """Exact sum of (x - k/n)^2 p_{n,k}(x), computed term by term.

    Always equals x(1-x)/n; the identity is what callers verify.
    """
    if n < 1:
        raise DomainError("second_moment requires n >= 1")
    x = rational(x)
    _check_unit_interval(x)
    if n > EXACT_ROW_LIMIT:
        raise CapacityError(f"exact second moment refused for n={n}")
    p, q = x.numerator, x.denominator
    if p == 0 or p == q:
        return ZERO
    total = 0
    for k, num in enumerate(_row_numerators(n, p, q - p)):
        total += (p * n - k * q) ** 2 * num
    return Fraction(total, q ** (n + 2) * n * n)
