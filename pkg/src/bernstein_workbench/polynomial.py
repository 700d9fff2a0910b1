"""Polynomials with exact rational coefficients.

Used as the pieces of piecewise functions.  Root isolation inside an
interval is exact for degrees up to 2 (rational quadratic formula with a
perfect-square test) and falls back to sign bisection for higher degrees,
reporting whether the located roots are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError
from .scalar import format_rational, rational

BISECTION_DEPTH = 40


def _sqrt_exact(q: Fraction):
    """Rational square root of q, or None when q is not a perfect square."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class Poly:
    """Immutable univariate polynomial, coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [rational(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return 0
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (Fraction(0),)

    def __call__(self, x) -> Fraction:
        x = rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        if len(self.coeffs) == 1:
            return Poly([0])
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, factor) -> "Poly":
        factor = rational(factor)
        return Poly([factor * c for c in self.coeffs])

    def shift(self, constant) -> "Poly":
        out = list(self.coeffs)
        out[0] += rational(constant)
        return Poly(out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Poly([{}])".format(", ".join(format_rational(c) for c in self.coeffs))

    # -- root isolation -------------------------------------------------

    def roots_in(self, a, b):
        """Roots strictly inside (a, b).

        Returns (roots, exact).  `exact` is False when a higher-degree
        root had to be approximated by bisection; approximate roots are
        the midpoints of brackets of width (b-a)/2**BISECTION_DEPTH.
        """
        a, b = rational(a), rational(b)
        if a >= b:
            raise DomainError("roots_in needs a < b")
        d = self.degree
        if self.is_zero():
            return [], True
        if d == 0:
            return [], True
        if d == 1:
            c0, c1 = self.coeffs[0], self.coeffs[1]
            r = -c0 / c1
            return ([r] if a < r < b else []), True
        if d == 2:
            c0, c1, c2 = self.coeffs
            disc = c1 * c1 - 4 * c2 * c0
            if disc < 0:
                return [], True
            s = _sqrt_exact(disc)
            if s is not None:
                cands = sorted({(-c1 - s) / (2 * c2), (-c1 + s) / (2 * c2)})
                return [r for r in cands if a < r < b], True
            # irrational pair; isolate by bisection below
        return self._bisection_roots(a, b)

    def _bisection_roots(self, a: Fraction, b: Fraction):
        # Sample on a fine grid to separate sign changes, then bisect.
        grid_n = 64
        step = (b - a) / grid_n
        pts = [a + i * step for i in range(grid_n + 1)]
        vals = [self(p) for p in pts]
        roots, exact = [], True
        for i in range(grid_n):
            u, v = pts[i], pts[i + 1]
            fu, fv = vals[i], vals[i + 1]
            if fu == 0:
                if a < u < b:
                    roots.append(u)
                continue
            if fv == 0:
                continue  # picked up as the left endpoint of the next cell
            if (fu < 0) == (fv < 0):
                continue
            lo, hi, flo = u, v, fu
            found = None
            for _ in range(BISECTION_DEPTH):
                mid = (lo + hi) / 2
                fm = self(mid)
                if fm == 0:
                    found = mid
                    break
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            if found is not None:
                roots.append(found)
            else:
                roots.append((lo + hi) / 2)
                exact = False
        if vals[-1] == 0 and a < pts[-1] < b:
            roots.append(pts[-1])
        return sorted(set(roots)), exact

    def range_on(self, a, b):
        """Infimum and supremum of the polynomial over [a, b].

        Returns (inf, sup, exact).  Interior critical points found only
        approximately make the result a tight but inexact enclosure.
        """
        a, b = rational(a), rational(b)
        crit, exact = self.derivative().roots_in(a, b)
        values = [self(a), self(b)] + [self(r) for r in crit]
        return min(values), max(values), exact
