"""Function representations: piecewise polynomials with per-point data,
Thomae-type functions over heighted point sets, dense-set indicators, and
exact linear combinations.

All evaluation happens at rational arguments and is exact.  One-sided
limits come from stored breakpoint data (piecewise) or from the defining
construction (Thomae-type, where both limits are 0 everywhere).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ConstructionError, DomainError, NotRegulatedError
from .polynomial import Poly
from .scalar import format_rational, rational

ZERO = Fraction(0)


def _check_domain(x: Fraction):
    if not (0 <= x <= 1):
        raise DomainError(f"argument {format_rational(x)} outside [0,1]")


# ---------------------------------------------------------------------------
# supporting types


@dataclass(frozen=True)
class PointData:
    """Function value and one-sided limits at a breakpoint.

    `left` is None at 0 and `right` is None at 1.
    """

    value: Fraction
    left: Optional[Fraction]
    right: Optional[Fraction]


@dataclass(frozen=True)
class HeightedSet:
    """Finite enumerated point set with integer heights.

    The level set {x : H(x) < n} is fully materialised for every
    n <= truncation_depth.
    """

    points: tuple
    heights: tuple
    truncation_depth: int

    def __post_init__(self):
        if len(self.points) != len(self.heights):
            raise ConstructionError("points and heights must have equal length")
        if len(set(self.points)) != len(self.points):
            raise ConstructionError("support points must be pairwise distinct")
        for p in self.points:
            if not (0 <= p <= 1):
                raise ConstructionError("support points must lie in [0,1]")
        for h in self.heights:
            if h < 0:
                raise ConstructionError("heights must be natural numbers")

    @staticmethod
    def build(points, heights, truncation_depth=None):
        pts = tuple(rational(p) for p in points)
        hts = tuple(int(h) for h in heights)
        if truncation_depth is None:
            truncation_depth = (max(hts) + 1) if hts else 0
        return HeightedSet(pts, hts, truncation_depth)

    def height(self, x) -> Optional[int]:
        x = rational(x)
        for p, h in zip(self.points, self.heights):
            if p == x:
                return h
        return None

    def level_set(self, n: int) -> tuple:
        """A_n = {x : H(x) < n}; nested in n by construction."""
        if n > self.truncation_depth:
            raise DomainError(
                f"level set {n} beyond truncation depth {self.truncation_depth}"
            )
        return tuple(p for p, h in zip(self.points, self.heights) if h < n)


class WeightRule:
    """Maps a height to a positive weight; nonincreasing in the height."""

    kind = "abstract"

    def __call__(self, m: int) -> Fraction:
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    @staticmethod
    def from_dict(d):
        kind = d["kind"]
        if kind == "dyadic":
            return DyadicRule()
        if kind == "constant":
            return ConstantRule(rational(d["value"]))
        if kind == "rescaled":
            return RescaledRule([int(v) for v in d["counts"]])
        raise ConstructionError(f"unknown weight rule {kind!r}")


class DyadicRule(WeightRule):
    """Height m gets weight 1/2**(m+1)."""

    kind = "dyadic"

    def __call__(self, m: int) -> Fraction:
        return Fraction(1, 2 ** (m + 1))

    def to_dict(self):
        return {"kind": "dyadic"}


class ConstantRule(WeightRule):
    """Every support point gets the same weight (indicator functions)."""

    kind = "constant"

    def __init__(self, value):
        value = rational(value)
        if value <= 0:
            raise ConstructionError("indicator weight must be positive")
        self.value = value

    def __call__(self, m: int) -> Fraction:
        return self.value

    def to_dict(self):
        return {"kind": "constant", "value": format_rational(self.value)}


class RescaledRule(WeightRule):
    """Height m gets weight 1/(2**m * (counts[m] + 2)).

    `counts` bounds the size of the m-th level set, making the resulting
    function's total variation at most 2 regardless of how fast the level
    sets grow.
    """

    kind = "rescaled"

    def __init__(self, counts):
        self.counts = [int(c) for c in counts]
        if any(c < 0 for c in self.counts):
            raise ConstructionError("counts must be nonnegative")

    def __call__(self, m: int) -> Fraction:
        if m >= len(self.counts):
            raise DomainError(f"rescaled rule has no count for height {m}")
        return Fraction(1, 2 ** m * (self.counts[m] + 2))

    def to_dict(self):
        return {"kind": "rescaled", "counts": list(self.counts)}


@dataclass(frozen=True)
class ClassReport:
    """Exactly decided class flags; None means not decidable for the
    variant (or only up to the materialised truncation, see notes)."""

    regulated: Optional[bool]
    cadlag: Optional[bool]
    u0: Optional[bool]
    monotone: Optional[bool]
    bv: Optional[bool]
    variation: Optional[Fraction]
    lsco: Optional[bool]
    usco: Optional[bool]
    cliquish: Optional[bool]
    notes: str = ""

    def to_dict(self):
        def show(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            return v

        return {
            name: show(getattr(self, name))
            for name in (
                "regulated", "cadlag", "u0", "monotone", "bv",
                "variation", "lsco", "usco", "cliquish", "notes",
            )
        }


# ---------------------------------------------------------------------------
# gallery variants


class GalleryFn:
    """Common interface: exact evaluation, one-sided limits, sampling."""

    kind = "abstract"

    def eval(self, x) -> Fraction:
        raise NotImplementedError

    def left_limit(self, x0) -> Fraction:
        raise NotRegulatedError(f"{self.kind} function has no one-sided limits")

    def right_limit(self, x0) -> Fraction:
        raise NotRegulatedError(f"{self.kind} function has no one-sided limits")

    def is_regulated(self) -> bool:
        return False

    def classify(self) -> ClassReport:
        raise NotImplementedError

    def sample_values(self, n: int) -> list:
        """f(k/n) for k = 0..n, exact."""
        return [self.eval(Fraction(k, n)) for k in range(n + 1)]

    def nonzero_samples(self, n: int):
        """Sparse (k, f(k/n)) pairs; None when density makes this useless."""
        return None

    def sample_floats(self, n: int) -> np.ndarray:
        vals = self.sample_values(n)
        return np.array([float(v) for v in vals])

    def to_dict(self):
        raise NotImplementedError

    def to_json_dict(self):
        return self.to_dict()


class PiecewiseFn(GalleryFn):
    """Finite-breakpoint function: polynomial pieces on open subintervals,
    free per-breakpoint values, stored one-sided limits.

    Breakpoints always include 0 and 1.  The stored limits must agree with
    the adjacent pieces' endpoint values; the value at a breakpoint is
    unconstrained, which is how non-U0 examples are realised.
    """

    kind = "piecewise"

    def __init__(self, breakpoints, pieces, point_data):
        bps = tuple(rational(b) for b in breakpoints)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ConstructionError("breakpoints must start at 0 and end at 1")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ConstructionError("breakpoints must be strictly increasing")
        if len(pieces) != len(bps) - 1:
            raise ConstructionError("need exactly one piece per open subinterval")
        if len(point_data) != len(bps):
            raise ConstructionError("need point data at every breakpoint")
        for i, pd in enumerate(point_data):
            if (pd.left is None) != (i == 0) or (pd.right is None) != (i == len(bps) - 1):
                raise ConstructionError("left limit absent only at 0, right only at 1")
            if pd.right is not None and pd.right != pieces[i](bps[i]):
                raise ConstructionError(
                    f"stored right limit at {format_rational(bps[i])} disagrees with piece"
                )
            if pd.left is not None and pd.left != pieces[i - 1](bps[i]):
                raise ConstructionError(
                    f"stored left limit at {format_rational(bps[i])} disagrees with piece"
                )
        self.breakpoints = bps
        self.pieces = tuple(pieces)
        self.point_data = tuple(point_data)

    @staticmethod
    def from_pieces(breakpoints, pieces, values=None):
        """Build with limits derived from the pieces.

        `values` maps breakpoints to function values; omitted breakpoints
        default to the right limit (left limit at 1), i.e. cadlag.
        """
        bps = [rational(b) for b in breakpoints]
        pieces = list(pieces)
        values = {rational(k): rational(v) for k, v in (values or {}).items()}
        data = []
        for i, b in enumerate(bps):
            left = pieces[i - 1](b) if i > 0 else None
            right = pieces[i](b) if i < len(bps) - 1 else None
            default = right if right is not None else left
            data.append(PointData(values.get(b, default), left, right))
        return PiecewiseFn(bps, pieces, data)

    # -- evaluation -----------------------------------------------------

    def _breakpoint_index(self, x: Fraction) -> Optional[int]:
        i = bisect_right(self.breakpoints, x) - 1
        if 0 <= i < len(self.breakpoints) and self.breakpoints[i] == x:
            return i
        return None

    def _piece_index(self, x: Fraction) -> int:
        return min(bisect_right(self.breakpoints, x) - 1, len(self.pieces) - 1)

    def eval(self, x) -> Fraction:
        x = rational(x)
        _check_domain(x)
        bi = self._breakpoint_index(x)
        if bi is not None:
            return self.point_data[bi].value
        return self.pieces[self._piece_index(x)](x)

    def left_limit(self, x0) -> Fraction:
        x0 = rational(x0)
        if not (0 < x0 <= 1):
            raise DomainError("left limit needs x0 in (0,1]")
        bi = self._breakpoint_index(x0)
        if bi is not None:
            return self.point_data[bi].left
        return self.pieces[self._piece_index(x0)](x0)

    def right_limit(self, x0) -> Fraction:
        x0 = rational(x0)
        if not (0 <= x0 < 1):
            raise DomainError("right limit needs x0 in [0,1)")
        bi = self._breakpoint_index(x0)
        if bi is not None:
            return self.point_data[bi].right
        return self.pieces[self._piece_index(x0)](x0)

    def is_regulated(self) -> bool:
        return True

    def interior_breakpoints(self) -> tuple:
        return self.breakpoints[1:-1]

    def is_single_polynomial(self) -> bool:
        """True when the function is one polynomial on all of [0,1],
        including the endpoint values."""
        if len(self.pieces) != 1:
            return False
        p = self.pieces[0]
        return self.point_data[0].value == p(ZERO) and self.point_data[1].value == p(Fraction(1))

    def sample_floats(self, n: int) -> np.ndarray:
        xs = np.arange(n + 1) / n
        out = np.empty(n + 1)
        edges = [float(b) for b in self.breakpoints]
        for i, piece in enumerate(self.pieces):
            lo, hi = edges[i], edges[i + 1]
            mask = (xs >= lo) & (xs <= hi)
            coeffs = [float(c) for c in reversed(piece.coeffs)]
            out[mask] = np.polyval(coeffs, xs[mask])
        for b, pd in zip(self.breakpoints, self.point_data):
            num = n * b.numerator
            if num % b.denominator == 0:
                out[num // b.denominator] = float(pd.value)
        return out

    # -- classification --------------------------------------------------

    def classify(self) -> ClassReport:
        from .bv import exact_variation  # local import to avoid a cycle

        cadlag = all(
            pd.value == pd.right for pd in self.point_data[:-1]
        )
        u0 = True
        usco = True
        lsco = True
        for i, pd in enumerate(self.point_data):
            sides = [s for s in (pd.left, pd.right) if s is not None]
            lo, hi = min(sides), max(sides)
            if 0 < i < len(self.point_data) - 1 and not (lo <= pd.value <= hi):
                u0 = False
            if pd.value < hi:
                usco = False
            if pd.value > lo:
                lsco = False
        nondec = self._monotone_check(+1)
        noninc = self._monotone_check(-1)
        variation = exact_variation(self, Fraction(1))
        return ClassReport(
            regulated=True,
            cadlag=cadlag,
            u0=u0,
            monotone=nondec or noninc,
            bv=True,
            variation=variation,
            lsco=lsco,
            usco=usco,
            cliquish=True,
        )

    def _monotone_check(self, sign: int) -> bool:
        for i, piece in enumerate(self.pieces):
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            lo, hi, _ = piece.derivative().range_on(a, b)
            if (sign > 0 and lo < 0) or (sign < 0 and hi > 0):
                return False
        for i, pd in enumerate(self.point_data):
            for s, other in ((1, pd.right), (-1, pd.left)):
                if other is None:
                    continue
                if sign * s * (other - pd.value) < 0:
                    return False
        return True

    def to_dict(self):
        return {
            "type": "piecewise",
            "breakpoints": [format_rational(b) for b in self.breakpoints],
            "pieces": [[format_rational(c) for c in p.coeffs] for p in self.pieces],
            "point_data": [
                {
                    "value": format_rational(pd.value),
                    "left": None if pd.left is None else format_rational(pd.left),
                    "right": None if pd.right is None else format_rational(pd.right),
                }
                for pd in self.point_data
            ],
        }


class ThomaeFn(GalleryFn):
    """Vanishes off an enumerated heighted set; takes weight_rule(height)
    at each support point.  Both one-sided limits are 0 everywhere, a
    fact derived from the construction rather than stored data."""

    kind = "thomae"
    limits_construction_derived = True

    def __init__(self, support: HeightedSet, weight_rule: WeightRule = None):
        self.support = support
        self.weight_rule = weight_rule or DyadicRule()
        self._table = {}
        for p, h in zip(support.points, support.heights):
            w = self.weight_rule(h)
            if w <= 0:
                raise ConstructionError("weights must be positive")
            self._table[p] = w
        hs = sorted(set(support.heights))
        for a, b in zip(hs, hs[1:]):
            if self.weight_rule(b) > self.weight_rule(a):
                raise ConstructionError("weight rule must be nonincreasing in height")

    def eval(self, x) -> Fraction:
        x = rational(x)
        _check_domain(x)
        return self._table.get(x, ZERO)

    def left_limit(self, x0) -> Fraction:
        x0 = rational(x0)
        if not (0 < x0 <= 1):
            raise DomainError("left limit needs x0 in (0,1]")
        return ZERO

    def right_limit(self, x0) -> Fraction:
        x0 = rational(x0)
        if not (0 <= x0 < 1):
            raise DomainError("right limit needs x0 in [0,1)")
        return ZERO

    def is_regulated(self) -> bool:
        return True

    def max_weight(self) -> Fraction:
        return max(self._table.values(), default=ZERO)

    def support_items(self):
        return sorted(self._table.items())

    def rational_restriction(self) -> "ThomaeFn":
        """Restriction to rational support points.

        The evaluable domain is already rational, so at desk scale this
        keeps every materialised point; the method exists so callers can
        state the restriction explicitly.
        """
        return ThomaeFn(self.support, self.weight_rule)

    def nonzero_samples(self, n: int):
        out = []
        for p, w in self._table.items():
            num = n * p.numerator
            if num % p.denominator == 0:
                out.append((num // p.denominator, w))
        return sorted(out)

    def sample_values(self, n: int) -> list:
        vals = [ZERO] * (n + 1)
        for k, w in self.nonzero_samples(n):
            vals[k] = w
        return vals

    def sample_floats(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1)
        for k, w in self.nonzero_samples(n):
            out[k] = float(w)
        return out

    def classify(self) -> ClassReport:
        from .bv import exact_variation

        trivial = not self._table
        variation = exact_variation(self, Fraction(1))
        return ClassReport(
            regulated=True,
            cadlag=trivial,
            u0=trivial,
            monotone=trivial,
            bv=True,
            variation=variation,
            lsco=trivial,
            usco=True,
            cliquish=True,
            notes="verdicts hold for the materialised support; "
            "the untruncated union is not decidable at desk scale",
        )

    def to_dict(self):
        return {
            "type": "thomae",
            "support": {
                "points": [format_rational(p) for p in self.support.points],
                "heights": list(self.support.heights),
                "truncation_depth": self.support.truncation_depth,
            },
            "weight_rule": self.weight_rule.to_dict(),
        }


class DirichletIndicator(GalleryFn):
    """Indicator of a designated dense set, materialised as a finite
    enumeration.  Not regulated; only coarse classification applies."""

    kind = "dirichlet"

    def __init__(self, points):
        pts = tuple(rational(p) for p in points)
        for p in pts:
            if not (0 <= p <= 1):
                raise ConstructionError("enumerated points must lie in [0,1]")
        if len(set(pts)) != len(pts):
            raise ConstructionError("enumerated points must be distinct")
        self.points = pts
        self._set = frozenset(pts)

    def eval(self, x) -> Fraction:
        x = rational(x)
        _check_domain(x)
        return Fraction(1) if x in self._set else ZERO

    def nonzero_samples(self, n: int):
        out = []
        for p in self.points:
            num = n * p.numerator
            if num % p.denominator == 0:
                out.append((num // p.denominator, Fraction(1)))
        return sorted(out)

    def sample_values(self, n: int) -> list:
        vals = [ZERO] * (n + 1)
        for k, w in self.nonzero_samples(n):
            vals[k] = w
        return vals

    def sample_floats(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1)
        for k, w in self.nonzero_samples(n):
            out[k] = 1.0
        return out

    def classify(self) -> ClassReport:
        return ClassReport(
            regulated=False,
            cadlag=None,
            u0=None,
            monotone=None,
            bv=False,
            variation=None,
            lsco=None,
            usco=None,
            cliquish=None,
            notes="indicator of a dense set: only {not regulated, not BV} decidable",
        )

    def to_dict(self):
        return {
            "type": "dirichlet",
            "points": [format_rational(p) for p in self.points],
        }


class CombinationFn(GalleryFn):
    """Exact linear combination of gallery functions (sums/differences)."""

    kind = "combination"

    def __init__(self, terms):
        self.terms = tuple((rational(c), f) for c, f in terms)
        if not self.terms:
            raise ConstructionError("combination needs at least one term")

    def eval(self, x) -> Fraction:
        x = rational(x)
        _check_domain(x)
        return sum((c * f.eval(x) for c, f in self.terms), ZERO)

    def left_limit(self, x0) -> Fraction:
        return sum((c * f.left_limit(x0) for c, f in self.terms), ZERO)

    def right_limit(self, x0) -> Fraction:
        return sum((c * f.right_limit(x0) for c, f in self.terms), ZERO)

    def is_regulated(self) -> bool:
        return all(f.is_regulated() for _, f in self.terms)

    def sample_values(self, n: int) -> list:
        acc = [ZERO] * (n + 1)
        for c, f in self.terms:
            for k, v in enumerate(f.sample_values(n)):
                if v:
                    acc[k] += c * v
        return acc

    def sample_floats(self, n: int) -> np.ndarray:
        acc = np.zeros(n + 1)
        for c, f in self.terms:
            acc += float(c) * f.sample_floats(n)
        return acc

    def classify(self) -> ClassReport:
        return ClassReport(
            regulated=self.is_regulated(),
            cadlag=None, u0=None, monotone=None, bv=None, variation=None,
            lsco=None, usco=None, cliquish=None,
            notes="combination: classify the components individually",
        )

    def to_dict(self):
        return {
            "type": "combination",
            "terms": [
                {"coef": format_rational(c), "fn": f.to_dict()} for c, f in self.terms
            ],
        }


# ---------------------------------------------------------------------------
# constructors


def make_heaviside(a, v) -> PiecewiseFn:
    """0 left of a, 1 right of a, value v at the jump itself."""
    a, v = rational(a), rational(v)
    if not (0 < a < 1):
        raise ConstructionError("jump location must be interior")
    return PiecewiseFn.from_pieces(
        [0, a, 1], [Poly([0]), Poly([1])], values={a: v}
    )


def make_step(jumps, initial=0) -> PiecewiseFn:
    """Piecewise-constant function.

    `jumps` is a sequence of (position, level_after, value_at) with
    strictly increasing interior positions; value_at defaults to
    level_after (cadlag convention).
    """
    initial = rational(initial)
    positions, levels, values = [Fraction(0)], [initial], {}
    for entry in jumps:
        pos, level = rational(entry[0]), rational(entry[1])
        if not (0 < pos < 1):
            raise ConstructionError("jump positions must be interior")
        if pos <= positions[-1]:
            raise ConstructionError("jump positions must be strictly increasing")
        positions.append(pos)
        levels.append(level)
        if len(entry) > 2 and entry[2] is not None:
            values[pos] = rational(entry[2])
    positions.append(Fraction(1))
    pieces = [Poly([lvl]) for lvl in levels]
    return PiecewiseFn.from_pieces(positions, pieces, values=values)


def make_polynomial(coeffs) -> PiecewiseFn:
    """Single polynomial piece on [0,1] (continuous everywhere)."""
    return PiecewiseFn.from_pieces([0, 1], [Poly(coeffs)])


def make_thomae(support: HeightedSet, rule: WeightRule = None) -> ThomaeFn:
    return ThomaeFn(support, rule)


def make_indicator(points) -> ThomaeFn:
    """Exact indicator of a finite point set."""
    pts = [rational(p) for p in points]
    support = HeightedSet.build(pts, [0] * len(pts), truncation_depth=1)
    return ThomaeFn(support, ConstantRule(1))


def make_php_h(closed_sets) -> ThomaeFn:
    """Weight 1/2**(n+1) at x when n is the least index with x in the
    n-th set of an increasing family of finite closed sets."""
    sets = [sorted(rational(p) for p in s) for s in closed_sets]
    for earlier, later in zip(sets, sets[1:]):
        if not set(earlier) <= set(later):
            raise ConstructionError("the set family must be increasing")
    first_level = {}
    for n, s in enumerate(sets):
        for p in s:
            first_level.setdefault(p, n)
    points = sorted(first_level)
    heights = [first_level[p] for p in points]
    support = HeightedSet.build(points, heights, truncation_depth=len(sets))
    return ThomaeFn(support, DyadicRule())


# ---------------------------------------------------------------------------
# serialization


def gallery_from_dict(d) -> GalleryFn:
    kind = d.get("type")
    if kind == "piecewise":
        pieces = [Poly([rational(c) for c in cs]) for cs in d["pieces"]]
        data = [
            PointData(
                rational(pd["value"]),
                None if pd["left"] is None else rational(pd["left"]),
                None if pd["right"] is None else rational(pd["right"]),
            )
            for pd in d["point_data"]
        ]
        return PiecewiseFn([rational(b) for b in d["breakpoints"]], pieces, data)
    if kind == "thomae":
        s = d["support"]
        support = HeightedSet.build(
            s["points"], s["heights"], s.get("truncation_depth")
        )
        return ThomaeFn(support, WeightRule.from_dict(d["weight_rule"]))
    if kind == "dirichlet":
        return DirichletIndicator(d["points"])
    if kind == "combination":
        return CombinationFn(
            [(rational(t["coef"]), gallery_from_dict(t["fn"])) for t in d["terms"]]
        )
    raise ConstructionError(f"unknown gallery function type {kind!r}")
