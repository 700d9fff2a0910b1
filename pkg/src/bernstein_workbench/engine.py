"""Bernstein operator evaluation and convergence diagnostics.

Covers exact and float evaluation of B_n(f, x), the two convergence
targets (function value at continuity points, jump midpoint elsewhere),
the three-set error decomposition around a probe point, the explicit
sufficient-n bound for uniform convergence, and the one-sided window
mass with its certified Chebyshev-style tail bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    InconclusiveTrajectory,
    InternalCheckError,
)
from .gallery import GalleryFn, PiecewiseFn
from .scalar import binom, format_rational, pmf_row, pmf_row_float, rational

FUNCTION_VALUE = "FunctionValue"
JUMP_MIDPOINT = "JumpMidpoint"

CONVERGED = "Converged"
NOT_CONVERGED = "NotConverged"
INCONCLUSIVE = "Inconclusive"

DEFAULT_TOL = Fraction(1, 64)
DEFAULT_SCHEDULE_EXACT = tuple(2 ** j for j in range(4, 13))
DEFAULT_SCHEDULE_FLOAT = tuple(2 ** j for j in range(4, 21))


def default_schedule(mode: str = "exact") -> tuple:
    return DEFAULT_SCHEDULE_EXACT if mode == "exact" else DEFAULT_SCHEDULE_FLOAT


# ---------------------------------------------------------------------------
# evaluation


def _forward_difference_eval(piece, n: int, x: Fraction) -> Fraction:
    """B_n of a single polynomial via forward differences at step 1/n.

    Only min(n, degree) difference orders are nonzero, so this handles
    astronomically large n without touching a pmf row.
    """
    d = min(n, piece.degree)
    table = [piece(Fraction(j, n)) for j in range(d + 1)]
    result = table[0]  # order-0 difference times C(n,0) x^0
    xpow = Fraction(1)
    for j in range(1, d + 1):
        table = [table[i + 1] - table[i] for i in range(len(table) - 1)]
        xpow *= x
        result += binom(n, j) * table[0] * xpow
    return result


def bernstein_eval(f: GalleryFn, n: int, x) -> Fraction:
    """Exact B_n(f, x) = sum_k f(k/n) p_{n,k}(x)."""
    if n < 1:
        raise DomainError("bernstein_eval requires n >= 1")
    x = rational(x)
    if not (0 <= x <= 1):
        raise DomainError("x must lie in [0,1]")
    if isinstance(f, PiecewiseFn) and f.is_single_polynomial():
        return _forward_difference_eval(f.pieces[0], n, x)
    sparse = f.nonzero_samples(n)
    row = pmf_row(n, x)
    if sparse is not None:
        return sum((v * row.weights[k] for k, v in sparse), Fraction(0))
    vals = f.sample_values(n)
    return sum((v * w for v, w in zip(vals, row.weights) if v), Fraction(0))


def bernstein_eval_float(f: GalleryFn, n: int, x: float) -> float:
    """Float-mode B_n(f, x) via the log-space pmf row."""
    if n < 1:
        raise DomainError("bernstein_eval requires n >= 1")
    row = pmf_row_float(n, float(x))
    return float(np.dot(f.sample_floats(n), row))


# ---------------------------------------------------------------------------
# targets and reports


@dataclass(frozen=True)
class TargetValue:
    value: Fraction
    kind: str  # FUNCTION_VALUE or JUMP_MIDPOINT


def target_value(f: GalleryFn, x) -> TargetValue:
    """Convergence target at interior x: the function value where
    f(x+) = f(x) = f(x-), otherwise the midpoint of the one-sided limits."""
    x = rational(x)
    if not (0 < x < 1):
        raise DomainError("target_value is defined for x in (0,1)")
    left = f.left_limit(x)
    right = f.right_limit(x)
    value = f.eval(x)
    if left == right == value:
        return TargetValue(value, FUNCTION_VALUE)
    return TargetValue((left + right) / 2, JUMP_MIDPOINT)


@dataclass(frozen=True)
class Verdict:
    kind: str  # CONVERGED / NOT_CONVERGED / INCONCLUSIVE
    tol: object
    at_n: Optional[int] = None

    def __str__(self):
        if self.kind == CONVERGED:
            return f"{self.kind}(tol={self.tol}, at_n={self.at_n})"
        return self.kind


@dataclass(frozen=True)
class ConvergenceReport:
    x0: object
    schedule: tuple
    values: tuple
    target: TargetValue
    errors: tuple
    verdict: Verdict
    mode: str

    def to_csv(self) -> str:
        def show(v):
            return format_rational(v) if isinstance(v, Fraction) else repr(v)

        lines = ["n,value,target,error,mode"]
        for n, v, e in zip(self.schedule, self.values, self.errors):
            lines.append(
                f"{n},{show(v)},{show(self.target.value)},{show(e)},{self.mode}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self):
        def show(v):
            return format_rational(v) if isinstance(v, Fraction) else v

        return {
            "x0": show(self.x0),
            "mode": self.mode,
            "target": {"value": show(self.target.value), "kind": self.target.kind},
            "schedule": list(self.schedule),
            "values": [show(v) for v in self.values],
            "errors": [show(e) for e in self.errors],
            "verdict": {
                "kind": self.verdict.kind,
                "tol": show(self.verdict.tol),
                "at_n": self.verdict.at_n,
            },
        }


def _judge(schedule, values, errors, tol) -> Verdict:
    """Converged when the last three errors sit below tol; NotConverged
    when the trajectory has stabilised away from the target; otherwise
    Inconclusive."""
    if len(schedule) < 3:
        return Verdict(INCONCLUSIVE, tol)
    last3_err = errors[-3:]
    if all(e < tol for e in last3_err):
        at = schedule[-3]
        for i in range(len(schedule) - 3, -1, -1):
            if all(e < tol for e in errors[i:]):
                at = schedule[i]
        return Verdict(CONVERGED, tol, at_n=at)
    last3_val = values[-3:]
    spread = max(last3_val) - min(last3_val)
    if spread < tol:
        return Verdict(NOT_CONVERGED, tol)
    return Verdict(INCONCLUSIVE, tol)


def converge_report(
    f: GalleryFn, x0, schedule=None, tol=None, mode: str = "exact"
) -> ConvergenceReport:
    x0 = rational(x0)
    if schedule is None:
        schedule = default_schedule(mode)
    schedule = tuple(int(n) for n in schedule)
    if any(a >= b for a, b in zip(schedule, schedule[1:])):
        raise DomainError("schedule must be strictly increasing")
    target = target_value(f, x0)
    if mode == "exact":
        tol = rational(tol) if tol is not None else DEFAULT_TOL
        values = tuple(bernstein_eval(f, n, x0) for n in schedule)
        errors = tuple(abs(v - target.value) for v in values)
    else:
        tol = float(tol) if tol is not None else float(DEFAULT_TOL)
        values = tuple(bernstein_eval_float(f, n, float(x0)) for n in schedule)
        errors = tuple(abs(v - float(target.value)) for v in values)
    return ConvergenceReport(
        x0=x0, schedule=schedule, values=values, target=target,
        errors=errors, verdict=_judge(schedule, values, errors, tol), mode=mode,
    )


# ---------------------------------------------------------------------------
# explicit bounds


def sufficient_n(m0: int, n0: int, k0: int, index_bits: int = 64) -> int:
    """2**(2*m0 + 2*n0 + k0 + 1): with m0 a bound on |f|, n0 a modulus
    exponent, this n forces |f(x) - B_n(f,x)| <= 2**-k0."""
    if min(m0, n0, k0) < 0:
        raise DomainError("sufficient_n takes natural numbers")
    exponent = 2 * m0 + 2 * n0 + k0 + 1
    if exponent >= index_bits - 1:
        raise CapacityError(
            f"2**{exponent} exceeds the {index_bits}-bit index budget"
        )
    return 2 ** exponent


def uniform_error(f: GalleryFn, n: int, grid) -> Fraction:
    """max over the grid of |f(x) - B_n(f, x)|, exact."""
    pts = [rational(x) for x in grid]
    if not pts:
        raise DomainError("uniform_error needs a nonempty grid")
    return max(abs(f.eval(x) - bernstein_eval(f, n, x)) for x in pts)


# ---------------------------------------------------------------------------
# error decomposition and window masses


def _window_sets(n: int, x0: Fraction, n0: int):
    """Index sets: A0 right window, A1 left window, A2 the far tail."""
    delta = Fraction(1, 2 ** n0)
    a0, a1, a2 = [], [], []
    for k in range(n + 1):
        kn = Fraction(k, n)
        if x0 <= kn < x0 + delta:
            a0.append(k)
        elif x0 - delta <= kn < x0:
            a1.append(k)
        else:
            a2.append(k)
    return a0, a1, a2


@dataclass(frozen=True)
class ErrorDecomposition:
    n: int
    x0: Fraction
    n0: int
    target: TargetValue
    sum_a0: Fraction
    sum_a1: Fraction
    sum_a2: Fraction

    @property
    def total(self) -> Fraction:
        return self.sum_a0 + self.sum_a1 + self.sum_a2


def error_decomposition(f: GalleryFn, x0, n0: int, n: int) -> ErrorDecomposition:
    """Exact partial sums of (f(k/n) - target) p_{n,k}(x0) over the
    window/tail partition; they add up to B_n(f, x0) - target exactly."""
    x0 = rational(x0)
    if not (0 < x0 < 1):
        raise DomainError("decomposition needs x0 in (0,1)")
    target = target_value(f, x0)
    row = pmf_row(n, x0)
    vals = f.sample_values(n)
    sums = []
    for idx in _window_sets(n, x0, n0):
        sums.append(
            sum(((vals[k] - target.value) * row.weights[k] for k in idx), Fraction(0))
        )
    return ErrorDecomposition(
        n=n, x0=x0, n0=n0, target=target,
        sum_a0=sums[0], sum_a1=sums[1], sum_a2=sums[2],
    )


def _check_window(n: int, x0: Fraction, n0: int):
    delta = Fraction(1, 2 ** n0)
    if not (0 < x0 < 1):
        raise DomainError("window mass needs x0 in (0,1)")
    if delta >= min(x0, 1 - x0):
        raise DomainError(
            f"window 2^-{n0} must fit inside (0,1) around {format_rational(x0)}"
        )


def halfmass(n: int, x0, n0: int, mode: str = "exact"):
    """One-sided window mass: sum of p_{n,k}(x0) over x0 <= k/n < x0 + 2^-n0.

    Tends to 1/2 for large n (de Moivre-Laplace behaviour).
    """
    x0 = rational(x0)
    _check_window(n, x0, n0)
    delta = Fraction(1, 2 ** n0)
    lo = math.ceil(x0 * n)
    hi_bound = (x0 + delta) * n
    hi = math.ceil(hi_bound) - 1 if hi_bound.denominator > 1 else int(hi_bound) - 1
    if mode == "float":
        row = pmf_row_float(n, float(x0))
        return float(np.sum(row[lo : hi + 1]))
    row = pmf_row(n, x0)
    return sum(row.weights[lo : hi + 1], Fraction(0))


@dataclass(frozen=True)
class CertifiedTail:
    value: Fraction
    bound: Fraction


def tail_mass(n: int, x0, n0: int) -> CertifiedTail:
    """Mass outside the symmetric window, with the certified bound
    2**(2*n0) * x0(1-x0)/n derived from the second-moment identity."""
    x0 = rational(x0)
    _check_window(n, x0, n0)
    row = pmf_row(n, x0)
    _, _, a2 = _window_sets(n, x0, n0)
    value = sum((row.weights[k] for k in a2), Fraction(0))
    bound = 4 ** n0 * x0 * (1 - x0) / n
    if value > bound:
        raise InternalCheckError(
            f"tail mass {value} exceeded its certified bound {bound}"
        )
    return CertifiedTail(value=value, bound=bound)


def midpoint_bound_check(f: GalleryFn, x0, schedule=None, tol=None) -> bool:
    """Check |f(x0) - limit estimate| <= |(f(x0+) - f(x0-))/2| + tol,
    estimating the limit by the final trajectory value."""
    report = converge_report(f, x0, schedule=schedule, tol=tol, mode="exact")
    tol = report.verdict.tol
    last3 = report.values[-3:]
    if max(last3) - min(last3) >= tol:
        raise InconclusiveTrajectory(
            "trajectory has not stabilised; cannot estimate the limit"
        )
    x0 = rational(x0)
    estimate = report.values[-1]
    half_jump = abs((f.right_limit(x0) - f.left_limit(x0)) / 2)
    return abs(f.eval(x0) - estimate) <= half_jump + tol


def report_to_json(report: ConvergenceReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2) + "\n"
