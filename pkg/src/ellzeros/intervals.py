"""Intervals on the extended real line and the projective length parameter.

The parameter alpha(a, b) = (b - a) / (1 + a*b) is the arctan-additive
length of the interval; its sign splits the exact variance formula into
three cases, and sqrt(n) * alpha sets the asymptotic regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

SignCase = Literal["positive", "zero", "negative"]


@dataclass(frozen=True)
class ExtendedInterval:
    """Open interval (a, b); endpoints may be -inf / +inf but not NaN."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if math.isnan(a) or math.isnan(b):
            raise ValueError("interval endpoints must not be NaN")
        if not a < b:
            raise ValueError(f"interval requires a < b, got a={a!r}, b={b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_full_line(self) -> bool:
        return math.isinf(self.a) and math.isinf(self.b)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)


FULL_LINE = ExtendedInterval(-math.inf, math.inf)


@dataclass(frozen=True)
class AlphaParam:
    """alpha(a, b), its sqrt(n)-scaled value, and the variance-case tag."""

    alpha: float
    alpha_n: float
    sign_case: SignCase


def alpha_point(x, y):
    """alpha(x, y) = (y - x) / (1 + x*y) for finite scalars or arrays."""
    return (y - x) / (1.0 + x * y)


def alpha_of(interval: ExtendedInterval, n: int) -> AlphaParam:
    """Projective length of the interval with infinite-endpoint conventions.

    Infinite endpoints take the limiting value of the finite-endpoint
    formula, which keeps the expectation and the variance continuous in
    each endpoint: alpha(a, +inf) = 1/a for a != 0 (+inf at a = 0) and
    alpha(-inf, b) = -1/b for b != 0 (+inf at b = 0).  The full line maps
    to alpha = 0, the only interval with sign case "zero".  An exactly
    degenerate 1 + a*b = 0 gets +inf; both adjacent sign cases produce the
    same variance there, so the choice is immaterial.
    """
    n = _check_degree(n)
    a, b = interval.a, interval.b
    if interval.is_full_line:
        return AlphaParam(0.0, 0.0, "zero")
    if math.isinf(b):
        alpha = math.inf if a == 0.0 else 1.0 / a
    elif math.isinf(a):
        alpha = math.inf if b == 0.0 else -1.0 / b
    else:
        c = 1.0 + a * b
        alpha = math.inf if c == 0.0 else (b - a) / c
    sign_case: SignCase = "positive" if alpha > 0 else "negative"
    return AlphaParam(alpha, math.sqrt(n) * alpha, sign_case)


def _check_degree(n) -> int:
    if not isinstance(n, (int,)) or isinstance(n, bool):
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        else:
            raise ValueError(f"degree must be a positive integer, got {n!r}")
    if n < 1:
        raise ValueError(f"degree must be a positive integer, got {n!r}")
    return int(n)
