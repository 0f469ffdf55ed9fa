"""Stable evaluation of the elliptic scaling functions and their limits.

The finite-degree functions here are Delta_n, Gamma_n and
F_n = h(Delta_n) * Gamma_n - 1, always evaluated at the scaled argument
s / sqrt(n), plus the n -> infinity profiles delta0, delta1, gamma0,
gamma1 and the derived f0, f1, g0 = s*f0, g1 = s*f1 - s^3*f0/3.

All closed forms share an O(s^4) numerator cancellation at s = 0, so
every function is evaluated on two branches:

* s >= 0.1: the closed form, with (1+u)^-n computed as exp(-n*log1p(u))
  and 1 - e^-w as -expm1(-w), which keeps the relative error near 1e-13
  down to the switch point;
* 0 < s < 0.1: a series about s = 0.  For the limit profiles the
  coefficients are frozen constants produced once by
  scripts/derive_profile_series.py (mpmath, 300 digits); for finite n the
  coefficients are rational in n and are summed by a term recurrence.

Both branches overlap on [0.05, 0.2] and are cross-checked there by the
test suite.  All functions are defined for s >= 0 only (callers pass the
absolute value) and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as _poly

from .intervals import _check_degree

HALF_PI = math.pi / 2.0

# Branch switch point; both branches are accurate in a window around it.
SMALL_S_SWITCH = 0.1

# Term count for the finite-n series branch.  Terms scale like (s^2)^j / j!
# with s < 0.1, so 16 terms leave a remainder below 1e-40.
_FINITE_SERIES_TERMS = 16

# ---------------------------------------------------------------------------
# Frozen Maclaurin tables for the limit profiles, from
# scripts/derive_profile_series.py (degree-24 interpolation at 300 digits,
# coefficients kept through s^18; parity-forbidden entries zeroed).  The
# truncated polynomials reproduce the closed forms to better than 2e-19
# everywhere on [0, 0.2].
# ---------------------------------------------------------------------------

_DELTA0_SERIES = np.array([
    -1.0,
    0.0,
    0.1666666666666666666667,
    0.0,
    -0.01388888888888888888889,
    0.0,
    0.003240740740740740740741,
    0.0,
    -0.0004436728395061728395062,
    0.0,
    0.000005970752498530276308054,
    0.0,
    -8.420291985106799921707e-8,
    0.0,
    5.064933209223332663314e-7,
    0.0,
    -4.172935106257083315747e-9,
    0.0,
    -6.383922205941386376187e-9,
])

_DELTA1_SERIES = np.array([
    0.0,
    0.0,
    -0.3333333333333333333333,
    0.0,
    -0.02777777777777777777778,
    0.0,
    0.005555555555555555555556,
    0.0,
    -0.003163580246913580246914,
    0.0,
    0.0007615005878894767783657,
    0.0,
    -0.00001318158436213991769566,
    0.0,
    -0.000001541168593637729781111,
    0.0,
    -0.000001629411552572866244014,
    0.0,
    4.437615644308782468572e-8,
])

_GAMMA0_SERIES = np.array([
    0.0,
    0.5,
    0.0,
    0.04166666666666666666667,
    0.0,
    -0.015625,
    0.0,
    -0.00078125,
    0.0,
    0.0005154079861111111111111,
    0.0,
    0.00001530722966269841269839,
    0.0,
    -0.0000155413592303240741379,
    0.0,
    -3.147293440669922177351e-7,
    0.0,
    4.470537578722512444992e-7,
    0.0,
])

_GAMMA1_SERIES = np.array([
    0.0,
    -0.5,
    0.0,
    0.0,
    0.0,
    -0.015625,
    0.0,
    0.01302083333333333333333,
    0.0,
    0.001025390625,
    0.0,
    -0.000927734375,
    0.0,
    -0.00003507906797701719583864,
    0.0,
    0.00004329378642733125363668,
    0.0,
    0.000001032705660156602265665,
    0.0,
])

_F0_SERIES = np.array([
    -1.0,
    0.7853981633974483096157,
    0.0,
    -0.06544984694978735913464,
    0.0320750149549792091394,
    -0.02454369260617025967549,
    -0.00106916716516597363798,
    0.001227184630308512983774,
    -0.0003436608745176343836364,
    0.0008096009713840884267957,
    -0.000003535605704913933988028,
    -0.00002404454012757255102141,
    0.000003973270835355552788367,
    -0.0000244123099923930173551,
    2.533644717559867172461e-7,
    4.943756975947383156431e-7,
    -3.447043863908996889282e-8,
    7.022304007459842773753e-7,
    -5.185249420855486783874e-9,
])

_F1_SERIES = np.array([
    0.0,
    -0.7853981633974483096157,
    1.0,
    -0.3926990816987241548078,
    -0.1283000598199168365576,
    0.07363107781851077902647,
    -0.04169751944147297188122,
    0.04090615434361709945915,
    0.002749286996141075069091,
    -0.002684466378799872152007,
    0.0008945082433432252989713,
    -0.002185922622737038752348,
    0.000001112108703545655590938,
    0.0000771428995759619349451,
    -0.00001537932851477870223936,
    0.00009067429425746031766625,
    -9.400947554538634339939e-7,
    -0.000002085647473890933227275,
    1.850295710611264800839e-7,
])


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _check_nonnegative(arr):
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("scaling profiles are defined for s >= 0 only")


# ---------------------------------------------------------------------------
# shared stable primitives
# ---------------------------------------------------------------------------

def h_func(x):
    """h(x) = sqrt(1 - x^2) + x*arcsin(x) on [-1, 1].

    Even, with minimum h(0) = 1 and maximum h(+-1) = pi/2.
    """
    arr, scalar = _as_array(x)
    if np.any(np.abs(arr) > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("h_func requires |x| <= 1")
    val = np.sqrt((1.0 - arr) * (1.0 + arr)) + arr * np.arcsin(arr)
    return _ret(val, scalar)


def _asin_from_one_plus(one_plus):
    # arcsin(x) for x in [-1, 0] given an accurately computed 1 + x,
    # via arcsin(x) = -pi/2 + 2*arcsin(sqrt((1 + x) / 2)).
    one_plus = np.maximum(one_plus, 0.0)
    return -HALF_PI + 2.0 * np.arcsin(np.sqrt(0.5 * one_plus))


def _h_from_one_plus(delta, one_plus):
    # h(delta) for delta in [-1, 0]; avoids the 1 - delta^2 cancellation
    # when delta is close to -1.
    one_plus = np.maximum(one_plus, 0.0)
    return (np.sqrt((1.0 - delta) * one_plus)
            + delta * _asin_from_one_plus(one_plus))


# ---------------------------------------------------------------------------
# limit profiles
# ---------------------------------------------------------------------------

def _limit_cores(w):
    # a0 = 1 - e^-w, dc = 1 - (1+w)e^-w, nc = 1 - w - e^-w, all via expm1.
    em = np.exp(-w)
    a0 = -np.expm1(-w)
    dc = a0 - w * em
    nc = a0 - w
    return em, a0, dc, nc


def _delta0_parts(w):
    # returns (delta0, 1 + delta0); the sum form of 1 + delta0 keeps full
    # relative accuracy where delta0 -> -1.
    em, a0, dc, nc = _limit_cores(w)
    e2 = np.exp(-0.5 * w)
    d0 = e2 * nc / dc
    one_plus = (dc + e2 * nc) / dc
    return d0, one_plus


def _gamma0_closed(w):
    _, a0, dc, _ = _limit_cores(w)
    return dc / a0 ** 1.5


def _delta1_closed(w):
    em, a0, dc, nc = _limit_cores(w)
    e2 = np.exp(-0.5 * w)
    t1 = 0.5 * w * w * e2 * nc * (1.0 + w) * em / (dc * dc)
    # bracket = w + w^2/4 - w^3/4 - e^-w (w + 3w^2/4), grouped so that the
    # only cancellation left is between two O(w^2) quantities
    bracket = w * a0 + 0.25 * w * w * (1.0 - 3.0 * em) - 0.25 * w ** 3
    return t1 + e2 * bracket / dc


def _gamma1_closed(w):
    em, a0, dc, _ = _limit_cores(w)
    return w * w * em * (dc - 2.0 * w) / (4.0 * a0 ** 2.5)


def _f0_closed(w):
    d0, one_plus = _delta0_parts(w)
    return _h_from_one_plus(d0, one_plus) * _gamma0_closed(w) - 1.0


def _f1_closed(w):
    d0, one_plus = _delta0_parts(w)
    g0v = _gamma0_closed(w)
    f0v = _h_from_one_plus(d0, one_plus) * g0v - 1.0
    return (_h_from_one_plus(d0, one_plus) * _gamma1_closed(w)
            + _delta1_closed(w) * _asin_from_one_plus(one_plus) * g0v
            - w * f0v)


def _two_branch(s, series, closed_of_w):
    arr, scalar = _as_array(s)
    _check_nonnegative(arr)
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    small = arr < SMALL_S_SWITCH
    if np.any(small):
        out[small] = _poly.polyval(arr[small], series)
    big = ~small
    if np.any(big):
        sb = arr[big]
        out[big] = closed_of_w(sb * sb)
    return _ret(out[0] if scalar else out, scalar)


def delta0(s):
    """Limit profile of the conditional-correlation function Delta."""
    return _two_branch(s, _DELTA0_SERIES, lambda w: _delta0_parts(w)[0])


def delta1(s):
    """First 1/n correction profile to Delta."""
    return _two_branch(s, _DELTA1_SERIES, _delta1_closed)


def gamma0(s):
    """Limit profile of the conditional-scale function Gamma."""
    return _two_branch(s, _GAMMA0_SERIES, _gamma0_closed)


def gamma1(s):
    """First 1/n correction profile to Gamma."""
    return _two_branch(s, _GAMMA1_SERIES, _gamma1_closed)


def f0(s):
    """Leading profile of the variance integrand, f0 = h(delta0)*gamma0 - 1."""
    return _two_branch(s, _F0_SERIES, _f0_closed)


def f1(s):
    """First 1/n correction profile of the variance integrand."""
    return _two_branch(s, _F1_SERIES, _f1_closed)


def g0(s):
    """Leading profile of the arctan-weighted integrand, g0(s) = s*f0(s)."""
    arr, scalar = _as_array(s)
    return _ret(arr * np.asarray(f0(arr)), scalar)


def g1(s):
    """First correction of the arctan-weighted integrand,
    g1(s) = s*f1(s) - (s^3/3)*f0(s)."""
    arr, scalar = _as_array(s)
    return _ret(arr * np.asarray(f1(arr)) - arr ** 3 * np.asarray(f0(arr)) / 3.0,
                scalar)


_LIMIT_PROFILES = {"f0": f0, "f1": f1, "g0": g0, "g1": g1}


def limit_profiles(tag: str, s):
    """Evaluate one of the limit profiles f0, f1, g0, g1 by tag."""
    try:
        fn = _LIMIT_PROFILES[tag]
    except KeyError:
        raise ValueError(f"unknown limit profile {tag!r}; "
                         f"expected one of {sorted(_LIMIT_PROFILES)}") from None
    return fn(s)


# ---------------------------------------------------------------------------
# finite-degree scaling functions at argument s / sqrt(n)
# ---------------------------------------------------------------------------

def _finite_core(n, s):
    """Return (delta, 1 + delta, gamma) for Delta_n and Gamma_n at s/sqrt(n).

    Works on a float array s >= 0.  Degree 1 is exact: both functions
    vanish identically.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if n == 1:
        z = np.zeros_like(s)
        return z, np.ones_like(s), z.copy()

    delta = np.empty_like(s)
    one_plus = np.empty_like(s)
    gamma = np.empty_like(s)

    # below w ~ 1e-120 the series denominators (order n^2 w^2) can reach
    # the subnormal floor; the limit values are already exact there
    zero = (s * s) / n < 1e-120
    delta[zero] = -1.0
    one_plus[zero] = 0.0
    gamma[zero] = 0.0

    small = (s < SMALL_S_SWITCH) & ~zero
    if np.any(small):
        w = s[small] ** 2 / n
        # signed terms t_j of the binomial series of 1 - (1+w)^-n; the
        # combinations below are exact rearrangements of the numerator and
        # denominator series, free of the leading-order cancellation
        t1 = n * w
        tj = t1.copy()
        sum_a = tj.copy()          # sum t_j            -> 1 - (1+w)^-n
        sum_n = tj / 2.0           # sum t_j / (j+1)
        sum_d2 = np.zeros_like(tj)  # sum_{j>=2} t_j
        for j in range(1, _FINITE_SERIES_TERMS):
            tj = -tj * ((n + j) * w / (j + 1.0))
            sum_a += tj
            sum_n += tj / (j + 2.0)
            sum_d2 += tj
        num = (1.0 - n) * w * sum_n
        den = sum_d2 + t1 * sum_a
        p_half = np.exp(-0.5 * n * np.log1p(w))
        delta[small] = p_half * num / den
        one_plus[small] = (den + p_half * num) / den
        gamma[small] = den / sum_a ** 1.5

    big = ~small & ~zero
    if np.any(big):
        w = s[big] ** 2 / n
        lp = np.log1p(w)
        p = np.exp(-n * lp)
        a = -np.expm1(-n * lp)
        num = (1.0 + w) * a - n * w
        den = a - n * w * p
        p_half = np.exp(-0.5 * n * lp)
        delta[big] = p_half * num / den
        one_plus[big] = (den + p_half * num) / den
        gamma[big] = den / a ** 1.5
    return delta, one_plus, gamma


def scaled_delta(n: int, s):
    """Delta_n evaluated at s / sqrt(n); values lie in [-1, 0]."""
    n = _check_degree(n)
    arr, scalar = _as_array(s)
    _check_nonnegative(arr)
    delta, _, _ = _finite_core(n, arr)
    return _ret(delta[0] if scalar else delta, scalar)


def scaled_gamma(n: int, s):
    """Gamma_n evaluated at s / sqrt(n); nonnegative, -> 1 as s grows."""
    n = _check_degree(n)
    arr, scalar = _as_array(s)
    _check_nonnegative(arr)
    _, _, gamma = _finite_core(n, arr)
    return _ret(gamma[0] if scalar else gamma, scalar)


def big_f(n: int, s):
    """F_n at s / sqrt(n): h(Delta_n)*Gamma_n - 1, in [-1, 0+] range."""
    n = _check_degree(n)
    arr, scalar = _as_array(s)
    _check_nonnegative(arr)
    delta, one_plus, gamma = _finite_core(n, arr)
    val = _h_from_one_plus(delta, one_plus) * gamma - 1.0
    return _ret(val[0] if scalar else val, scalar)


# ---------------------------------------------------------------------------
# tagged profile handle
# ---------------------------------------------------------------------------

_LIMIT_TAGS = frozenset({"f0", "f1", "g0", "g1"})
_FINITE_TAGS = frozenset({"bigF", "delta", "gamma"})


@dataclass(frozen=True)
class ProfileFunction:
    """A named scaled function; n is None for the n -> infinity profiles."""

    tag: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.tag in _LIMIT_TAGS:
            if self.n is not None:
                raise ValueError(f"profile {self.tag!r} exists only as the "
                                 f"n -> infinity limit; n must be None")
        elif self.tag in _FINITE_TAGS:
            if self.n is None:
                raise ValueError(f"profile {self.tag!r} requires a finite degree n")
            _check_degree(self.n)
        else:
            raise ValueError(f"unknown profile tag {self.tag!r}")

    def __call__(self, s):
        if self.tag in _LIMIT_TAGS:
            return limit_profiles(self.tag, s)
        fn = {"bigF": big_f, "delta": scaled_delta, "gamma": scaled_gamma}[self.tag]
        return fn(self.n, s)
