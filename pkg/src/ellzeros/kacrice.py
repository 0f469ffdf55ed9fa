"""Generic two-point Kac-Rice engine over Gaussian covariance kernels.

Given a unit-variance kernel r(x, y) with its mixed partials, the
one-point zero intensity is rho1(x) = sqrt(r11(x,x)) / pi and the
two-point intensity is

    rho2(x, y) = (sqrt(1 - rho^2) + rho * arcsin(rho)) * sigma
                 / (pi^2 * sqrt(1 - r^2)),

where rho and sigma are the conditional correlation and scale of the
derivatives given zeros at x and y.  Integrating rho2 - rho1*rho1 over
the square plus the expectation reproduces the variance of the zero
count, which makes this module an independent cross-check of the
closed-form variance engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .intervals import ExtendedInterval, _check_degree
from .quadrature import QuadResult, integrate_adaptive

PI2 = math.pi ** 2

# half-width of the band around the diagonal inside which the 2D integrand
# is replaced by its band-edge value (it extends continuously there)
DIAGONAL_BAND = 1e-4


@dataclass(frozen=True)
class GaussianKernel:
    """Covariance data of a normalized C^1 Gaussian process.

    All four callables must be vectorized (accept numpy arrays) and
    satisfy r(x, x) = 1, r(x, y) = r(y, x), r10(x, y) = r01(y, x) and
    |r| <= 1 on the declared domain.
    """

    r: Callable
    r10: Callable
    r01: Callable
    r11: Callable


@dataclass(frozen=True)
class PairIntensity:
    """One- and two-point intensities at a pair of points."""

    rho1_x: float
    rho1_y: float
    rho2: float
    rho_corr: float
    sigma: float

    def __post_init__(self):
        if self.rho2 < 0 or abs(self.rho_corr) > 1.0 + 1e-12:
            raise ValueError("invalid pair intensity")


# ---------------------------------------------------------------------------
# the elliptic ensemble kernel
# ---------------------------------------------------------------------------

def elliptic_kernel(n: int) -> GaussianKernel:
    """Normalized elliptic correlator r = (1+xy)^n / ((1+x^2)(1+y^2))^(n/2).

    Powers are taken in log space so any degree is safe, and the base
    q = (1+xy)/sqrt((1+x^2)(1+y^2)) is shifted as q = 1 + e with
    e = -(x-y)^2 / ((1+xy+sqrt(D))sqrt(D)) computed cancellation-free,
    which keeps 1 - r accurate near the diagonal.
    """
    n = _check_degree(n)

    def _parts(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx2 = 1.0 + x * x
        dy2 = 1.0 + y * y
        dprod = dx2 * dy2
        root_d = np.sqrt(dprod)
        c = 1.0 + x * y
        e = -((x - y) ** 2) / ((c + root_d) * root_d)
        q = c / root_d
        return q, e, c, dx2, dy2, dprod

    def _qpow(q, e, m: int):
        # q^m for integer m >= 0 with q in (-1, 1]; exact sign handling,
        # log1p near q = 1, and q = 0 mapped to 0
        if m == 0:
            return np.ones_like(q)
        out = np.zeros_like(q)
        pos = q > 0
        if np.any(pos):
            out[pos] = np.exp(m * np.log1p(e[pos]))
        neg = q < 0
        if np.any(neg):
            sign = -1.0 if m % 2 else 1.0
            out[neg] = sign * np.exp(m * np.log(-q[neg]))
        return out

    def r(x, y):
        q, e, *_ = _parts(x, y)
        return _qpow(q, e, n)

    def r10(x, y):
        q, e, c, dx2, dy2, _ = _parts(x, y)
        return n * _qpow(q, e, n - 1) * (np.asarray(y, float) - np.asarray(x, float)) \
            / (dx2 ** 1.5 * np.sqrt(dy2))

    def r01(x, y):
        q, e, c, dx2, dy2, _ = _parts(x, y)
        return n * _qpow(q, e, n - 1) * (np.asarray(x, float) - np.asarray(y, float)) \
            / (dy2 ** 1.5 * np.sqrt(dx2))

    def r11(x, y):
        q, e, c, dx2, dy2, dprod = _parts(x, y)
        if n == 1:
            return c / dprod ** 1.5
        xy_gap = (np.asarray(x, float) - np.asarray(y, float)) ** 2
        return n * _qpow(q, e, n - 2) * (c * c - (n - 1) * xy_gap) / dprod ** 2

    return GaussianKernel(r=r, r10=r10, r01=r01, r11=r11)


# ---------------------------------------------------------------------------
# intensities
# ---------------------------------------------------------------------------

def intensity1(kernel: GaussianKernel, x):
    """One-point zero intensity sqrt(r11(x, x)) / pi."""
    arr = np.asarray(x, dtype=float)
    r11 = np.asarray(kernel.r11(arr, arr), dtype=float)
    if np.any(r11 < 0):
        raise ValueError("invalid kernel: r11(x, x) < 0")
    val = np.sqrt(r11) / math.pi
    return float(val) if np.ndim(x) == 0 else val


def _pair_fields(kernel: GaussianKernel, x, y):
    """rho1(x), rho1(y), rho2, rho, sigma for arrays x, y (off-diagonal)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.asarray(kernel.r(x, y), dtype=float)
    if np.any(np.abs(r) >= 1.0):
        raise ValueError("degenerate process: |r(x, y)| = 1 off the diagonal")
    omr2 = (1.0 - r) * (1.0 + r)
    r10 = np.asarray(kernel.r10(x, y), dtype=float)
    r01 = np.asarray(kernel.r01(x, y), dtype=float)
    r11xy = np.asarray(kernel.r11(x, y), dtype=float)
    r11xx = np.asarray(kernel.r11(x, x), dtype=float)
    r11yy = np.asarray(kernel.r11(y, y), dtype=float)

    vx = r11xx - r10 * r10 / omr2
    vy = r11yy - r01 * r01 / omr2
    # conditional variances are nonnegative; clip the rounding dust
    vx = np.maximum(vx, 0.0)
    vy = np.maximum(vy, 0.0)
    sigma = np.sqrt(vx * vy)
    num = r11xy + r * r10 * r01 / omr2
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = np.where(sigma > 0, num / np.where(sigma > 0, sigma, 1.0), 0.0)
    rho = np.clip(rho, -1.0, 1.0)
    h = np.sqrt((1.0 - rho) * (1.0 + rho)) + rho * np.arcsin(rho)
    rho2 = h * sigma / (PI2 * np.sqrt(omr2))
    rho1x = np.sqrt(r11xx) / math.pi
    rho1y = np.sqrt(r11yy) / math.pi
    return rho1x, rho1y, rho2, rho, sigma


def intensity2(kernel: GaussianKernel, x: float, y: float) -> PairIntensity:
    """Two-point zero intensity and the conditional correlation at (x, y)."""
    if x == y:
        raise ValueError("intensity2 requires x != y; the diagonal is "
                         "handled by continuous extension in the integrals")
    rho1x, rho1y, rho2, rho, sigma = _pair_fields(
        kernel, np.asarray([x], float), np.asarray([y], float))
    return PairIntensity(float(rho1x[0]), float(rho1y[0]), float(rho2[0]),
                         float(rho[0]), float(sigma[0]))


# ---------------------------------------------------------------------------
# variance by 2D quadrature
# ---------------------------------------------------------------------------

def _geometric_points(lo: float, hi: float):
    # seed breakpoints on wide ranges so decaying integrands are not
    # accepted prematurely from one giant panel
    span = hi - lo
    if span <= 16.0:
        return None
    pts = []
    step = 1.0
    while step < span:
        for p in (lo + step, hi - step):
            if lo < p < hi:
                pts.append(p)
        step *= 2.0
    return pts


def variance_via_kacrice(kernel: GaussianKernel, interval: ExtendedInterval,
                         tol: float = 1e-6,
                         band: float = DIAGONAL_BAND) -> QuadResult:
    """Zero-count variance over a finite interval by 2D adaptive quadrature.

    Integrates rho2 - rho1*rho1 over the two symmetric triangles (computed
    once and doubled) plus the one-point intensity.  Within |x - y| < band
    the integrand is evaluated at the band edge; the induced error is
    estimated from the near-diagonal slope and added to the returned
    error estimate.
    """
    if not interval.is_finite:
        raise ValueError("variance_via_kacrice requires a finite interval")
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = interval.a, interval.b
    span = b - a
    evals = 0

    def corr_f(x: float, ys):
        ys = np.asarray(ys, dtype=float)
        xs = np.full_like(ys, x)
        rho1x, rho1y, rho2, _, _ = _pair_fields(kernel, xs, ys)
        return rho2 - rho1x * rho1y

    def band_edge(x: float) -> float:
        # the base band width is widened (per x) until 1 - r^2 clears the
        # conditioning floor of the conditional-variance cancellation;
        # otherwise near-diagonal values are rounding noise wherever the
        # kernel's correlation scale is much longer than the base band
        eta = band
        lim = b - x
        while eta < lim:
            r = float(np.asarray(kernel.r(np.asarray([x]),
                                          np.asarray([x + eta])))[0])
            if (1.0 - r) * (1.0 + r) > 1e-8:
                break
            eta *= 2.0
        return min(eta, lim)

    expect = integrate_adaptive(lambda xs: intensity1(kernel, xs), a, b,
                                tol / 4.0, points=_geometric_points(a, b))
    evals += expect.evaluations

    # inner tolerances follow the local zero density, so the integrated
    # inner error stays below tol/4 on intervals of any length while the
    # local relative difficulty stays roughly uniform
    density_norm = 4.0 * (abs(expect.value) + 1.0)
    outer_tol = tol / 4.0

    def inner(x: float) -> float:
        nonlocal evals
        eta = band_edge(x)
        if eta <= 0.0 or x >= b:
            return 0.0
        edge = float(corr_f(x, [min(x + eta, b)])[0])
        evals += 1
        val = eta * edge
        lo = x + eta
        if lo < b:
            inner_tol = tol * (intensity1(kernel, x) + 1.0 / span) / density_norm
            res = integrate_adaptive(lambda ys: corr_f(x, ys), lo, b,
                                     inner_tol,
                                     points=_geometric_points(lo, b))
            evals += res.evaluations
            val += res.value
        return val

    def inner_vec(xs):
        return np.array([inner(float(x)) for x in np.atleast_1d(xs)])

    outer = integrate_adaptive(inner_vec, a, b, outer_tol,
                               points=_geometric_points(a, b))

    # band-extension error: the band replaces the integrand by its edge
    # value over a width eta(x), so the error per x is about
    # slope(x) * eta(x)^2 / 2; probe the slope at a spread of x values
    probe = np.linspace(a, b, 33)[:-1] if span > 8.0 * band else \
        np.linspace(a, b, 9)[:-1]
    worst = 0.0
    for x in probe:
        x = float(x)
        eta = band_edge(x)
        if x + 2.0 * eta >= b or eta <= 0.0:
            continue
        f_at = float(corr_f(x, [x + eta])[0])
        f_out = float(corr_f(x, [x + 2.0 * eta])[0])
        worst = max(worst, abs(f_out - f_at) * eta)
    evals += 2 * len(probe)
    band_err = 2.0 * span * worst

    value = 2.0 * outer.value + expect.value
    err = 2.0 * outer.abs_error_estimate + expect.abs_error_estimate + band_err
    return QuadResult(value, err, evals + outer.evaluations)
