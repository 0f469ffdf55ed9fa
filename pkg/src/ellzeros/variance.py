"""Exact expectation and variance of the zero count, plus asymptotics.

The exact variance dispatches on the sign of alpha(a, b):

* positive: (1 + K_n(a,b)) E - L_n(a,b)
* zero (full line): (1 + K_n) sqrt(n)
* negative: (1 + K_n) E + (K_n - K_n(a,b)) (E - sqrt(n)) - L_n(a,b)

with E the exact expectation.  The asymptotic estimate picks one of the
three regimes of sqrt(n)*alpha (large, order one, small) and evaluates the
corresponding expansion truncated at the 1/n term, which is where the
closed-form coefficients stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence

from .intervals import AlphaParam, ExtendedInterval, alpha_of, _check_degree
from .quadrature import QuadResult, coefficients_cached, k_integral, l_integral

PI = math.pi

# regime thresholds on |alpha_n|: above the first the truncated infinite
# constants apply, below the second the polynomial expansions in alpha_n
ALPHA_LARGE_THRESHOLD = 10.0
ALPHA_SMALL_THRESHOLD = 0.5


@dataclass(frozen=True)
class ExpansionPlan:
    """Truncation schedules for the three expansion regimes.

    Schedules are the values the regime formulas prescribe; the applied
    order is capped at 1 because only the k <= 1 coefficients have closed
    forms.  Schedules that do not apply to the regime at hand are 0.
    """

    d_n: int = 0
    q_n: int = 0
    r_n: int = 0
    effective_order: int = 1


@dataclass(frozen=True)
class AsymptoticEstimate:
    """One regime's truncated expansion with a residual-order label.

    predicted_error is an order-of-magnitude indicator of the truncation
    residual (unit coefficient), not a rigorous bound.
    """

    value: float
    order_tag: str
    predicted_error: float
    plan: ExpansionPlan


@dataclass(frozen=True)
class VarianceReport:
    """Exact moments for one (n, interval) pair with quadrature provenance."""

    n: int
    interval: ExtendedInterval
    expectation: float
    variance_exact: float
    error_estimate: float
    case: str
    K_ab: Optional[QuadResult] = None
    L_ab: Optional[QuadResult] = None
    K_full: Optional[QuadResult] = None
    L_full: Optional[QuadResult] = None
    asymptotic: Optional[AsymptoticEstimate] = None


def expected_zeros(n: int, interval: ExtendedInterval) -> float:
    """Exact expected zero count: (sqrt(n)/pi) (arctan b - arctan a)."""
    n = _check_degree(n)
    return math.sqrt(n) / PI * (math.atan(interval.b) - math.atan(interval.a))


@lru_cache(maxsize=256)
def _k_full(n: int, tol: float) -> QuadResult:
    return k_integral(n, math.inf, tol)


def variance_exact(n: int, interval: ExtendedInterval,
                   tol: float = 1e-10) -> VarianceReport:
    """Exact variance of the zero count via the K/L integrals.

    Quadrature errors are propagated linearly: the attached error estimate
    is |E|*err(K) + err(L) for the positive case, with the extra
    |E - sqrt(n)|*(err(K_full) + err(K_ab)) term in the negative case.
    """
    n = _check_degree(n)
    ap = alpha_of(interval, n)
    expectation = expected_zeros(n, interval)
    root_n = math.sqrt(n)

    if ap.sign_case == "zero":
        k_full = _k_full(n, tol)
        variance = (1.0 + k_full.value) * root_n
        err = root_n * k_full.abs_error_estimate
        return VarianceReport(n, interval, expectation, variance, err,
                              ap.sign_case, K_full=k_full)

    upper = abs(ap.alpha_n)
    k_ab = k_integral(n, upper, tol)
    l_ab = l_integral(n, upper, tol)
    if ap.sign_case == "positive":
        variance = (1.0 + k_ab.value) * expectation - l_ab.value
        err = (abs(expectation) * k_ab.abs_error_estimate
               + l_ab.abs_error_estimate)
        return VarianceReport(n, interval, expectation, variance, err,
                              ap.sign_case, K_ab=k_ab, L_ab=l_ab)

    k_full = _k_full(n, tol)
    variance = ((1.0 + k_full.value) * expectation
                + (k_full.value - k_ab.value) * (expectation - root_n)
                - l_ab.value)
    err = (abs(expectation) * k_full.abs_error_estimate
           + l_ab.abs_error_estimate
           + abs(expectation - root_n) * (k_full.abs_error_estimate
                                          + k_ab.abs_error_estimate))
    return VarianceReport(n, interval, expectation, variance, err,
                          ap.sign_case, K_ab=k_ab, L_ab=l_ab, K_full=k_full)


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

def _schedules(n: int, alpha_n: float) -> ExpansionPlan:
    a = abs(alpha_n)
    if n < 2 or a == 0.0 or math.isinf(a):
        return ExpansionPlan()
    log_n = math.log(n)
    log_a = math.log(a)
    d_n = math.floor((a * a + 3.0 * log_a) / log_n)
    q_n = math.floor(0.5 - 5.0 * log_a / log_n)
    r_n = math.floor(-4.0 * log_a / log_n)
    return ExpansionPlan(d_n=d_n, q_n=q_n, r_n=r_n)


def variance_asymptotic(n: int, interval: ExtendedInterval,
                        tol: float = 1e-10) -> AsymptoticEstimate:
    """Regime-dispatched asymptotic variance, truncated at the 1/n term.

    Dispatch on alpha_n = sqrt(n)*alpha: >= 10 uses the infinite-limit
    constants, between 0.5 and 10 the c-truncated constants with
    c = |alpha_n|, and <= 0.5 the small-alpha polynomials.  The k <= 1 cap
    applies regardless of what the truncation schedules allow, so the
    residual away from the small-alpha regime is O(1/n^2) in relative
    terms rather than the schedule's own remainder.
    """
    n = _check_degree(n)
    ap = alpha_of(interval, n)
    an = ap.alpha_n
    expectation = expected_zeros(n, interval)
    root_n = math.sqrt(n)
    plan = _schedules(n, an)

    cs = coefficients_cached(tol)
    k0, k1 = cs.kappa0.value, cs.kappa1.value
    l0, l1 = cs.ell0.value, cs.ell1.value

    if ap.sign_case == "zero":
        value = (1.0 + k0 + k1 / n) * root_n
        plan = ExpansionPlan(effective_order=1)
        return AsymptoticEstimate(value, "full-line:k<=1",
                                  root_n / n ** 2, plan)

    a = abs(an)
    if a >= ALPHA_LARGE_THRESHOLD:
        value = (1.0 + k0 + k1 / n) * expectation - (l0 + l1 / n)
        tail = 0.0 if math.isinf(a) else a ** 4 * math.exp(-a * a)
        plan = ExpansionPlan(plan.d_n, plan.q_n, plan.r_n,
                             effective_order=min(max(plan.d_n, 0), 1))
        return AsymptoticEstimate(value, "alpha-large:k<=1",
                                  abs(expectation) / n ** 2 + tail, plan)

    if a > ALPHA_SMALL_THRESHOLD:
        ccs = coefficients_cached(tol, c=a)
        kc0, kc1 = ccs.kappa_c0.value, ccs.kappa_c1.value
        lc0, lc1 = ccs.ell_c0.value, ccs.ell_c1.value
        if an > 0:
            value = (1.0 + kc0 + kc1 / n) * expectation - (lc0 + lc1 / n)
            tag = "alpha-fixed-positive:k<=1"
        else:
            value = ((1.0 + k0 + k1 / n) * expectation
                     - ((k0 - kc0) + (k1 - kc1) / n)
                     * (root_n / PI) * math.atan(a / root_n)
                     - (lc0 + lc1 / n))
            tag = "alpha-fixed-negative:k<=1"
        plan = ExpansionPlan(plan.d_n, plan.q_n, plan.r_n, effective_order=1)
        return AsymptoticEstimate(value, tag, abs(expectation) / n ** 2, plan)

    if an > 0:
        value = (an / PI - an ** 2 / PI ** 2 + an ** 3 / (12.0 * PI)
                 - 5.0 * an ** 3 / (12.0 * PI * n)
                 + 2.0 * an ** 4 / (3.0 * PI ** 2 * n))
        plan = ExpansionPlan(plan.d_n, plan.q_n, plan.r_n, effective_order=1)
        return AsymptoticEstimate(value, "alpha-small-positive",
                                  a ** 5, plan)

    q_eff = min(max(plan.q_n, 0), 1)
    r_eff = min(max(plan.r_n, 0), 1)
    sum_q = 1.0 + k0 + (k1 / n if q_eff >= 1 else 0.0)
    sum_r = k0 + (k1 / n if r_eff >= 1 else 0.0)
    value = (sum_q * root_n
             + (2.0 / PI) * (an - an ** 3 / (3.0 * n)) * sum_r
             + an / PI - an ** 2 / PI ** 2 - an ** 3 / (12.0 * PI)
             - an ** 3 / (4.0 * PI * n)
             + 2.0 * an ** 4 / (3.0 * PI ** 2 * n))
    plan = ExpansionPlan(plan.d_n, plan.q_n, plan.r_n,
                         effective_order=min(q_eff, r_eff, 1))
    return AsymptoticEstimate(value, "alpha-small-negative",
                              a ** 5 + root_n / n ** 2, plan)


def variance_report(n: int, interval: ExtendedInterval,
                    tol: float = 1e-10) -> VarianceReport:
    """Exact report with the asymptotic estimate attached."""
    exact = variance_exact(n, interval, tol)
    asym = variance_asymptotic(n, interval, tol)
    return VarianceReport(exact.n, exact.interval, exact.expectation,
                          exact.variance_exact, exact.error_estimate,
                          exact.case, exact.K_ab, exact.L_ab,
                          exact.K_full, exact.L_full, asym)


# ---------------------------------------------------------------------------
# empirical convergence-order table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionErrorRow:
    n: int
    exact: float
    asymptotic: float
    abs_diff: float
    scaled_diff: float   # abs_diff * n^(3/2)


def expansion_error_report(n_list: Sequence[int], interval: ExtendedInterval,
                           tol: float = 1e-10) -> List[ExpansionErrorRow]:
    """Rows (n, exact, asymptotic, |diff|, |diff|*n^1.5) for the interval.

    On the full line the k <= 1 truncation leaves an O(n^-3/2) residual,
    so the last column should be roughly constant along an increasing
    n_list.
    """
    rows = []
    for n in n_list:
        exact = variance_exact(n, interval, tol).variance_exact
        asym = variance_asymptotic(n, interval, tol).value
        diff = abs(exact - asym)
        rows.append(ExpansionErrorRow(n, exact, asym, diff, diff * n ** 1.5))
    return rows
