import math

import pytest
from hypothesis import given, settings, strategies as st

from ellzeros import (ExtendedInterval, FULL_LINE, expansion_error_report,
                      expected_zeros, variance_asymptotic, variance_exact,
                      variance_report)

INF = math.inf


def test_expectation_examples():
    assert expected_zeros(100, FULL_LINE) == pytest.approx(10.0, abs=1e-14)
    assert expected_zeros(4, ExtendedInterval(0, 1)) == pytest.approx(0.5, abs=1e-15)
    assert expected_zeros(1, ExtendedInterval(0, INF)) == pytest.approx(0.5, abs=1e-15)


@given(st.integers(1, 10 ** 6),
       st.floats(-100, 100), st.floats(-100, 100), st.floats(-100, 100))
def test_expectation_additive_in_the_interval(n, a, b, c):
    a, b, c = sorted((a, b, c))
    if a == b or b == c:
        return
    whole = expected_zeros(n, ExtendedInterval(a, c))
    parts = (expected_zeros(n, ExtendedInterval(a, b))
             + expected_zeros(n, ExtendedInterval(b, c)))
    assert whole == pytest.approx(parts, rel=1e-12, abs=1e-12)


def test_degree_one_closed_forms():
    # a linear polynomial has exactly one real zero: Var over R is 0 and
    # any half line is a Bernoulli count
    assert variance_exact(1, FULL_LINE).variance_exact == pytest.approx(0.0, abs=1e-12)
    assert variance_exact(1, ExtendedInterval(0, INF)).variance_exact == \
        pytest.approx(0.25, abs=1e-10)
    # P(zero > 1) = 1/4 for the Cauchy-distributed root
    assert variance_exact(1, ExtendedInterval(1, INF)).variance_exact == \
        pytest.approx(3 / 16, abs=1e-10)
    # negative-alpha case via the infinite endpoint: P(zero > -1) = 3/4
    rep = variance_exact(1, ExtendedInterval(-1, INF))
    assert rep.case == "negative"
    assert rep.variance_exact == pytest.approx(3 / 16, abs=1e-10)


def test_full_line_value():
    rep = variance_exact(10 ** 4, FULL_LINE)
    assert rep.case == "zero"
    assert rep.expectation == 100.0
    # (1 + kappa0) * 100 to within the k >= 1 corrections
    assert rep.variance_exact == pytest.approx(0.5717310486 * 100, rel=2e-3)
    assert rep.variance_exact == pytest.approx(57.17158288, abs=1e-6)


def test_variance_nonnegative_and_positive_on_full_line():
    for n in (2, 3, 10, 50):
        rep = variance_exact(n, FULL_LINE)
        assert rep.variance_exact > 0
    for n, iv in ((2, ExtendedInterval(0, 1)), (7, ExtendedInterval(-2, 1))):
        rep = variance_exact(n, iv)
        assert rep.variance_exact >= -rep.error_estimate


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.floats(-20, 20), st.floats(-20, 20))
def test_symmetry_under_reflection(n, a, b):
    if not a < b:
        a, b = min(a, b), max(a, b)
    if a == b:
        return
    left = variance_exact(n, ExtendedInterval(a, b), 1e-9)
    right = variance_exact(n, ExtendedInterval(-b, -a), 1e-9)
    assert left.variance_exact == pytest.approx(right.variance_exact,
                                                rel=1e-11, abs=1e-11)


def test_case_dispatch_covers_all_three():
    assert variance_exact(5, ExtendedInterval(0, 1)).case == "positive"
    assert variance_exact(5, FULL_LINE).case == "zero"
    assert variance_exact(5, ExtendedInterval(-2, 1)).case == "negative"


def test_error_estimate_propagates_tolerance():
    loose = variance_exact(50, ExtendedInterval(-2, 1), 1e-6)
    tight = variance_exact(50, ExtendedInterval(-2, 1), 1e-12)
    assert tight.error_estimate < 1e-9
    assert loose.variance_exact == pytest.approx(tight.variance_exact, abs=1e-5)


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

def test_full_line_asymptotic_value():
    est = variance_asymptotic(10 ** 4, FULL_LINE)
    # (1 + kappa0 + kappa1/n) * sqrt(n), computed from the table constants
    assert est.value == pytest.approx(57.171582831526, abs=1e-9)
    assert est.order_tag == "full-line:k<=1"
    assert est.plan.effective_order == 1


def test_small_alpha_positive_polynomial():
    # alpha_n = 0.1 at n = 10^6: leading polynomial terms dominate
    n = 10 ** 6
    iv = ExtendedInterval(0, 0.1 / math.sqrt(n))
    est = variance_asymptotic(n, iv)
    assert est.order_tag == "alpha-small-positive"
    expect = (0.1 / math.pi - 0.01 / math.pi ** 2 + 0.001 / (12 * math.pi)
              - 5e-3 / (12 * math.pi * n) + 2e-4 / (3 * math.pi ** 2 * n))
    assert est.value == pytest.approx(expect, rel=1e-13)
    assert est.value == pytest.approx(0.030844, abs=5e-7)
    exact = variance_exact(n, iv, 1e-13).variance_exact
    assert est.value == pytest.approx(exact, abs=5e-7)


def test_fixed_alpha_branch_agrees_with_exact():
    # alpha_n = c = 1: truncation error is O(1/n^2) relative to E
    diffs = []
    for n in (100, 1000, 10000):
        iv = ExtendedInterval(0, 1.0 / math.sqrt(n))
        exact = variance_exact(n, iv, 1e-12).variance_exact
        est = variance_asymptotic(n, iv, 1e-12)
        assert est.order_tag == "alpha-fixed-positive:k<=1"
        diffs.append(abs(exact - est.value) * n * n)
    # scaled residuals stay bounded and of one magnitude
    assert max(diffs) < 3 * min(diffs) + 1e-12


def test_fixed_alpha_negative_branch():
    n = 400
    # alpha_n = -c with c = 2: a, b with 1 + a b < 0 and sqrt(n)|alpha| = 2
    c = 2.0
    alpha = -c / math.sqrt(n)
    # pick a = -t, b = t with alpha(a,b) = 2t/(1-t^2) = alpha < 0 needs
    # 1 - t^2 < 0: t > 1
    t = None
    # solve 2t/(1-t^2) = alpha for t > 1
    disc = math.sqrt(1 + alpha * alpha)
    t = (-1 - disc) / alpha
    iv = ExtendedInterval(-t, t)
    est = variance_asymptotic(n, iv, 1e-11)
    assert est.order_tag == "alpha-fixed-negative:k<=1"
    exact = variance_exact(n, iv, 1e-11).variance_exact
    assert est.value == pytest.approx(exact, rel=2e-4)


def test_small_alpha_negative_branch_close_to_full_line():
    n = 10 ** 4
    c = 0.2
    alpha = -c / math.sqrt(n)
    disc = math.sqrt(1 + alpha * alpha)
    t = (-1 - disc) / alpha
    iv = ExtendedInterval(-t, t)
    est = variance_asymptotic(n, iv, 1e-11)
    assert est.order_tag == "alpha-small-negative"
    exact = variance_exact(n, iv, 1e-11).variance_exact
    assert est.value == pytest.approx(exact, abs=5e-5)


def test_large_alpha_branch():
    n = 10 ** 4
    # alpha(0, 1) = 1, so alpha_n = 100: deep in the truncated-constants
    # regime with an exponentially small regime remainder
    iv = ExtendedInterval(0.0, 1.0)
    est = variance_asymptotic(n, iv, 1e-10)
    assert est.order_tag == "alpha-large:k<=1"
    exact = variance_exact(n, iv, 1e-10).variance_exact
    assert est.value == pytest.approx(exact, rel=1e-6)
    assert est.plan.d_n > 1
    # negative alpha of large magnitude uses the same truncation
    iv = ExtendedInterval(-2.0, 1.0)   # alpha = -3, alpha_n = -300
    est = variance_asymptotic(n, iv, 1e-10)
    assert est.order_tag == "alpha-large:k<=1"
    exact = variance_exact(n, iv, 1e-10).variance_exact
    assert est.value == pytest.approx(exact, rel=1e-6)


def test_expansion_error_report_shapes():
    rows = expansion_error_report([100, 400], FULL_LINE)
    assert [r.n for r in rows] == [100, 400]
    for row in rows:
        assert row.abs_diff == abs(row.exact - row.asymptotic)
        assert row.scaled_diff == pytest.approx(row.abs_diff * row.n ** 1.5)
    assert expansion_error_report([], FULL_LINE) == []
    single = expansion_error_report([100], FULL_LINE)
    assert len(single) == 1


def test_report_attaches_asymptotic():
    rep = variance_report(100, FULL_LINE)
    assert rep.asymptotic is not None
    assert rep.asymptotic.value == pytest.approx(rep.variance_exact, rel=1e-4)
