import math

import pytest
from hypothesis import given, strategies as st

from ellzeros import ExtendedInterval, FULL_LINE, alpha_of, alpha_point

INF = math.inf


def test_rejects_reversed_and_degenerate():
    with pytest.raises(ValueError):
        ExtendedInterval(1.0, 1.0)
    with pytest.raises(ValueError):
        ExtendedInterval(2.0, -1.0)
    with pytest.raises(ValueError):
        ExtendedInterval(math.nan, 1.0)
    with pytest.raises(ValueError):
        ExtendedInterval(INF, INF)


def test_alpha_finite_examples():
    ap = alpha_of(ExtendedInterval(0, 1), 1)
    assert ap.alpha == 1.0 and ap.alpha_n == 1.0
    assert ap.sign_case == "positive"

    ap = alpha_of(ExtendedInterval(-2, 1), 4)
    assert ap.alpha == -3.0 and ap.alpha_n == -6.0
    assert ap.sign_case == "negative"


def test_alpha_full_line_is_the_only_zero_case():
    ap = alpha_of(FULL_LINE, 9)
    assert ap.alpha == 0.0 and ap.alpha_n == 0.0
    assert ap.sign_case == "zero"


def test_alpha_infinite_endpoint_limits():
    # continuity in b: alpha(a, b) -> 1/a as b -> inf
    assert alpha_of(ExtendedInterval(2, INF), 1).alpha == 0.5
    assert alpha_of(ExtendedInterval(0, INF), 1).alpha == INF
    assert alpha_of(ExtendedInterval(-2, INF), 1).alpha == -0.5
    assert alpha_of(ExtendedInterval(-2, INF), 1).sign_case == "negative"
    # and symmetrically in a
    assert alpha_of(ExtendedInterval(-INF, -2), 1).alpha == 0.5
    assert alpha_of(ExtendedInterval(-INF, 0), 1).alpha == INF
    assert alpha_of(ExtendedInterval(-INF, 2), 1).alpha == -0.5


def test_alpha_degenerate_product_maps_to_positive_infinity():
    # 1 + a*b = 0: both adjacent cases give the same variance there
    ap = alpha_of(ExtendedInterval(-1, 1), 3)
    assert ap.alpha == INF and ap.sign_case == "positive"


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_negative_case_implies_product_below_minus_one(a, b):
    if not a < b:
        a, b = min(a, b), max(a, b)
    if a == b:
        return
    ap = alpha_of(ExtendedInterval(a, b), 5)
    if ap.sign_case == "negative":
        assert a * b < -1


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_alpha_point_antisymmetric(x, y):
    if 1 + x * y == 0:
        return
    assert alpha_point(x, y) == -alpha_point(y, x)


def test_degree_validation():
    with pytest.raises(ValueError):
        alpha_of(FULL_LINE, 0)
    with pytest.raises(ValueError):
        alpha_of(FULL_LINE, -3)
