import math

import pytest
from hypothesis import given, strategies as st

from wfstkit.errors import DivergenceError, FormatError
from wfstkit.semiring import LOG, PROBABILITY, TROPICAL, get_semiring

costs = st.floats(min_value=-50, max_value=50, allow_nan=False)
probs = st.floats(min_value=0, max_value=10, allow_nan=False)


def test_tropical_plus_and_times():
    assert TROPICAL.plus(3.0, 5.0) == 3.0
    assert TROPICAL.plus(2.5, TROPICAL.zero) == 2.5
    assert TROPICAL.times(3.0, 5.0) == 8.0
    assert TROPICAL.times(4.0, TROPICAL.one) == 4.0


def test_log_plus_of_two_ones():
    expected = -math.log(math.exp(0.0) + math.exp(0.0))
    assert LOG.plus(0.0, 0.0) == pytest.approx(expected, rel=1e-12)
    assert LOG.plus(0.0, 0.0) == pytest.approx(-0.693147, abs=1e-6)


def test_probability_times_and_divide():
    assert PROBABILITY.times(0.5, 0.4) == pytest.approx(0.2)
    assert PROBABILITY.divide(0.2, 0.5) == pytest.approx(0.4)


def test_divide():
    assert TROPICAL.divide(5.0, 2.0) == 3.0
    for sr, a in ((TROPICAL, 1.5), (LOG, 1.5), (PROBABILITY, 0.3)):
        assert sr.divide(a, sr.one) == a
        with pytest.raises(ZeroDivisionError):
            sr.divide(a, sr.zero)


def test_zero_annihilates_without_nan():
    for sr in (TROPICAL, LOG):
        assert sr.times(sr.zero, 3.0) == sr.zero
        assert sr.times(-2.0, sr.zero) == sr.zero
        assert sr.divide(sr.zero, 2.0) == sr.zero
    assert PROBABILITY.times(0.0, 7.0) == 0.0


@given(costs)
def test_tropical_plus_idempotent(a):
    assert TROPICAL.plus(a, a) == a


@given(costs, costs)
def test_times_divide_roundtrip(a, b):
    for sr in (TROPICAL, LOG):
        assert sr.approx_equal(sr.times(b, sr.divide(a, b)), a, abs_tol=1e-9)


@given(probs, st.floats(min_value=1e-3, max_value=10))
def test_probability_divide_roundtrip(a, b):
    assert PROBABILITY.approx_equal(PROBABILITY.times(b, PROBABILITY.divide(a, b)), a)


@given(costs, costs, costs)
def test_log_distributes(a, b, c):
    left = LOG.times(a, LOG.plus(b, c))
    right = LOG.plus(LOG.times(a, b), LOG.times(a, c))
    assert LOG.approx_equal(left, right)


def test_star():
    assert TROPICAL.star(2.0) == 0.0
    with pytest.raises(DivergenceError):
        TROPICAL.star(-0.1)
    assert PROBABILITY.star(0.5) == pytest.approx(2.0)
    with pytest.raises(DivergenceError):
        PROBABILITY.star(1.0)
    assert LOG.star(math.log(2)) == pytest.approx(-math.log(2))
    with pytest.raises(DivergenceError):
        LOG.star(0.0)


def test_weight_text():
    assert TROPICAL.format_weight(TROPICAL.zero) == "inf"
    assert TROPICAL.parse_weight("inf") == math.inf
    assert TROPICAL.format_weight(1 / 3) == "0.333333333"
    with pytest.raises(FormatError):
        TROPICAL.parse_weight("nan")
    with pytest.raises(FormatError):
        PROBABILITY.parse_weight("-0.5")
    with pytest.raises(FormatError):
        TROPICAL.parse_weight("-inf")


def test_lookup_by_name():
    assert get_semiring("prob") is PROBABILITY
    with pytest.raises(ValueError):
        get_semiring("boolean")
