import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbf_certify.errors import DomainError, InvalidArgumentError, RangeError
from rbf_certify.numerics import (
    LogScalar,
    add,
    cmp,
    div,
    from_real,
    log_factorial,
    log_gamma,
    mul,
    neg,
    pow_,
    to_real,
)

finite_nonzero = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda x: abs(x) >= 1e-300)
moderate = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False).filter(lambda x: abs(x) > 1e-100)


@pytest.mark.parametrize("x, sign, logmag", [
    (1.0, 1, 0.0),
    (-math.e, -1, 1.0),
    (2.0, 1, math.log(2.0)),
])
def test_from_real(x, sign, logmag):
    a = from_real(x)
    assert a.sign == sign
    assert a.logmag == pytest.approx(logmag, abs=1e-15)


def test_from_real_zero():
    assert from_real(0.0).sign == 0
    assert from_real(0.0).is_zero


@pytest.mark.parametrize("x", [math.nan, math.inf, -math.inf])
def test_from_real_rejects_non_finite(x):
    with pytest.raises(InvalidArgumentError):
        from_real(x)


def test_from_real_huge_integer():
    a = from_real(10 ** 400)
    assert a.sign == 1
    assert a.logmag == pytest.approx(400 * math.log(10.0), rel=1e-15)


def test_mul_adds_logs():
    assert mul(LogScalar(1, 2.0), LogScalar(1, 3.0)) == LogScalar(1, 5.0)


def test_div_and_neg():
    q = div(from_real(-6.0), LogScalar(1, 1e4))
    assert q == LogScalar(-1, math.log(6.0) - 1e4)
    assert neg(q).sign == 1
    assert div(LogScalar.zero(), from_real(2.0)).is_zero
    assert neg(LogScalar.zero()).is_zero
    with pytest.raises(DomainError):
        div(from_real(1.0), LogScalar.zero())


def test_pow_integer():
    a = pow_(LogScalar(1, math.log(2.0)), 10)
    assert a.logmag == pytest.approx(10 * math.log(2.0))
    assert to_real(a) == pytest.approx(1024.0, rel=1e-14)


def test_pow_negative_base():
    assert pow_(from_real(-2.0), 3).sign == -1
    assert pow_(from_real(-2.0), 2).sign == 1
    with pytest.raises(DomainError):
        pow_(from_real(-2.0), 0.5)


def test_pow_zero_base():
    assert pow_(LogScalar.zero(), 2).is_zero
    assert pow_(LogScalar.zero(), 0) == LogScalar.one()
    with pytest.raises(DomainError):
        pow_(LogScalar.zero(), -1)


def test_exact_cancellation():
    assert add(LogScalar(1, 0.0), LogScalar(-1, 0.0)).sign == 0


def test_add_same_sign():
    s = add(from_real(3.0), from_real(4.0))
    assert to_real(s) == pytest.approx(7.0, rel=1e-15)


def test_add_opposite_sign():
    s = add(from_real(3.0), from_real(-4.0))
    assert s.sign == -1
    assert to_real(s) == pytest.approx(-1.0, rel=1e-14)


def test_operators():
    a = from_real(6.0)
    b = from_real(3.0)
    assert to_real(a / b) == pytest.approx(2.0)
    assert to_real(a - b) == pytest.approx(3.0)
    assert to_real(-a) == pytest.approx(-6.0)
    assert to_real(a * 2) == pytest.approx(12.0)
    assert b < a
    assert a > 5


def test_values_beyond_float_range_compare():
    big = LogScalar.from_log(2000.0)
    bigger = LogScalar.from_log(2001.0)
    assert big < bigger
    assert to_real(big) == math.inf
    assert to_real(LogScalar.from_log(-2000.0)) == 0.0


def test_render():
    assert LogScalar.from_log(math.log(1.1227e5)).render(5) == "1.1227e+05"
    assert LogScalar.zero().render() == "0"
    assert from_real(-0.5).render(3) == "-5e-01"
    assert LogScalar.from_log(2000.0).render(4) == "3.881e+868"
    assert from_real(3e-7).render(2) == "3e-07"


@given(finite_nonzero)
def test_round_trip(x):
    # ln|x| carries half an ulp of its own magnitude into the exponent
    tolerance = 1e-14 + 4e-16 * abs(math.log(abs(x)))
    assert abs(to_real(from_real(x)) - x) <= tolerance * abs(x)


@given(moderate, moderate)
def test_mul_homomorphism(x, y):
    product = x * y
    if product == 0.0 or not math.isfinite(product) or abs(product) < 1e-300:
        return
    assert to_real(mul(from_real(x), from_real(y))) == pytest.approx(product, rel=1e-13)


@given(finite_nonzero, finite_nonzero)
def test_cmp_consistent_with_reals(x, y):
    expected = (x > y) - (x < y)
    a, b = from_real(x), from_real(y)
    if expected == 0 or abs(x - y) > 1e-12 * max(abs(x), abs(y)):
        assert cmp(a, b) == expected


@pytest.mark.parametrize("k, expected", [
    (0, 0.0),
    (5, math.log(120.0)),
    (170, 706.5730622457874),
])
def test_log_factorial(k, expected):
    assert log_factorial(k) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("k", [0, 1, 10, 255, 256, 1000, 10_000])
def test_log_factorial_matches_log_gamma(k):
    assert log_factorial(k) == pytest.approx(log_gamma(k + 1), abs=1e-12 * max(1.0, log_gamma(k + 1)))


def test_log_factorial_rejects_negative():
    with pytest.raises(RangeError):
        log_factorial(-1)


@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (0.5, 0.5 * math.log(math.pi)),
    (6.0, math.log(120.0)),
])
def test_log_gamma(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)
