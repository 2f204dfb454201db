import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbf_certify import moments
from rbf_certify.errors import DomainError, InvalidArgumentError, OverflowGuardError, RangeError


@pytest.mark.parametrize("n, k, expected", [
    (1, 2, 4 * math.pi),
    (2, 2, 16 * math.pi ** 2),
    (1, 0, 2 * math.pi),
    (2, 0, 4 * math.pi ** 2),
])
def test_exact_moment_spot_values(n, k, expected):
    assert moments.exact_moment(n, k, 1.0).to_real() == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_unit_ball_volume(n, expected):
    assert moments.unit_ball_volume(n) == pytest.approx(expected, rel=1e-14)


def test_exact_moment_matches_mpmath():
    n, k, beta = 3, 10, 0.5
    with mpmath.workdps(40):
        alpha = mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2 + 1)
        radial = mpmath.quad(lambda r: r ** (k + n - 1) * mpmath.exp(-r * r / (4 * beta)), [0, mpmath.inf])
        expected = (mpmath.pi / beta) ** (mpmath.mpf(n) / 2) * n * alpha * radial
    assert moments.exact_moment(n, k, beta).to_real() == pytest.approx(float(expected), rel=1e-12)


@given(
    n=st.integers(min_value=1, max_value=8),
    k=st.integers(min_value=0, max_value=60),
    beta=st.floats(min_value=0.01, max_value=100.0),
)
def test_exact_moment_beta_scaling(n, k, beta):
    scaled = moments.exact_moment(n, k, beta).logmag
    unit = moments.exact_moment(n, k, 1.0).logmag
    assert scaled - unit == pytest.approx(0.5 * k * math.log(beta), abs=1e-10 * max(1.0, abs(scaled)))


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("k", [0, 2, 4, 6])
def test_odd_moment_product_agrees(n, k):
    chain = moments.odd_moment_product(n, k, 1.0).logmag
    assert chain == pytest.approx(moments.exact_moment(n, k, 1.0).logmag, abs=1e-12)


def test_odd_moment_product_rejects_even_n():
    with pytest.raises(InvalidArgumentError):
        moments.odd_moment_product(2, 2, 1.0)


@pytest.mark.parametrize("n, k, expected", [(1, 2, 53.62), (2, 2, 252.2)])
def test_lemma5_bound_values(n, k, expected):
    assert moments.lemma5_bound(n, k, 1.0).to_real() == pytest.approx(expected, rel=1e-3)


def test_lemma5_bound_errors():
    with pytest.raises(InvalidArgumentError):
        moments.lemma5_bound(1, 3, 1.0)
    with pytest.raises(RangeError):
        moments.lemma5_bound(1, 0, 1.0)
    with pytest.raises(DomainError):
        moments.lemma5_bound(1, 2, 0.0)
    with pytest.raises(RangeError):
        moments.lemma5_bound(0, 2, 1.0)


@pytest.mark.parametrize("n, k", [(2, 6), (4, 4), (6, 2)])
@pytest.mark.parametrize("beta", [0.25, 1.0, 4.0])
def test_lemma5_fails_where_the_factorial_bound_fails(n, k, beta):
    assert not moments.moment_report(n, k, beta, with_quadrature=False).holds


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_lemma5_holds_elsewhere(n):
    for k in range(2, 41, 2):
        if n % 2 == 0 and k + n == 8:
            continue
        assert moments.moment_report(n, k, 1.0, with_quadrature=False).holds, (n, k)


@pytest.mark.parametrize("n, k, beta", [(1, 0, 1.0), (1, 2, 1.0), (2, 4, 0.25), (3, 8, 4.0), (6, 20, 2.0)])
def test_quadrature_oracle(n, k, beta):
    report = moments.moment_report(n, k, beta)
    assert report.quadrature is not None
    assert report.quadrature_rel_error <= 1e-8


def test_quadrature_refuses_unrepresentable_moment():
    with pytest.raises(OverflowGuardError):
        moments.quadrature_moment(1, 600, 1.0)
    report = moments.moment_report(1, 600, 1.0)
    assert report.quadrature is None
    assert report.quadrature_rel_error is None


def test_c_k_coefficient():
    assert moments.c_k_coefficient(1, 1, 1.0).to_real() == pytest.approx(math.sqrt(4 * math.pi), rel=1e-12)
    assert moments.c_k_coefficient(1, 2, 1.0).to_real() == pytest.approx(math.sqrt(24 * math.pi) / 2, rel=1e-12)
    assert moments.c_k_coefficient(1, 2, 1.0).to_real() == pytest.approx(4.3416, rel=1e-4)
    with pytest.raises(RangeError):
        moments.c_k_coefficient(1, 0, 1.0)


def test_gamma_half_integral():
    value = moments.gamma_half_integral()
    assert value == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert value <= moments.TWO_PLUS_INV_E
    assert moments.gamma_half_integral(1e-8) == pytest.approx(math.sqrt(math.pi), rel=1e-8)


def test_moment_report_without_published_bound():
    report = moments.moment_report(1, 0, 1.0)
    assert report.bound is None
    assert report.holds
    assert report.exact.to_real() == pytest.approx(2 * math.pi, rel=1e-12)
    assert moments.moment_report(2, 3, 1.0, with_quadrature=False).bound is None


def test_numpy_integer_orders():
    assert moments.exact_moment(np.int64(1), np.int64(2), 1.0).to_real() == pytest.approx(4 * math.pi, rel=1e-12)
    assert moments.lemma5_bound(np.int64(1), np.int64(2), 1.0).to_real() == pytest.approx(53.62, rel=1e-3)
