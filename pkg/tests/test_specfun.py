import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperbargmann.specfun import (gauss2f1_terminating, jacobi, jacobi_deflated,
                                   kummer1f1_terminating, laguerre, laguerre_table,
                                   log_factorial, log_gamma_ratio)

mpmath.mp.dps = 40


def mp_laguerre(k, a, x):
    return float(mpmath.laguerre(k, a, x))


def mp_jacobi_sum(k, a, b, t):
    """Explicit finite sum; valid for any real a, b including negative integers."""
    t = mpmath.mpf(t)
    total = mpmath.mpf(0)
    for s in range(k + 1):
        c1 = mpmath.fprod([(k + mpmath.mpf(a) - i) / (i + 1) for i in range(k - s)])
        c2 = mpmath.fprod([(k + mpmath.mpf(b) - i) / (i + 1) for i in range(s)])
        total += c1 * c2 * ((t - 1) / 2) ** s * ((t + 1) / 2) ** (k - s)
    return float(total)


# ---------------------------------------------------------------------------
# Laguerre


def test_laguerre_low_degrees():
    assert laguerre(0, 2.3, 7.7) == 1.0
    assert laguerre(1, 0.0, 2.0) == -1.0


def test_laguerre_against_series():
    assert laguerre(4, 6.0, 3.0) == pytest.approx(mp_laguerre(4, 6.0, 3.0), rel=1e-12)


@given(k=st.integers(0, 12), a=st.floats(-0.9, 12.0), x=st.floats(0.0, 30.0))
def test_laguerre_matches_mpmath(k, a, x):
    ref = mp_laguerre(k, a, x)
    # absolute error scale: sum of |terms| bounds the cancellation
    scale = float(mpmath.laguerre(k, a, -x)) if x > 0 else abs(ref)
    assert abs(laguerre(k, a, x) - ref) <= 1e-12 * max(abs(scale), 1.0)


def test_laguerre_complex_argument():
    x = 1.3 - 0.7j
    assert laguerre(5, 2.5, x) == pytest.approx(complex(mpmath.laguerre(5, 2.5, x)), rel=1e-13)


def test_laguerre_table_rows():
    x = np.linspace(0, 10, 7)
    tab = laguerre_table(6, 1.5, x)
    for k in range(7):
        np.testing.assert_allclose(tab[k], laguerre(k, 1.5, x), rtol=1e-14, atol=1e-14)


def test_laguerre_rejects_bad_input():
    with pytest.raises(ValueError):
        laguerre(-1, 0.0, 1.0)
    with pytest.raises(ValueError):
        laguerre(2, 0.0, float("nan"))


# ---------------------------------------------------------------------------
# Jacobi


def test_jacobi_degree_zero():
    assert jacobi(0, 1.2, 4.0, 0.3) == 1.0


def test_jacobi_symmetry_example():
    assert jacobi(2, 1, 3, -0.3) == pytest.approx(jacobi(2, 3, 1, 0.3), rel=1e-14)


def test_jacobi_against_series():
    assert jacobi(3, 0, 4.2, 0.5) == pytest.approx(mp_jacobi_sum(3, 0, 4.2, 0.5), rel=1e-12)


@given(k=st.integers(0, 12), a=st.floats(-0.9, 10.0), b=st.floats(-0.9, 10.0),
       t=st.floats(-1.0, 1.0))
def test_jacobi_generic_matches_mpmath(k, a, b, t):
    ref = mp_jacobi_sum(k, a, b, t)
    scale = max(abs(mp_jacobi_sum(k, a, b, 1.0)), abs(mp_jacobi_sum(k, a, b, -1.0)), 1.0)
    assert abs(jacobi(k, a, b, t) - ref) <= 1e-12 * scale


@given(k=st.integers(1, 12), data=st.data(), b=st.floats(0.1, 12.0), t=st.floats(-1.0, 1.0))
def test_jacobi_negative_integer_parameter(k, data, b, t):
    s = data.draw(st.integers(1, k))
    ref = mp_jacobi_sum(k, -s, b, t)
    scale = max(abs(mp_jacobi_sum(k, -s, b, -1.0)), 1.0)
    assert abs(jacobi(k, -s, b, t) - ref) <= 1e-12 * scale


def test_jacobi_negative_second_parameter():
    assert jacobi(4, 2.5, -2, 0.3) == pytest.approx(mp_jacobi_sum(4, 2.5, -2, 0.3), rel=1e-12)


@settings(max_examples=50)
@given(k=st.integers(0, 8), a=st.sampled_from([0.5, 1.0, 2.4, 6.0]),
       b=st.sampled_from([0.5, 1.0, 2.4, 6.0]), t=st.floats(-0.9, 0.9))
def test_jacobi_symmetry_relation(k, a, b, t):
    lhs, rhs = jacobi(k, a, b, t), (-1) ** k * jacobi(k, b, a, -t)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@pytest.mark.parametrize("k", range(1, 7))
def test_negative_parameter_identity(k):
    a = 2.4
    t = np.linspace(-0.99, 0.99, 11)
    for s in range(1, k + 1):
        lhs = math.factorial(k) / math.factorial(k - s) * jacobi(k, -s, a, t)
        rhs = (math.gamma(k + a + 1) / math.gamma(k - s + a + 1)) * ((t - 1) / 2) ** s \
            * jacobi(k - s, s, a, t)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * np.max(np.abs(rhs)))


@given(k=st.integers(1, 12), data=st.data(), b=st.floats(0.1, 8.0), t=st.floats(-1.0, 1.0))
def test_deflated_times_factor_is_jacobi(k, data, b, t):
    s = data.draw(st.integers(1, k))
    rebuilt = jacobi_deflated(k, s, b, t) * ((t - 1) / 2) ** s
    scale = max(abs(mp_jacobi_sum(k, -s, b, -1.0)), 1.0)
    assert abs(rebuilt - jacobi(k, -s, b, t)) <= 1e-12 * scale


def test_deflated_finite_at_one():
    # P_2^(-1,b)(t) / ((t-1)/2) is a degree-1 polynomial; at t = 1 from the finite sum
    b = 3.0
    val = jacobi_deflated(2, 1, b, 1.0)
    eps = 1e-6
    ref = mp_jacobi_sum(2, -1, b, 1 - eps) / (-eps / 2)
    assert val == pytest.approx(ref, rel=1e-5)


def test_jacobi_rejects_out_of_range():
    with pytest.raises(ValueError):
        jacobi(2, 1.0, 1.0, 1.1)
    jacobi(2, 1.0, 1.0, 1 + 1e-13)
    with pytest.raises(ValueError):
        jacobi(-1, 1.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# terminating hypergeometric sums


def test_gauss2f1_examples():
    assert gauss2f1_terminating(0, 3.1, 2.2, 9.0) == 1.0
    assert gauss2f1_terminating(1, 2, 4, 0.5) == pytest.approx(0.75, rel=1e-15)
    ref = float(mpmath.hyp2f1(-3, -2, 5.4, -1.1))
    assert gauss2f1_terminating(3, -2, 5.4, -1.1) == pytest.approx(ref, rel=1e-13)


@given(k=st.integers(0, 12), b=st.floats(-6.0, 6.0), c=st.floats(0.2, 10.0), y=st.floats(-2.0, 2.0))
def test_gauss2f1_matches_mpmath(k, b, c, y):
    ref = float(mpmath.hyp2f1(-k, b, c, y))
    terms = float(mpmath.hyp2f1(-k, -abs(b), c, -abs(y))) if b or y else 1.0
    assert abs(gauss2f1_terminating(k, b, c, y) - ref) <= 1e-12 * max(1.0, abs(terms), abs(ref))


def test_gauss2f1_pole_rejected():
    with pytest.raises(ValueError, match="pole"):
        gauss2f1_terminating(3, 1.0, -1.0, 0.5)


def test_kummer_examples():
    assert kummer1f1_terminating(0, 3.0, 9.9) == 1.0
    assert kummer1f1_terminating(1, 2.0, 2.0) == 0.0
    a = 4.0
    rhs = 2 * math.gamma(5) / math.gamma(7) * laguerre(2, a, 1.5)
    assert kummer1f1_terminating(2, 1 + a, 1.5) == pytest.approx(rhs, rel=1e-14)


@given(m=st.integers(0, 8), a=st.floats(0.05, 12.0), x=st.floats(0.0, 20.0))
def test_kummer_laguerre_reduction(m, a, x):
    lhs = kummer1f1_terminating(m, 1 + a, x)
    rhs = math.exp(math.lgamma(m + 1) + math.lgamma(1 + a) - math.lgamma(1 + a + m)) * laguerre(m, a, x)
    ref = float(mpmath.hyp1f1(-m, 1 + a, x))
    scale = max(1.0, abs(float(mpmath.hyp1f1(-m, 1 + a, -x))))
    assert abs(lhs - ref) <= 1e-12 * scale
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_kummer_rejects_negative_degree():
    with pytest.raises(ValueError):
        kummer1f1_terminating(-1, 2.0, 1.0)


# ---------------------------------------------------------------------------
# log-Gamma ratios


def test_log_gamma_ratio_examples():
    assert log_gamma_ratio(5, 5) == 0.0
    assert log_gamma_ratio(6, 5) == pytest.approx(math.log(5), rel=1e-15)
    assert log_gamma_ratio(7.5, 2.5) == pytest.approx(math.log(6.5 * 5.5 * 4.5 * 3.5 * 2.5), rel=1e-14)


@given(p=st.floats(1e-3, 1e6), q=st.floats(1e-3, 1e6))
def test_log_gamma_ratio_matches_mpmath(p, q):
    ref = float(mpmath.loggamma(p) - mpmath.loggamma(q))
    assert abs(log_gamma_ratio(p, q) - ref) <= 1e-13 * max(1.0, abs(ref))


@given(q=st.floats(30.0, 1e6), d=st.floats(-5.0, 5.0))
def test_log_gamma_ratio_close_arguments(q, d):
    p = q + d
    ref = float(mpmath.loggamma(mpmath.mpf(p)) - mpmath.loggamma(mpmath.mpf(q)))
    assert abs(log_gamma_ratio(p, q) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_ratio_vectorized_and_rejects():
    out = log_gamma_ratio(np.array([6.0, 7.0]), 5.0)
    np.testing.assert_allclose(out, [math.log(5), math.log(30)], rtol=1e-15)
    with pytest.raises(ValueError):
        log_gamma_ratio(0.0, 1.0)
    assert log_factorial(5) == pytest.approx(math.log(120), rel=1e-15)
