import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperbargmann.coherent import (ConvergenceError, RadialFunction, TruncationSpec,
                                    coherent_closed, coherent_norm, coherent_series, combo_input,
                                    inner_halfline, powerexp_input, psi_basis, psi_input, psi_table)
from hyperbargmann.eigenspace import big_phi, kernel_diag
from hyperbargmann.params import make_params
from hyperbargmann.quadrature import gauss_laguerre

CASES = [(1.7, 0), (1.7, 1), (3.5, 0), (3.5, 1), (3.5, 2)]
Z_SAMPLES = [0.0, 0.3, 0.5 * np.exp(1j * np.pi / 3), -0.7]


def test_psi_zero_closed_form():
    p = make_params(3.5, 0)
    xi = np.array([0.5, 3.0, 11.0])
    ref = xi ** 3.5 * np.exp(-xi / 2) / math.sqrt(math.gamma(7))
    np.testing.assert_allclose(psi_basis(p, 0, xi), ref, rtol=1e-14)


def test_psi_zero_peaks_at_twice_power():
    p = make_params(3.5, 1)
    peak = 2 * p.half_power
    assert psi_basis(p, 0, peak) > psi_basis(p, 0, peak * (1 + 1e-3))
    assert psi_basis(p, 0, peak) > psi_basis(p, 0, peak * (1 - 1e-3))


@pytest.mark.parametrize("nu, m", CASES)
def test_psi_orthonormal(nu, m):
    p = make_params(nu, m)
    fns = [psi_input(p, k) for k in range(9)]
    G = np.array([[inner_halfline(f, g) for g in fns] for f in fns])
    assert np.max(np.abs(G - np.eye(9))) < 1e-11


@settings(max_examples=30)
@given(k=st.integers(0, 30), xi=st.floats(1e-3, 80.0))
def test_psi_table_matches_single(k, xi):
    p = make_params(3.5, 1)
    tab = psi_table(p, 30, np.array([xi]))
    ref = float(mpmath.sqrt(mpmath.factorial(k) / mpmath.gamma(p.alpha + 1 + k))
                * mpmath.mpf(xi) ** p.half_power * mpmath.exp(-xi / 2) * mpmath.laguerre(k, p.alpha, xi))
    scale = float(mpmath.mpf(xi) ** p.half_power * mpmath.exp(-xi / 2)) + 1e-300
    assert abs(tab[k, 0] - ref) <= 1e-12 * max(abs(ref), scale / math.sqrt(math.gamma(p.alpha + 1)))
    assert psi_basis(p, k, xi) == pytest.approx(tab[k, 0], rel=1e-10, abs=1e-300)


def test_psi_rejects_nonpositive():
    p = make_params(2.0, 0)
    with pytest.raises(ValueError):
        psi_basis(p, 0, 0.0)
    with pytest.raises(ValueError):
        psi_basis(p, 0, -1.0)


@pytest.mark.parametrize("nu, m", CASES)
def test_coherent_at_origin_is_psi_m(nu, m):
    p = make_params(nu, m)
    xi = np.array([0.2, 1.0, 5.0, 17.0])
    expect = (-1) ** m * psi_basis(p, m, xi)
    np.testing.assert_allclose(coherent_closed(p, 0.0, xi), expect, rtol=1e-13, atol=1e-300)
    np.testing.assert_allclose(coherent_series(p, 0.0, xi), expect, rtol=1e-13, atol=1e-300)


def test_coherent_lowest_level_closed_form():
    nu, z, xi = 2.3, 0.4 - 0.3j, 1.7
    p = make_params(nu, 0)
    ref = (math.gamma(2 * nu) ** -0.5 * (1 - z) ** (-2 * nu) * (1 - abs(z) ** 2) ** nu * xi ** nu
           * np.exp(-(xi / 2) * (1 + z) / (1 - z)))
    assert coherent_closed(p, z, xi) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("nu, m", CASES)
def test_series_matches_closed(nu, m):
    p = make_params(nu, m)
    xi = gauss_laguerre(p.alpha, 32).nodes
    for z in Z_SAMPLES:
        ref = coherent_closed(p, z, xi)
        got, info = coherent_series(p, z, xi, full_output=True)
        assert np.max(np.abs(got - ref)) < 1e-12 * max(1.0, np.max(np.abs(ref)))
        assert info["terms"] >= 1 and info["tail"] >= 0


def test_series_lowest_level_example():
    p = make_params(3.5, 0)
    got = coherent_series(p, 0.4, 1.0, TruncationSpec(max_terms=300))
    assert got == pytest.approx(coherent_closed(p, 0.4, 1.0), abs=1e-9)


def test_series_stable_under_more_terms():
    p = make_params(3.5, 1)
    z = 0.5 * np.exp(0.3j)
    a = coherent_series(p, z, 2.0, TruncationSpec(max_terms=200))
    b = coherent_series(p, z, 2.0, TruncationSpec(max_terms=250))
    assert abs(a - b) < 1e-13 * max(1.0, abs(a))


def test_series_reports_non_convergence():
    p = make_params(3.5, 0)
    with pytest.raises(ConvergenceError, match="not converged"):
        coherent_series(p, 0.99, 1.0, TruncationSpec(start=8, limit=16))


@pytest.mark.parametrize("nu, m", CASES)
def test_coherent_states_normalized(nu, m):
    p = make_params(nu, m)
    for z in Z_SAMPLES + [0.9j]:
        assert coherent_norm(p, z) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("nu, m", CASES)
def test_expansion_coefficient_modulus(nu, m):
    p = make_params(nu, m)
    for z in (0.3, -0.4j):
        rate = (1 - abs(z) ** 2) / abs(1 - z) ** 2
        cs = RadialFunction(lambda x: coherent_closed(p, z, x), p.half_power, rate / 2, p.m)
        for k in range(6):
            c = inner_halfline(cs, psi_input(p, k))
            assert abs(c) * math.sqrt(kernel_diag(p, z)) == pytest.approx(abs(big_phi(p, k, z)), abs=1e-10)


def test_builtin_inputs():
    p = make_params(3.5, 2)
    combo = combo_input(p, [0.6, 0.8])
    xi = np.array([0.5, 2.0, 9.0])
    np.testing.assert_allclose(combo(xi), 0.6 * psi_basis(p, 0, xi) + 0.8 * psi_basis(p, 1, xi), rtol=1e-14)
    assert inner_halfline(combo, combo) == pytest.approx(1.0, abs=1e-12)
    pe = powerexp_input(3.5, 0.2)
    assert pe(2.0) == pytest.approx(2.0 ** 3.5 * math.exp(-0.4), rel=1e-14)
    assert pe.spot_check()
    with pytest.raises(ValueError, match="decay bound"):
        powerexp_input(3.5, 0.6)
    with pytest.raises(ValueError):
        powerexp_input(-1.0, 0.2)
    with pytest.raises(ValueError):
        combo_input(p, [])


def test_spot_check_detects_false_decay_tag():
    lie = RadialFunction(lambda x: np.exp(-0.1 * x), 0.5, 0.5)
    assert not lie.spot_check()


def test_truncation_spec_validation():
    with pytest.raises(ValueError):
        TruncationSpec(max_terms=0)
    with pytest.raises(ValueError):
        TruncationSpec(target_tol=0.0)
