import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from scipy import special

from fracembed.inequality import (
    A_ratio,
    A_value,
    B_value,
    B_value_direct,
    CERT_NUMERATOR_X,
    CERT_NUMERATOR_Y,
    cert_denominator_x,
    chain_holds,
    f_monotonicity_check,
    g_ratio,
    gamma_fn,
    log_derivative_bound,
    log_derivative_g,
    log_gamma,
    s_grid,
    verify_chain,
)


@pytest.mark.parametrize("x", [0.05, 0.5, 1.0, 1.5, 2.5, 7.3, 20.0, 100.5, 170.2])
def test_gamma_against_stdlib(x):
    assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-13)
    assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-14)


@pytest.mark.parametrize("x", [0.0, -0.5, -3.7])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma_fn(x)
    with pytest.raises(ValueError):
        log_gamma(x)


def test_log_gamma_vectorized_large():
    x = np.linspace(150, 5000, 40)
    np.testing.assert_allclose(log_gamma(x), special.gammaln(x), rtol=1e-14)


def test_A_ratio_closed_form():
    for n in (1, 2, 5, 11):
        for s in (0.1, 0.45, 0.9):
            if n > 2 * s:
                assert A_ratio(n, s) == pytest.approx(A_value(n + 2, s) / A_value(n, s), rel=1e-11)


@pytest.mark.parametrize("n", [2, 3, 4, 10, 30])
def test_B_log_and_direct_agree(n):
    assert B_value(n) == pytest.approx(B_value_direct(n), rel=1e-12)


def test_B_values():
    assert abs(B_value(2) - 1.0) < 1e-12
    assert B_value(3) >= 1.05


@pytest.mark.parametrize("n", [2, 3, 8, 40])
def test_g_is_ratio_of_B(n):
    assert g_ratio(n) == pytest.approx(B_value(n + 2) / B_value(n), rel=1e-11)


def _g_mp(n):
    inner = ((n + 3) * (n + 2) ** 2 / ((n + 1) * (n + 4) ** 2)
             * ((n + 2) ** 2 / (n * n + 4 * n)) ** (n / 2))
    return (n + 4) ** 2 / ((n + 2) * (n + 6)) * inner ** ((n + 2) / 2)


def test_log_derivative_against_high_precision():
    x = np.array([2.0, 5.0, 17.0, 60.0])
    with mpmath.workdps(40):
        ref = [float(mpmath.diff(lambda t: mpmath.log(_g_mp(t)), mpmath.mpf(v))) for v in x]
    np.testing.assert_allclose(log_derivative_g(x), ref, rtol=1e-9)
    assert np.all(log_derivative_g(x) <= log_derivative_bound(x))


def test_certificate_is_exact_rational_identity():
    x, y = sp.symbols("x y", positive=True)
    v = x**2 + 4 * x
    bound = (-sp.Rational(8) / ((x + 2) * (x + 4) * (x + 6)) + 1 / ((x + 1) * (x + 4))
             - (x + 1) / (x + 2) ** 2
             + (x + 1) / 2 * (4 / v - 8 / v**2 + sp.Rational(64, 3) / v**3)
             - (x + 2) / ((x + 1) * (x + 3)))
    num_x = sum(c * x ** (8 - k) for k, c in enumerate(CERT_NUMERATOR_X))
    den_x = 3 * x**3 * (x + 1) * (x + 2) ** 2 * (x + 3) * (x + 4) ** 3 * (x + 6)
    assert sp.simplify(bound + num_x / den_x) == 0
    num_y = sum(c * y ** (8 - k) for k, c in enumerate(CERT_NUMERATOR_Y))
    assert sp.expand(num_x.subs(x, y + 2) - num_y) == 0
    xs = np.array([2.0, 9.0, 80.0])
    np.testing.assert_allclose(cert_denominator_x(xs),
                               [float(den_x.subs(x, v)) for v in xs], rtol=1e-14)


def test_s_grid():
    g = s_grid(0.25)
    np.testing.assert_allclose(g, [0.25, 0.5, 0.75])
    assert s_grid(0.25, include_one=True)[-1] == 1.0


def test_f_monotone_report_fields():
    rep = f_monotonicity_check(3, s_grid(0.05))
    assert rep.holds and rep.min_margin > 0
    assert rep.worst_point["n"] == 3


def test_full_chain_holds():
    reports = verify_chain(20, 0.01)
    failed = [r.line() for r in reports if not r.holds]
    assert not failed, failed
    assert chain_holds(reports)
    names = {r.name for r in reports}
    assert {"B_2 = 1", "B_3 >= 1.05", "g(n) > 1", "g(n) decreasing"} <= names


def test_chain_requires_n_max():
    with pytest.raises(ValueError):
        verify_chain(2)
