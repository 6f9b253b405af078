"""Property-based checks of the structural identities and inequalities."""

import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracembed import (
    DomainSpec,
    ProblemParams,
    analyze,
    auxiliary_J,
    build_box_basis,
    epsilon_threshold,
    lq_norm,
    quadratic_form,
    rayleigh_I,
    synthesize,
)
from fracembed.field_transforms import abs_substitute
from fracembed.minimize import SolverOptions, merge_runs, minimize_quotient

DATA = build_box_basis(DomainSpec(1, 11))
DATA2 = build_box_basis(DomainSpec(2, 3))
SETTINGS = settings(max_examples=60, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def coeffs(data=DATA):
    return arrays(np.float64, data.n_modes, elements=finite)


def nonzero(c):
    return np.linalg.norm(c) > 1e-3


orders = st.floats(0.05, 1.0)
# In 1D every q is subcritical once 2s >= 1.
supercrit_orders = st.floats(0.5, 1.0)
dilations = st.floats(0.05, 5.0)


@SETTINGS
@given(coeffs())
def test_round_trip_and_parseval(c):
    u = synthesize(c, DATA)
    np.testing.assert_allclose(analyze(u, DATA), c, atol=1e-10)
    assert abs(np.dot(DATA.weights, u * u) - np.dot(c, c)) <= 1e-10 * max(1.0, np.dot(c, c))


@SETTINGS
@given(coeffs(DATA2))
def test_nonconstant_modes_have_zero_mean(c):
    c = c.copy()
    c[0] = 0.0
    assert abs(np.dot(DATA2.weights, synthesize(c, DATA2))) <= 1e-12 * max(1.0, np.abs(c).sum())


@SETTINGS
@given(coeffs())
def test_holder_monotonicity(c):
    if not nonzero(c):
        return
    u = synthesize(c, DATA)
    norms = [lq_norm(u, q, DATA) for q in (1.0, 1.5, 2.0, 3.0, 4.5, 8.0)]
    assert all(b >= a * (1 - 1e-12) for a, b in itertools.pairwise(norms))


@SETTINGS
@given(coeffs(), orders)
def test_abs_value_energy_drop(c, s):
    u = synthesize(c, DATA)
    if not (u.min() < -1e-3 and u.max() > 1e-3):
        return
    before = quadratic_form(c, s, DATA)
    after = quadratic_form(analyze(abs_substitute(u), DATA), s, DATA)
    assert after < before - 1e-8


@SETTINGS
@given(coeffs(), orders)
def test_spectral_gap(c, s):
    c = c.copy()
    c[0] = 0.0
    lam1_s = DATA.lambda1**s
    assert quadratic_form(c, s, DATA) >= lam1_s * np.dot(c, c) * (1 - 1e-12)


@SETTINGS
@given(coeffs(), orders, st.floats(-10, 10))
def test_form_homogeneity(c, s, t):
    assert quadratic_form(t * c, s, DATA) == pytest.approx(t * t * quadratic_form(c, s, DATA),
                                                           rel=1e-12, abs=1e-12)


@SETTINGS
@given(coeffs(), st.floats(0.05, 0.5), st.floats(0.05, 0.5))
def test_form_increasing_in_s_on_box(c, s, ds):
    # Box eigenvalues are at least pi^2 > 1.
    assert quadratic_form(c, s + ds, DATA) >= quadratic_form(c, s, DATA) * (1 - 1e-12)


@SETTINGS
@given(coeffs(), supercrit_orders, st.floats(1.0, 6.0), dilations,
       st.floats(0.1, 10).flatmap(lambda t: st.sampled_from([t, -t])))
def test_quotient_scale_invariance(c, s, q, eps, t):
    if not nonzero(c):
        return
    p = ProblemParams(s, q, eps)
    assert rayleigh_I(t * c, p, DATA) == pytest.approx(rayleigh_I(c, p, DATA), rel=1e-11)


@SETTINGS
@given(coeffs(), orders, st.floats(1.0, 2.0), dilations)
def test_subquadratic_constant_wins(c, s, q, eps):
    c = c.copy()
    c[0] = 1.0
    if np.linalg.norm(c[1:]) < 1e-3:
        return
    p = ProblemParams(s, q, eps)
    assert rayleigh_I(c, p, DATA) > p.eps2s


@SETTINGS
@given(coeffs(), supercrit_orders, st.floats(2.2, 8.0), dilations)
def test_first_differential_vanishes_at_one(h, s, q, eps):
    p = ProblemParams(s, q, eps)
    one = np.zeros(DATA.n_modes)
    one[0] = 1.0
    t = 1e-4
    odd = auxiliary_J(one + t * h, p, DATA) - auxiliary_J(one - t * h, p, DATA)
    scale = max(1.0, np.dot(h, h)) * (DATA.eigenvalues[-1] ** s + q * q * (1 + p.eps2s))
    assert abs(odd) / (2 * t) <= 50 * t * t * scale


@SETTINGS
@given(coeffs(), supercrit_orders, st.floats(2.0, 5.0), dilations, st.floats(0, 3), st.floats(0, 3))
def test_monotone_region(c, s, q0, eps0, dq, deps):
    if not nonzero(c):
        return
    p0 = ProblemParams(s, q0, eps0)
    if not rayleigh_I(c, p0, DATA) < p0.eps2s:
        return
    p1 = ProblemParams(s, q0 + dq, eps0 + deps)
    assert rayleigh_I(c, p1, DATA) < p1.eps2s * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(orders, st.floats(2.01, 10.0), st.floats(0.01, 3.0))
def test_threshold_decreasing_in_q(s, q, dq):
    assert epsilon_threshold(q + dq, s, DATA) < epsilon_threshold(q, s, DATA)


RUNS = minimize_quotient(ProblemParams(0.5, 4.0, 1.3 * np.pi / 2), DATA,
                         SolverOptions(n_random_starts=4)).runs


@settings(max_examples=40, deadline=None)
@given(st.permutations(RUNS))
def test_merge_associative_order_free(perm):
    eps2s = (1.3 * np.pi / 2)
    a = merge_runs(RUNS, eps2s)
    b = merge_runs(list(perm), eps2s)
    # Merging in two halves equals merging all at once.
    half = len(perm) // 2
    c = merge_runs([merge_runs(list(perm[:half]), eps2s), merge_runs(list(perm[half:]), eps2s)],
                   eps2s)
    assert a.value == b.value == c.value
    np.testing.assert_array_equal(a.minimizer, b.minimizer)
    np.testing.assert_array_equal(a.minimizer, c.minimizer)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(2.5, 6.0))
def test_minimizer_normalized_and_below_constant(factor, q):
    p = ProblemParams(0.5, q, factor * epsilon_threshold(q, 0.5, DATA))
    res = minimize_quotient(p, DATA, SolverOptions(n_random_starts=1, max_iters=600))
    assert lq_norm(synthesize(res.minimizer, DATA), q, DATA) == pytest.approx(1.0, abs=1e-10)
    assert res.value <= p.eps2s * (1 + 1e-12)
    for run in res.runs:
        assert np.all(np.diff(run.history) <= 0)
