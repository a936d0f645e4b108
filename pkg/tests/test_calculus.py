import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from nonlimit.calculus import (
    GridSignal,
    check_rules,
    exponential_rule,
    log_rule,
    nl_derivative,
    nl_derivative_grid,
    nl_differential,
    nl_second_derivative,
    power_rule,
    product_rule,
    quotient_rule,
    scaled_error,
)
from nonlimit.errors import DomainError, EvaluationError, InsufficientSamplesError

TOL = 1e-12

taus = st.floats(0.05, 1.0)
times = st.floats(-2.0, 2.0)
coef = st.floats(-3.0, 3.0)
complexes = st.builds(complex, coef, coef)
polys = st.lists(complexes, min_size=1, max_size=5)


def poly(c):
    return lambda t: complex(np.polyval(c, t))


# -- examples ---------------------------------------------------------------


@pytest.mark.parametrize("t", [-1.0, 0.0, 3.7])
def test_derivative_of_constant_and_identity(t):
    assert nl_derivative(lambda s: 7.0, t, 0.5) == 0
    assert nl_derivative(lambda s: s, t, 0.5) == pytest.approx(1.0, abs=1e-15)


def test_derivative_of_square():
    # (1.5**2 - 1) / 0.5
    assert nl_derivative(lambda s: s * s, 1.0, 0.5) == 2.5


@pytest.mark.parametrize("t", [-2.0, 0.0, 1.0, 5.0])
def test_second_derivative_examples(t):
    assert nl_second_derivative(lambda s: s * s, t, 0.5) == pytest.approx(2.0, abs=1e-12)
    assert nl_second_derivative(lambda s: 3 * s - 1, t, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_second_derivative_of_power_of_two():
    assert nl_second_derivative(lambda s: 2.0**s, 0.0, 1.0) == 1.0


def test_differential_examples():
    assert nl_differential(lambda s: 4.2, 0.3, 0.7) == 0
    assert nl_differential(lambda s: s, 0.0, 0.3) == pytest.approx(0.3)
    assert nl_differential(lambda s: s * s, 1.0, 0.5) == 1.25


def test_grid_derivative_examples():
    assert list(nl_derivative_grid(GridSignal(0, 0.25, [1, 1, 1])).values) == [0, 0]
    tau = 0.3
    d = nl_derivative_grid(GridSignal(0, tau, [0, tau, 2 * tau]))
    np.testing.assert_allclose(d.values, [1, 1])
    d = nl_derivative_grid(GridSignal(2.0, 1.0, [1, 2, 4]))
    assert list(d.values) == [1, 2]
    assert d.t0 == 2.0 and d.tau == 1.0


def test_grid_derivative_needs_two_samples():
    with pytest.raises(InsufficientSamplesError):
        nl_derivative_grid(GridSignal(0, 1, [3.0]))


@pytest.mark.parametrize("tau", [0.0, -0.1, math.inf, math.nan])
def test_bad_step_rejected(tau):
    with pytest.raises(DomainError):
        nl_derivative(lambda s: s, 0.0, tau)


def test_non_finite_evaluation():
    with pytest.raises(EvaluationError):
        nl_derivative(lambda s: math.inf, 0.0, 0.1)


def test_grid_signal_is_immutable():
    s = GridSignal(0, 0.1, [1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 5
    with pytest.raises(EvaluationError):
        GridSignal(0, 0.1, [1, math.nan])


# -- identities -------------------------------------------------------------


@given(polys, polys, complexes, complexes, times, taus)
def test_linearity(cf, cg, k, l, t, tau):
    f, g = poly(cf), poly(cg)
    lhs = nl_derivative(lambda s: k * f(s) + l * g(s), t, tau)
    rhs = k * nl_derivative(f, t, tau) + l * nl_derivative(g, t, tau)
    scale = max(abs(k), abs(l), 1) * max(abs(f(t + tau)), abs(f(t)), abs(g(t + tau)), abs(g(t))) / tau
    assert scaled_error(lhs, rhs, scale) <= TOL


@given(polys, polys, times, taus)
def test_product_rule(cf, cg, t, tau):
    f, g = poly(cf), poly(cg)
    lhs = nl_derivative(lambda s: f(s) * g(s), t, tau)
    scale = max(abs(f(t + tau) * g(t + tau)), abs(f(t) * g(t))) / tau
    assert scaled_error(lhs, product_rule(f, g, t, tau), scale) <= TOL


@given(polys, polys, times, taus)
def test_quotient_rule(cf, cg, t, tau):
    f, g = poly(cf), poly(cg)
    g0, g1 = g(t), g(t + tau)
    assume(abs(g0) > 1e-2 and abs(g1) > 1e-2)
    lhs = nl_derivative(lambda s: f(s) / g(s), t, tau)
    scale = max(abs(f(t + tau) / g1), abs(f(t) / g0)) / tau
    assert scaled_error(lhs, quotient_rule(f, g, t, tau), scale) <= TOL


def test_quotient_rule_domain():
    with pytest.raises(DomainError):
        quotient_rule(lambda s: 1.0, lambda s: s, 0.0, 0.5)
    with pytest.raises(DomainError):
        quotient_rule(lambda s: 1.0, lambda s: s - 0.5, 0.0, 0.5)


@given(st.floats(0.1, 5.0), times, taus)
def test_exponential_rule(p, t, tau):
    lhs = nl_derivative(lambda s: p**s, t, tau)
    assert scaled_error(lhs, exponential_rule(p, t, tau), p ** (t + tau) / tau) <= TOL


@given(polys, st.integers(0, 8), times, taus)
def test_power_recurrence(cx, n, t, tau):
    x = poly(cx)
    lhs = nl_derivative(lambda s: x(s) ** n, t, tau)
    scale = max(abs(x(t + tau)) ** n, abs(x(t)) ** n) / tau
    assert scaled_error(lhs, power_rule(x, n, t, tau), scale) <= TOL


@given(st.floats(0.5, 3.0), st.floats(0.0, 3.0), st.floats(0.2, 3.0),
       st.sampled_from([2.0, math.e, 10.0]), times, taus)
def test_log_rule(a, b, p, base, t, tau):
    x = lambda s: a + b * p**s  # noqa: E731
    lhs = nl_derivative(lambda s: math.log(x(s), base), t, tau)
    scale = max(abs(math.log(x(t), base)), abs(math.log(x(t + tau), base))) / tau
    assert scaled_error(lhs, log_rule(x, t, tau, base), scale) <= TOL


def test_log_rule_restricted_to_positive_real():
    with pytest.raises(DomainError):
        log_rule(lambda s: s, 0.0, 0.5)
    with pytest.raises(DomainError):
        log_rule(lambda s: 1 + 1j, 0.0, 0.5)


@given(polys, times, taus)
def test_second_derivative_is_derivative_twice(cf, t, tau):
    f = poly(cf)
    twice = (nl_derivative(f, t + tau, tau) - nl_derivative(f, t, tau)) / tau
    direct = nl_second_derivative(f, t, tau)
    scale = max(abs(f(t + 2 * tau)), abs(f(t + tau)), abs(f(t))) / tau**2
    assert scaled_error(direct, twice, scale) <= TOL


def test_check_rules_deterministic_and_within_tolerance():
    a = check_rules(42, 100)
    assert a == check_rules(42, 100)
    assert max(a.values()) <= TOL
    assert set(a) >= {"linearity", "product", "quotient", "power", "exponential", "logarithm"}


def test_check_rules_rejects_zero_trials():
    with pytest.raises(DomainError):
        check_rules(1, 0)
