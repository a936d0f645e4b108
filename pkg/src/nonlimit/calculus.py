"""Fixed-step ("non-limit") derivative and its calculus rules.

The derivative of ``f`` at ``t`` with step ``tau`` is the forward quotient
``(f(t + tau) - f(t)) / tau``.  No limit is taken; ``tau`` is a finite,
strictly positive constant.  Every rule below (product, quotient, power,
exponential, logarithm) is an exact algebraic identity for this operator and
is exposed as a right-hand side that can be compared with the direct
evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable

import numpy as np

from .errors import DomainError, EvaluationError, InsufficientSamplesError

ScalarFunction = Callable[[float], complex]

IDENTITY_TOL = 1e-12


def check_step(tau: float) -> float:
    tau = float(tau)
    if not math.isfinite(tau) or tau <= 0.0:
        raise DomainError(f"step must be finite and > 0, got {tau!r}")
    return tau


def _eval(f: ScalarFunction, t: float) -> complex:
    value = complex(f(t))
    if not cmath.isfinite(value):
        raise EvaluationError(f"non-finite value {value!r} at t={t!r}")
    return value


@dataclass(frozen=True)
class GridSignal:
    """Complex samples ``values[n] = x(t0 + n*tau)`` on a uniform grid."""

    t0: float
    tau: float
    values: np.ndarray

    def __post_init__(self):
        check_step(self.tau)
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.size < 1:
            raise InsufficientSamplesError("a grid signal needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise EvaluationError("grid signal contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.tau * np.arange(len(self))

    @classmethod
    def sample(cls, f: ScalarFunction, t0: float, tau: float, n: int) -> "GridSignal":
        tau = check_step(tau)
        return cls(t0, tau, [_eval(f, t0 + k * tau) for k in range(n)])


def nl_derivative(f: ScalarFunction, t: float, tau: float) -> complex:
    tau = check_step(tau)
    return (_eval(f, t + tau) - _eval(f, t)) / tau


def nl_second_derivative(f: ScalarFunction, t: float, tau: float) -> complex:
    tau = check_step(tau)
    f0, f1, f2 = _eval(f, t), _eval(f, t + tau), _eval(f, t + 2 * tau)
    return (f2 - 2 * f1 + f0) / tau**2


def nl_differential(f: ScalarFunction, t: float, tau: float) -> complex:
    """Finite increment ``tau * D f(t) = f(t + tau) - f(t)``."""
    check_step(tau)
    return _eval(f, t + tau) - _eval(f, t)


def forward_difference(values, tau: float) -> np.ndarray:
    """First forward quotient of raw samples.

    Unlike the public operators this accepts any finite nonzero ``tau``,
    including negative steps, because the van der Pol step roots can be
    negative and their residuals are still well defined algebraically.
    """
    tau = float(tau)
    if tau == 0.0 or not math.isfinite(tau):
        raise DomainError(f"step must be finite and nonzero, got {tau!r}")
    values = np.asarray(values, dtype=complex)
    return (values[1:] - values[:-1]) / tau


def nl_derivative_grid(s: GridSignal) -> GridSignal:
    if len(s) < 2:
        raise InsufficientSamplesError("derivative needs at least two samples")
    return GridSignal(s.t0, s.tau, forward_difference(s.values, s.tau))


# -- calculus rules ---------------------------------------------------------


def product_rule(f: ScalarFunction, g: ScalarFunction, t: float, tau: float) -> complex:
    df, dg = nl_derivative(f, t, tau), nl_derivative(g, t, tau)
    return df * _eval(g, t) + _eval(f, t) * dg + tau * df * dg


def quotient_rule(f: ScalarFunction, g: ScalarFunction, t: float, tau: float) -> complex:
    g0, g1 = _eval(g, t), _eval(g, t + tau)
    if g0 == 0 or g1 == 0:
        raise DomainError("quotient rule needs g(t) != 0 and g(t + tau) != 0")
    df, dg = nl_derivative(f, t, tau), nl_derivative(g, t, tau)
    return (g0 * df - _eval(f, t) * dg) / (g0 * (g0 + tau * dg))


def exponential_rule(p: float, t: float, tau: float) -> complex:
    """D(p**t) = p**t (p**tau - 1) / tau."""
    if p <= 0:
        raise DomainError(f"exponential base must be positive, got {p!r}")
    tau = check_step(tau)
    return p**t * (p**tau - 1) / tau


def power_rule(x: ScalarFunction, n: int, t: float, tau: float) -> complex:
    """D(x**n) through the recurrence on n, starting from D(x**0) = 0."""
    if n < 0:
        raise DomainError("power rule is defined for n >= 0")
    x0 = _eval(x, t)
    dx = nl_derivative(x, t, tau)
    shifted = tau * dx + x0
    d = 0j
    for k in range(1, n + 1):
        d = x0 * d + dx * shifted ** (k - 1)
    return d


def log_rule(x: ScalarFunction, t: float, tau: float, base: float = math.e) -> complex:
    """D(log_base x) = log_base(1 + tau * Dx / x) / tau, for positive real x."""
    x0, x1 = _eval(x, t), _eval(x, t + tau)
    for v in (x0, x1):
        if v.imag != 0 or v.real <= 0:
            raise DomainError("logarithm rule is restricted to positive real signals")
    if base <= 0 or base == 1:
        raise DomainError(f"invalid logarithm base {base!r}")
    dx = nl_derivative(x, t, tau)
    return math.log((1 + tau * dx / x0).real, base) / tau


# -- randomized identity checks --------------------------------------------


def scaled_error(a: complex, b: complex, *terms: complex) -> float:
    """``|a - b|`` absolute for unit-sized terms, relative to the largest otherwise."""
    scale = max([1.0, abs(a), abs(b), *(abs(x) for x in terms)])
    return abs(a - b) / scale


def _random_poly(rng: np.random.Generator, degree: int = 3) -> ScalarFunction:
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return lambda t: complex(np.polyval(c, t))


def _random_exp(rng: np.random.Generator) -> ScalarFunction:
    a = complex(rng.normal(), rng.normal())
    p = float(rng.uniform(0.2, 3.0))
    return lambda t: a * p**t


def _random_function(rng: np.random.Generator) -> ScalarFunction:
    return _random_poly(rng) if rng.random() < 0.5 else _random_exp(rng)


def _positive_function(rng: np.random.Generator) -> ScalarFunction:
    a, b = rng.uniform(0.5, 3.0, size=2)
    p = float(rng.uniform(0.2, 3.0))
    return lambda t: complex(a + b * p**t)


RULES = ("linearity", "product", "quotient", "power", "exponential", "logarithm", "second")


def rule_errors(rng: np.random.Generator, trials: int) -> Dict[str, float]:
    """Largest scaled error of every calculus rule over ``trials`` random draws."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    worst = dict.fromkeys(RULES, 0.0)

    def record(name: str, err: float) -> None:
        worst[name] = max(worst[name], err)

    for _ in range(trials):
        tau = float(rng.uniform(0.1, 1.0))
        t = float(rng.uniform(-1.0, 1.0))
        f, g = _random_function(rng), _random_function(rng)
        k, l = (complex(*rng.normal(size=2)) for _ in range(2))

        combo = lambda s: k * f(s) + l * g(s)  # noqa: E731
        df, dg = nl_derivative(f, t, tau), nl_derivative(g, t, tau)
        record("linearity", scaled_error(nl_derivative(combo, t, tau), k * df + l * dg, k * df, l * dg))

        fg = lambda s: f(s) * g(s)  # noqa: E731
        record("product", scaled_error(
            nl_derivative(fg, t, tau), product_rule(f, g, t, tau),
            df * g(t), f(t) * dg, tau * df * dg,
            f(t + tau) * g(t + tau) / tau,
        ))

        g0, g1 = g(t), g(t + tau)
        if abs(g0) > 1e-3 and abs(g1) > 1e-3:
            q = lambda s: f(s) / g(s)  # noqa: E731
            record("quotient", scaled_error(
                nl_derivative(q, t, tau), quotient_rule(f, g, t, tau),
                f(t + tau) / g1 / tau, f(t) / g0 / tau,
            ))

        x = _random_function(rng)
        for n in range(1, 9):
            xn = lambda s, n=n: x(s) ** n  # noqa: E731
            record("power", scaled_error(
                nl_derivative(xn, t, tau), power_rule(x, n, t, tau),
                x(t + tau) ** n / tau, x(t) ** n / tau,
            ))

        p = float(rng.uniform(0.2, 3.0))
        record("exponential", scaled_error(
            nl_derivative(lambda s: p**s, t, tau), exponential_rule(p, t, tau), p ** (t + tau) / tau,
        ))

        h = _positive_function(rng)
        base = float(rng.choice([2.0, math.e, 10.0]))
        logh = lambda s: math.log(h(s).real, base)  # noqa: E731
        record("logarithm", scaled_error(
            nl_derivative(logh, t, tau), log_rule(h, t, tau, base), logh(t) / tau, logh(t + tau) / tau,
        ))

        twice = (nl_derivative(f, t + tau, tau) - df) / tau
        record("second", scaled_error(nl_second_derivative(f, t, tau), twice, f(t + 2 * tau) / tau**2))

    return worst


def check_rules(seed: int, trials: int) -> Dict[str, float]:
    return rule_errors(np.random.default_rng(seed), trials)


def all_within(errors: Iterable[float], tol: float = IDENTITY_TOL) -> bool:
    return all(e <= tol for e in errors)
