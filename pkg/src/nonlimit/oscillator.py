"""Free oscillator with a fixed time step.

x'' + omega^2 x = 0 with forward quotients has the exact grid solution

    x(t) = C1 (1 + i tau omega)^(t/tau) + C2 (1 - i tau omega)^(t/tau)

which tends to C1 e^{i omega t} + C2 e^{-i omega t} as tau -> 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .calculus import GridSignal, check_step
from .errors import DomainError


def _check_omega(omega: float) -> float:
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0:
        raise DomainError(f"omega must be finite and > 0, got {omega!r}")
    return omega


@dataclass(frozen=True)
class OscSolution:
    C1: complex
    C2: complex
    omega: float
    tau: float

    def __post_init__(self):
        _check_omega(self.omega)
        check_step(self.tau)

    @property
    def growth_factors(self) -> Tuple[complex, complex]:
        return osc_growth_factors(self.omega, self.tau)


def osc_growth_factors(omega: float, tau: float) -> Tuple[complex, complex]:
    omega, tau = _check_omega(omega), check_step(tau)
    return complex(1, tau * omega), complex(1, -tau * omega)


def _power(mu: complex, steps: float) -> complex:
    # integer exponents by repeated squaring; anything else uses the principal branch
    k = round(steps)
    if abs(steps - k) <= 1e-9 * max(1.0, abs(steps)):
        return mu**k
    return cmath.exp(steps * cmath.log(mu))


def osc_eval(sol: OscSolution, t: float) -> complex:
    """Closed-form value at ``t``; off-grid ``t`` is a principal-branch extrapolation."""
    mu_p, mu_m = sol.growth_factors
    steps = t / sol.tau
    return sol.C1 * _power(mu_p, steps) + sol.C2 * _power(mu_m, steps)


def osc_fit(x0: complex, v0: complex, omega: float, tau: float) -> OscSolution:
    """Constants matching x(0) = x0 and forward quotient (x(tau) - x(0))/tau = v0.

    With mu = 1 +- i tau omega the quotient of the solution at 0 is
    i omega (C1 - C2), so the fit is a 2x2 linear solve.
    """
    omega = _check_omega(omega)
    diff = complex(v0) / (1j * omega)
    c1 = (complex(x0) + diff) / 2
    c2 = (complex(x0) - diff) / 2
    return OscSolution(c1, c2, omega, tau)


def osc_classical(C1: complex, C2: complex, omega: float, t: float) -> complex:
    return C1 * cmath.exp(1j * omega * t) + C2 * cmath.exp(-1j * omega * t)


def osc_sample(sol: OscSolution, steps: int, t0: float = 0.0) -> GridSignal:
    """Grid samples at ``t0 + n*tau`` for ``n < steps``; ``t0`` must be on the lattice."""
    mu_p, mu_m = sol.growth_factors
    k0 = t0 / sol.tau
    n = np.arange(steps)
    values = [sol.C1 * _power(mu_p, k0 + k) + sol.C2 * _power(mu_m, k0 + k) for k in n]
    return GridSignal(t0, sol.tau, values)


def limit_error(tau: float, t: float = 1.0, omega: float = 1.0,
                C1: complex = 1.0, C2: complex = 0.0) -> float:
    """``|x_tau(t) - x_classical(t)|`` for the solution with the given constants."""
    sol = OscSolution(C1, C2, omega, tau)
    return abs(osc_eval(sol, t) - osc_classical(C1, C2, omega, t))


def convergence_table(tau0: float, halvings: int, t: float = 1.0, omega: float = 1.0):
    """Rows ``(tau, error, ratio)`` with tau halved ``halvings`` times from ``tau0``.

    ``ratio`` is the previous error over the current one (nan for the first
    row); first-order convergence shows up as ratios near 2.
    """
    rows = []
    prev = None
    tau = tau0
    for _ in range(halvings + 1):
        err = limit_error(tau, t, omega)
        rows.append((tau, err, prev / err if prev is not None else float("nan")))
        prev = err
        tau /= 2
    return rows
