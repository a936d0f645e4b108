"""Heat equation u_t = alpha u_xx on a fixed-step lattice.

With time step ``tau`` and space step ``xi``, rescaling y = (tau/xi) x gives
u_t = beta u_yy with beta = alpha tau^2 / xi^2 and equal steps in t and y.
The two-constant family

    u(t, y) = C1 + C4 gamma^(t/tau + y/tau),   gamma = tau/beta + 1

solves the lattice equation exactly.  Its step -> 0 family
C1 + C4 exp(k^2 t / alpha) exp(k x / alpha) reproduces each sine mode of the
classical Fourier series as an imaginary part when k = i alpha pi n / l.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .calculus import check_step
from .errors import DomainError, EvaluationError


@dataclass(frozen=True)
class HeatParams:
    alpha: float
    tau: float
    xi: float
    C1: complex = 0.0
    C4: complex = 1.0

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha!r}")
        check_step(self.tau)
        check_step(self.xi)

    @property
    def beta(self) -> float:
        return heat_beta(self)

    @property
    def gamma(self) -> float:
        """Growth per step, tau/beta + 1 (equivalently xi^2/(alpha tau) + 1)."""
        return self.tau / self.beta + 1


@dataclass(frozen=True)
class FourierSpec:
    l: float
    phi: Callable[[np.ndarray], np.ndarray]
    n_modes: int
    quadrature_points: int = 256

    def __post_init__(self):
        if not self.l > 0:
            raise DomainError(f"rod length must be > 0, got {self.l!r}")
        if self.n_modes < 1:
            raise DomainError("n_modes must be >= 1")
        if self.quadrature_points < 16:
            raise DomainError("quadrature_points must be >= 16")


def heat_beta(p: HeatParams) -> float:
    return p.alpha * p.tau**2 / p.xi**2


def heat_characteristic_roots(beta: float) -> Tuple[float, float]:
    """Roots of lam - beta lam^2 = 0."""
    if beta == 0:
        raise DomainError("beta must be nonzero")
    return 0.0, 1.0 / beta


def _gamma_pow(gamma: float, steps: float) -> complex:
    k = round(steps)
    if abs(steps - k) <= 1e-9 * max(1.0, abs(steps)):
        return complex(gamma**k)
    return complex(gamma**steps)


def heat_eval_ty(p: HeatParams, t: float, y: float) -> complex:
    return p.C1 + p.C4 * _gamma_pow(p.gamma, t / p.tau + y / p.tau)


def heat_eval_tx(p: HeatParams, t: float, x: float) -> complex:
    base = p.xi**2 / (p.alpha * p.tau) + 1
    return p.C1 + p.C4 * _gamma_pow(base, t / p.tau + x / p.xi)


def heat_grid(p: HeatParams, nt: int, ny: int, c2: complex = 0.0, c3: complex = 0.0) -> np.ndarray:
    """Field ``u[m, n]`` at t = m tau, y = n tau.

    ``c2`` and ``c3`` add the y-only and t-only exponential terms of the
    four-term ansatz; they are zero for actual solutions and exist so that
    their incompatibility with the equation can be demonstrated.
    """
    m = np.arange(nt)[:, None]
    n = np.arange(ny)[None, :]
    g = p.gamma
    u = p.C1 + p.C4 * g ** (m + n) + c2 * g**n + c3 * g**m
    return np.asarray(u, dtype=complex)


def heat_limit_eval(alpha: float, k: complex, C1: complex, C4: complex, t: float, x: float) -> complex:
    """C1 + C4 exp(k^2 t / alpha) exp(k x / alpha)."""
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    return C1 + C4 * cmath.exp(k * k * t / alpha) * cmath.exp(k * x / alpha)


def fourier_coefficients(spec: FourierSpec) -> np.ndarray:
    """Sine coefficients (2/l) int_0^l phi(s) sin(pi n s / l) ds, n = 1..n_modes.

    Composite Simpson rule on ``quadrature_points`` panels.
    """
    from scipy.integrate import simpson  # deferred: slow import, only needed here

    panels = spec.quadrature_points + spec.quadrature_points % 2
    s = np.linspace(0.0, spec.l, panels + 1)
    f = np.asarray(spec.phi(s), dtype=float) * np.ones_like(s)
    if not np.all(np.isfinite(f)):
        raise EvaluationError("initial profile has non-finite samples")
    n = np.arange(1, spec.n_modes + 1)[:, None]
    integrand = f[None, :] * np.sin(np.pi * n * s[None, :] / spec.l)
    return 2.0 / spec.l * simpson(integrand, x=s, axis=1)


def heat_classical_series(spec: FourierSpec, alpha: float, t: float, x: float,
                          coefficients: np.ndarray | None = None) -> float:
    a = fourier_coefficients(spec) if coefficients is None else coefficients
    total = 0.0
    for n, a_n in enumerate(a, start=1):
        w = math.pi * n / spec.l
        total += a_n * math.sin(w * x) * math.exp(-alpha * w * w * t)
    return total


def mode_wavenumber(alpha: float, n: int, l: float) -> complex:
    return 1j * alpha * math.pi * n / l


def heat_mode_sum_im(spec: FourierSpec, alpha: float, t: float, x: float,
                     coefficients: np.ndarray | None = None) -> float:
    """Imaginary part of the sum of limit-family modes with k_n = i alpha pi n / l."""
    a = fourier_coefficients(spec) if coefficients is None else coefficients
    total = 0j
    for n, a_n in enumerate(a, start=1):
        total += heat_limit_eval(alpha, mode_wavenumber(alpha, n, spec.l), 0.0, a_n, t, x)
    return total.imag
