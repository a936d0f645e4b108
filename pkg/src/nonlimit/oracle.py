"""Residual oracle for fixed-step differential equations.

Everything here is built from the forward quotient alone and knows nothing
about the closed forms it is used to check.  Residuals are returned point by
point so that a failing claim can be located, not only detected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .calculus import GridSignal, check_step, forward_difference
from .errors import DomainError, EvaluationError, InsufficientSamplesError


@dataclass(frozen=True)
class VdpParams:
    """Damping ``lam`` and frequency ``omega`` of x'' - lam (1 - x^2) x' + omega^2 x = 0."""

    lam: float
    omega: float

    def __post_init__(self):
        lam, omega = float(self.lam), float(self.omega)
        if not (math.isfinite(lam) and math.isfinite(omega)):
            raise DomainError("van der Pol parameters must be finite")
        if omega <= 0:
            raise DomainError(f"omega must be > 0, got {omega!r}")
        if lam == 0:
            raise DomainError("lam must be nonzero")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "omega", omega)


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise residuals.

    ``scale`` is the largest magnitude among the terms that were summed to
    form any residual; ``max_scaled_residual`` divides by ``max(1, scale)``
    so that exponentially growing fields can be judged at a fixed tolerance.
    """

    max_abs_residual: float
    argmax_index: int
    per_point: Tuple[float, ...]
    scale: float = 1.0

    @property
    def max_scaled_residual(self) -> float:
        return self.max_abs_residual / max(1.0, self.scale)

    def within(self, tol: float) -> bool:
        return self.max_scaled_residual <= tol


def _report(residual: np.ndarray, *terms: np.ndarray) -> ResidualReport:
    mags = np.abs(residual).reshape(-1)
    if not np.all(np.isfinite(mags)):
        raise EvaluationError("residual evaluation produced non-finite values")
    idx = int(np.argmax(mags))
    scale = max([1.0] + [float(np.max(np.abs(term))) for term in terms if np.size(term)])
    return ResidualReport(float(mags[idx]), idx, tuple(float(m) for m in mags), scale)


def vdp_step(x_n: complex, x_n1: complex, p: VdpParams, tau: float) -> complex:
    """Next sample ``x_{n+2}`` that zeroes the residual at step ``n``."""
    x_n, x_n1 = complex(x_n), complex(x_n1)
    if not (np.isfinite(x_n) and np.isfinite(x_n1)):
        raise EvaluationError("vdp_step needs finite inputs")
    return (
        2 * x_n1
        - x_n
        + p.lam * tau * (1 - x_n**2) * (x_n1 - x_n)
        - p.omega**2 * tau**2 * x_n
    )


def vdp_iterate(x0: complex, x1: complex, p: VdpParams, tau: float, n: int) -> np.ndarray:
    """Iterate :func:`vdp_step` from two seeds to ``n`` samples."""
    out = np.empty(max(n, 2), dtype=complex)
    out[0], out[1] = x0, x1
    for k in range(2, n):
        out[k] = vdp_step(out[k - 2], out[k - 1], p, tau)
    return out[:n]


def vdp_residual_values(values, p: VdpParams, tau: float) -> ResidualReport:
    """Residual of raw samples with a signed, nonzero step."""
    x = np.asarray(values, dtype=complex)
    if x.size < 3:
        raise InsufficientSamplesError("van der Pol residual needs at least 3 samples")
    dx = forward_difference(x, tau)
    ddx = forward_difference(dx, tau)
    xn = x[:-2]
    damping = p.lam * (1 - xn**2) * dx[:-1]
    spring = p.omega**2 * xn
    residual = ddx - damping + spring
    # largest individual contributions: x_{n+k}/tau^2 and the damping pieces
    return _report(residual, x / tau**2, damping, p.lam * xn**2 * x[1:-1] / tau, spring)


def vdp_residual(x: GridSignal, p: VdpParams) -> ResidualReport:
    return vdp_residual_values(x.values, p, x.tau)


def oscillator_residual(x: GridSignal, omega: float) -> ResidualReport:
    if len(x) < 3:
        raise InsufficientSamplesError("oscillator residual needs at least 3 samples")
    ddx = forward_difference(forward_difference(x.values, x.tau), x.tau)
    spring = omega**2 * x.values[:-2]
    return _report(ddx + spring, x.values / x.tau**2, spring)


def heat_residual(u, tau: float, beta: float) -> ResidualReport:
    """Residual of u_t - beta u_yy on a field ``u[m, n]`` (m: time, n: space).

    ``per_point`` is the flattened (row-major) residual of shape
    ``(M - 1, N - 2)``; ``argmax_index`` indexes that flattening.
    """
    tau = check_step(tau)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] < 2 or u.shape[1] < 3:
        raise InsufficientSamplesError("heat residual needs a grid of at least 2 x 3")
    ut = forward_difference(u, tau)[:, :-2]
    uyy = forward_difference(forward_difference(u.T, tau), tau).T[:-1, :]
    return _report(ut - beta * uyy, u / tau, beta * u / tau**2)
