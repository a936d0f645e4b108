"""Closed-form 2-cycle of the van der Pol equation with a fixed step.

With forward quotients of step ``tau`` the equation

    x'' - lam (1 - x^2) x' + omega^2 x = 0

admits the alternating solution

    x_n = sqrt(P) * sqrt(R) ** (s0 * (-1)**n)

where P = (2 + lam tau) / (lam tau), R is a root of R^2 - 2 Omega R + 1 = 0
and Omega = 1 + omega^2 tau^2 / (2 (2 + lam tau)).  The cycle values are
A = sqrt(P R) and B = sqrt(P / R), so A B = P and A / B = R.

The Cauchy machinery solves for ``tau`` from (x0, v0) and reports all four
(tau root x R root) candidates with recomputed diagnostics.  No candidate is
dropped and none is declared to match the initial data; the diagnostics
show how far each one is from doing so.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    DomainError,
    ExcludedStepError,
    OffGridError,
    PoleError,
    RejectedInitialData,
)
from .oracle import VdpParams, vdp_residual_values

EXCLUSION_TOL = 1e-12
CAUCHY_STEPS = 64

EXCLUSION_MESSAGE = (
    "initial data excluded: the Cauchy problem is posed only for "
    "x0 != 0, x0 != 1 and v0 != 0"
)


def vdp_lambda_capital(p: VdpParams, tau: float) -> float:
    """1 + lam tau + tau^2 omega^2; the closed form needs it nonzero."""
    return 1 + p.lam * tau + tau**2 * p.omega**2


def vdp_excluded_taus(p: VdpParams) -> Tuple[complex, complex]:
    """Both roots of 1 + lam tau + omega^2 tau^2 = 0 (complex when lam^2 < 4 omega^2)."""
    w2 = p.omega**2
    root = cmath.sqrt(p.lam**2 - 4 * w2)
    return (-p.lam + root) / (2 * w2), (-p.lam - root) / (2 * w2)


def vdp_omega_capital(p: VdpParams, tau: float) -> float:
    denom = 2 + p.lam * tau
    if denom == 0:
        raise PoleError(f"2 + lam*tau = 0 at tau={tau!r}")
    return 1 + p.omega**2 * tau**2 / (2 * denom)


@dataclass(frozen=True)
class VdpClosedForm:
    params: VdpParams
    tau: float
    Lambda: float
    Omega: float
    P: complex
    R: complex
    r_branch: int
    phase: int
    t0: float = 0.0

    @property
    def cycle(self) -> Tuple[complex, complex]:
        """``(A, B)``: the values at even and odd steps for phase +1."""
        sp, sr = cmath.sqrt(self.P), cmath.sqrt(self.R)
        return sp * sr, sp / sr

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) <= 1e-12 * max(1.0, abs(v)) for v in self.cycle)

    def sample(self, steps: int) -> np.ndarray:
        return np.array([vdp_eval(self, n) for n in range(steps)], dtype=complex)


def _check_sign(s: int, name: str) -> int:
    if s not in (1, -1):
        raise DomainError(f"{name} must be +1 or -1, got {s!r}")
    return s


def vdp_closed_form(p: VdpParams, tau: float, r_branch: int = 1, phase: int = 1,
                    t0: float = 0.0) -> VdpClosedForm:
    tau = float(tau)
    _check_sign(r_branch, "r_branch")
    _check_sign(phase, "phase")
    if not math.isfinite(tau) or p.lam * tau == 0:
        raise DomainError(f"lam*tau must be finite and nonzero, got tau={tau!r}")
    lam_cap = vdp_lambda_capital(p, tau)
    near_root = any(
        abs(r.imag) <= EXCLUSION_TOL and abs(r.real - tau) <= EXCLUSION_TOL
        for r in vdp_excluded_taus(p)
    )
    if abs(lam_cap) <= EXCLUSION_TOL or near_root:
        raise ExcludedStepError(
            f"tau={tau!r} is excluded: 1 + lam*tau + tau^2*omega^2 = {lam_cap!r} vanishes"
        )
    omega_cap = vdp_omega_capital(p, tau)
    P = complex((2 + p.lam * tau) / (p.lam * tau))
    R = omega_cap + r_branch * cmath.sqrt(omega_cap**2 - 1)
    return VdpClosedForm(p, tau, lam_cap, omega_cap, P, complex(R), r_branch, phase, float(t0))


def vdp_eval(form: VdpClosedForm, n) -> complex:
    """Value at step ``n`` (t = t0 + n tau); ``n`` must be an integer."""
    if isinstance(n, (float, np.floating)):
        if not float(n).is_integer():
            raise OffGridError(f"step index must be an integer, got {n!r}")
        n = int(n)
    elif not isinstance(n, (int, np.integer)):
        raise OffGridError(f"step index must be an integer, got {n!r}")
    a, b = form.cycle
    even = (int(n) % 2 == 0)
    return a if even == (form.phase == 1) else b


def vdp_eval_time(form: VdpClosedForm, t: float, tol: float = 1e-9) -> complex:
    steps = (t - form.t0) / form.tau
    k = round(steps)
    if abs(steps - k) > tol * max(1.0, abs(steps)):
        raise OffGridError(f"t={t!r} is not on the lattice t0 + n*tau")
    return vdp_eval(form, k)


def vdp_case_c_residuals(P: complex, R: complex, p: VdpParams, tau: float) -> Tuple[complex, complex]:
    """The two algebraic equations for odd and even parity, ``(E_minus, E_plus)``."""
    if R == 0:
        raise DomainError("R must be nonzero")
    lt = p.lam * tau
    tail = 2 + lt + tau**2 * p.omega**2
    e_minus = -(2 + lt) * R + lt * P - lt * P / R + tail
    e_plus = -(2 + lt) / R + lt * P - lt * P * R + tail
    return e_minus, e_plus


def vdp_initial_speed(x0: float, p: VdpParams, tau: float) -> float:
    """v0 = (2 + lam tau - x0^2 lam tau) / (x0 lam tau^2) = (P/x0 - x0)/tau."""
    if x0 == 0 or p.lam * tau == 0:
        raise DomainError("initial speed needs x0 != 0 and lam*tau != 0")
    lt = p.lam * tau
    return (2 + lt - x0**2 * lt) / (x0 * lt * tau)


@dataclass(frozen=True)
class CauchyProblem:
    x0: float
    v0: float
    t0: float = 0.0

    def __post_init__(self):
        if self.x0 in (0, 1) or self.v0 == 0:
            raise RejectedInitialData(f"{EXCLUSION_MESSAGE} (got x0={self.x0!r}, v0={self.v0!r})")


def vdp_tau_from_cauchy(cp: CauchyProblem, lam: float) -> Tuple[complex | float, complex | float]:
    """Roots of lam v0 x0 tau^2 + lam (x0^2 - 1) tau - 2 = 0, ``(tau_plus, tau_minus)``."""
    if lam == 0:
        raise DomainError("lam must be nonzero")
    x0, v0 = cp.x0, cp.v0
    lead = 1 / x0 - x0
    disc = (x0 - 1 / x0) ** 2 + 8 * v0 / (lam * x0)
    if disc >= 0:
        root = math.sqrt(disc)
        return (lead + root) / (2 * v0), (lead - root) / (2 * v0)
    root = cmath.sqrt(disc)
    return (lead + root) / (2 * v0), (lead - root) / (2 * v0)


@dataclass
class CauchyCandidate:
    tau_branch: int
    r_branch: int
    tau: complex | float
    form: Optional[VdpClosedForm]
    diagnostics: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def label(self) -> str:
        return ("+" if self.tau_branch > 0 else "-") + ("+" if self.r_branch > 0 else "-")

    @property
    def admissible(self) -> bool:
        return self.form is not None


def _nan_diagnostics(tau, p: VdpParams) -> dict:
    tau_real = isinstance(tau, float)
    return {
        "nlde_residual_max": math.nan,
        "nlde_residual_scaled": math.nan,
        "ic_error_x0": math.nan,
        "ic_error_v0": math.nan,
        "tau_real": tau_real,
        "tau_positive": bool(tau_real and tau > 0),
        "lambda_capital": vdp_lambda_capital(p, tau) if tau_real else math.nan,
        "cycle_real": False,
    }


def _best_phase(form_plus: VdpClosedForm, form_minus: VdpClosedForm, x0: float) -> VdpClosedForm:
    # ties go to phase +1
    e_plus = abs(vdp_eval(form_plus, 0) - x0)
    e_minus = abs(vdp_eval(form_minus, 0) - x0)
    return form_minus if e_minus < e_plus else form_plus


def vdp_cauchy_solve(cp: CauchyProblem, p: VdpParams, steps: int = CAUCHY_STEPS) -> List[CauchyCandidate]:
    """All four candidates ``(tau+, R+), (tau+, R-), (tau-, R+), (tau-, R-)``."""
    taus = vdp_tau_from_cauchy(cp, p.lam)
    out = []
    for tau_branch, tau in zip((1, -1), taus):
        for r_branch in (1, -1):
            cand = CauchyCandidate(tau_branch, r_branch, tau, None, _nan_diagnostics(tau, p))
            if not isinstance(tau, float):
                cand.error = "complex step root"
                out.append(cand)
                continue
            try:
                forms = [vdp_closed_form(p, tau, r_branch, s, cp.t0) for s in (1, -1)]
            except DomainError as exc:
                cand.error = str(exc)
                out.append(cand)
                continue
            form = _best_phase(forms[0], forms[1], cp.x0)
            x = form.sample(steps)
            report = vdp_residual_values(x, p, tau)
            cand.form = form
            cand.diagnostics.update(
                nlde_residual_max=report.max_abs_residual,
                nlde_residual_scaled=report.max_scaled_residual,
                ic_error_x0=float(abs(x[0] - cp.x0)),
                ic_error_v0=float(abs((x[1] - x[0]) / tau - cp.v0)),
                cycle_real=form.is_real,
            )
            out.append(cand)
    return out
