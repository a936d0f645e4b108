"""Command-line front end.

usage:
  nonlimit rules-check [--seed N] [--trials N]
  nonlimit deriv (--expr EXPR --t T | --values V1,V2,...) --tau TAU
  nonlimit osc --omega W --tau TAU --x0 X0 --v0 V0 [--steps N] [--convergence]
  nonlimit heat --alpha A --tau TAU --xi XI [--C1 C] [--C4 C] [--nt N] [--ny N]
                [--series --l L --phi EXPR --n-modes N]
  nonlimit vdp --lam L --omega W (--x0 X0 --v0 V0 | --tau TAU)

Every command takes ``--format {csv,json}`` and ``--out PATH`` (default
stdout).  CSV is the table alone with a fixed header; JSON holds inputs,
outputs, diagnostics and the same table, keys sorted.  ``--report PATH``
additionally writes the JSON report when the main output is CSV.

Exit status: 0 on success, 1 when a tolerance check fails, 2 when the input
is rejected.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Callable, Dict, List, Optional

import numpy as np

from . import __version__
from .calculus import (
    IDENTITY_TOL,
    GridSignal,
    check_rules,
    nl_derivative,
    nl_derivative_grid,
    nl_differential,
    nl_second_derivative,
)
from .errors import NonLimitError, RejectedInitialData
from .heat import (
    FourierSpec,
    HeatParams,
    fourier_coefficients,
    heat_classical_series,
    heat_grid,
    heat_mode_sum_im,
)
from .oracle import VdpParams, heat_residual, oscillator_residual, vdp_residual_values
from .oscillator import convergence_table, osc_classical, osc_fit, osc_sample
from .report import RunReport, split_complex
from .vanderpol import (
    CAUCHY_STEPS,
    CauchyProblem,
    vdp_cauchy_solve,
    vdp_closed_form,
)

RESIDUAL_TOL = 1e-10
SERIES_TOL = 1e-10
CONVERGENCE_RATIO = (2.0, 0.05)

EXIT_OK, EXIT_TOLERANCE, EXIT_REJECTED = 0, 1, 2

_EXPR_NAMES = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "abs", "pi", "e")
}


def compile_expr(expr: str, var: str) -> Callable:
    """Compile an arithmetic expression in one variable using numpy functions only."""
    code = compile(expr, "<expr>", "eval")
    for name in code.co_names:
        if name != var and name not in _EXPR_NAMES:
            raise NonLimitError(f"unknown name {name!r} in expression {expr!r}")
    return lambda v: eval(code, {"__builtins__": {}}, {**_EXPR_NAMES, var: v})


# -- commands ---------------------------------------------------------------


def cmd_rules_check(args) -> tuple[RunReport, bool]:
    errors = check_rules(args.seed, args.trials)
    rows = [
        {"rule": name, "max_error": err, "tolerance": IDENTITY_TOL, "pass": err <= IDENTITY_TOL}
        for name, err in errors.items()
    ]
    ok = all(r["pass"] for r in rows)
    report = RunReport(
        "rules-check", __version__,
        inputs={"seed": args.seed, "trials": args.trials},
        outputs={"max_error": errors},
        diagnostics={"all_pass": ok, "tolerance": IDENTITY_TOL},
        columns=("rule", "max_error", "tolerance", "pass"),
        rows=rows,
    )
    return report, ok


def cmd_deriv(args) -> tuple[RunReport, bool]:
    if args.values is not None:
        values = [complex(v) for v in args.values.split(",")]
        sig = GridSignal(args.t0, args.tau, values)
        d = nl_derivative_grid(sig)
        rows = []
        for n, t in enumerate(sig.times):
            row = {"n": n, "t": t, **split_complex("x", sig.values[n])}
            if n < len(d):
                row.update(split_complex("dx", d.values[n]))
            rows.append(row)
        columns = ("n", "t", "x_re", "x_im", "dx_re", "dx_im")
        inputs = {"values": args.values, "tau": args.tau, "t0": args.t0}
        outputs = {"derivative": [complex(v) for v in d.values]}
    else:
        f = compile_expr(args.expr, "t")
        d1 = nl_derivative(f, args.t, args.tau)
        d2 = nl_second_derivative(f, args.t, args.tau)
        dd = nl_differential(f, args.t, args.tau)
        rows = [{"t": args.t, "tau": args.tau, **split_complex("derivative", d1),
                 **split_complex("second", d2), **split_complex("differential", dd)}]
        columns = ("t", "tau", "derivative_re", "derivative_im", "second_re", "second_im",
                   "differential_re", "differential_im")
        inputs = {"expr": args.expr, "t": args.t, "tau": args.tau}
        outputs = {"derivative": d1, "second_derivative": d2, "differential": dd}
    return RunReport("deriv", __version__, inputs, outputs, {}, columns, rows), True


def cmd_osc(args) -> tuple[RunReport, bool]:
    inputs = {"omega": args.omega, "tau": args.tau, "x0": args.x0, "v0": args.v0,
              "steps": args.steps}
    if args.convergence:
        table = convergence_table(args.tau, args.halvings, args.t, args.omega)
        target, rel = CONVERGENCE_RATIO
        rows = [{"tau": tau, "error": err, "ratio": ratio} for tau, err, ratio in table]
        ratios = [r for _, _, r in table[1:]]
        ok = all(abs(r - target) <= rel * target for r in ratios)
        inputs.update(t=args.t, halvings=args.halvings)
        return RunReport(
            "osc", __version__, inputs,
            outputs={"ratios": ratios},
            diagnostics={"ratio_target": target, "ratio_rel_tol": rel, "all_pass": ok},
            columns=("tau", "error", "ratio"), rows=rows,
        ), ok

    sol = osc_fit(args.x0, args.v0, args.omega, args.tau)
    sig = osc_sample(sol, args.steps)
    res = oscillator_residual(sig, args.omega)
    rows = []
    for n, t in enumerate(sig.times):
        classical = osc_classical(sol.C1, sol.C2, args.omega, t)
        rows.append({
            "n": n, "t": t, **split_complex("x", sig.values[n]),
            "residual": res.per_point[n] if n < len(res.per_point) else None,
            **split_complex("classical", classical),
            "abs_error": abs(sig.values[n] - classical),
        })
    ok = res.within(RESIDUAL_TOL)
    report = RunReport(
        "osc", __version__, inputs,
        outputs={"C1": sol.C1, "C2": sol.C2, "growth_factors": list(sol.growth_factors)},
        diagnostics={"residual_max": res.max_abs_residual, "residual_scaled": res.max_scaled_residual,
                     "residual_argmax": res.argmax_index, "tolerance": RESIDUAL_TOL, "all_pass": ok},
        columns=("n", "t", "x_re", "x_im", "residual", "classical_re", "classical_im", "abs_error"),
        rows=rows,
    )
    return report, ok


def cmd_heat(args) -> tuple[RunReport, bool]:
    p = HeatParams(args.alpha, args.tau, args.xi, args.C1, args.C4)
    u = heat_grid(p, args.nt, args.ny)
    res = heat_residual(u, p.tau, p.beta)
    inputs = {"alpha": args.alpha, "tau": args.tau, "xi": args.xi, "C1": args.C1, "C4": args.C4,
              "nt": args.nt, "ny": args.ny}
    diagnostics: Dict[str, object] = {
        "residual_max": res.max_abs_residual, "residual_scaled": res.max_scaled_residual,
        "residual_argmax": res.argmax_index, "tolerance": RESIDUAL_TOL,
    }
    outputs: Dict[str, object] = {"beta": p.beta, "gamma": p.gamma}
    ok = res.within(RESIDUAL_TOL)

    if args.series:
        phi = compile_expr(args.phi, "x")
        spec = FourierSpec(args.l, phi, args.n_modes, args.quadrature_points)
        coeffs = fourier_coefficients(spec)
        rng = np.random.default_rng(args.seed)
        rows = []
        worst = 0.0
        for _ in range(args.points):
            t = float(rng.uniform(0.0, args.t_max))
            x = float(rng.uniform(0.0, args.l))
            classical = heat_classical_series(spec, args.alpha, t, x, coeffs)
            modes = heat_mode_sum_im(spec, args.alpha, t, x, coeffs)
            diff = abs(modes - classical)
            worst = max(worst, diff)
            rows.append({"t": t, "x": x, "classical": classical, "mode_sum_im": modes, "abs_diff": diff})
        series_ok = worst <= SERIES_TOL
        ok = ok and series_ok
        inputs.update(l=args.l, phi=args.phi, n_modes=args.n_modes, points=args.points,
                      seed=args.seed, t_max=args.t_max, quadrature_points=args.quadrature_points)
        outputs["fourier_coefficients"] = list(coeffs)
        diagnostics.update(series_max_abs_diff=worst, series_tolerance=SERIES_TOL)
        columns = ("t", "x", "classical", "mode_sum_im", "abs_diff")
    else:
        rows = []
        interior = np.array(res.per_point).reshape(args.nt - 1, args.ny - 2)
        for m in range(args.nt):
            for n in range(args.ny):
                y = n * p.tau
                rows.append({
                    "m": m, "n": n, "t": m * p.tau, "y": y, "x": y * p.xi / p.tau,
                    **split_complex("u", u[m, n]),
                    "residual": interior[m, n] if m < args.nt - 1 and n < args.ny - 2 else None,
                })
        columns = ("m", "n", "t", "y", "x", "u_re", "u_im", "residual")
    diagnostics["all_pass"] = ok
    return RunReport("heat", __version__, inputs, outputs, diagnostics, columns, rows), ok


VDP_COLUMNS = (
    "label", "tau_re", "tau_im", "Lambda", "Omega", "P_re", "P_im", "R_re", "R_im",
    "A_re", "A_im", "B_re", "B_im", "phase", "residual_max", "residual_scaled",
    "ic_error_x0", "ic_error_v0", "tau_real", "tau_positive", "cycle_real", "status",
)


def _form_row(label: str, tau, form, diag: dict, status: str) -> dict:
    row = {"label": label, **split_complex("tau", tau), "status": status}
    row.update({k: diag.get(k) for k in ("tau_real", "tau_positive", "cycle_real")})
    row.update(residual_max=diag.get("nlde_residual_max"), residual_scaled=diag.get("nlde_residual_scaled"),
               ic_error_x0=diag.get("ic_error_x0"), ic_error_v0=diag.get("ic_error_v0"),
               Lambda=diag.get("lambda_capital"))
    if form is not None:
        a, b = form.cycle
        row.update(Omega=form.Omega, phase=form.phase, **split_complex("P", form.P),
                   **split_complex("R", form.R), **split_complex("A", a), **split_complex("B", b))
    return row


def cmd_vdp(args) -> tuple[RunReport, bool]:
    p = VdpParams(args.lam, args.omega)
    inputs = {"lam": args.lam, "omega": args.omega, "steps": args.steps}
    if args.tau is not None:
        form = vdp_closed_form(p, args.tau, args.r_branch, args.phase)
        x = form.sample(args.steps)
        res = vdp_residual_values(x, p, args.tau)
        diag = {"nlde_residual_max": res.max_abs_residual, "nlde_residual_scaled": res.max_scaled_residual,
                "tau_real": True, "tau_positive": args.tau > 0, "cycle_real": form.is_real,
                "lambda_capital": form.Lambda}
        inputs.update(tau=args.tau, r_branch=args.r_branch, phase=args.phase)
        ok = res.within(RESIDUAL_TOL)
        rows = [_form_row("given", args.tau, form, diag, "ok")]
        return RunReport("vdp", __version__, inputs, {"candidates": rows},
                         {"tolerance": RESIDUAL_TOL, "all_pass": ok}, VDP_COLUMNS, rows), ok

    if args.x0 is None or args.v0 is None:
        raise NonLimitError("vdp needs either --tau or both --x0 and --v0")
    cp = CauchyProblem(args.x0, args.v0)
    inputs.update(x0=args.x0, v0=args.v0)
    cands = vdp_cauchy_solve(cp, p, args.steps)
    rows = [_form_row(c.label, c.tau, c.form, c.diagnostics, c.error or "ok") for c in cands]
    admissible = [c for c in cands if c.admissible]
    ok = all(c.diagnostics["nlde_residual_scaled"] <= RESIDUAL_TOL for c in admissible)
    diagnostics = {
        "tolerance": RESIDUAL_TOL, "all_pass": ok, "admissible": len(admissible),
        "min_ic_error_x0": min((c.diagnostics["ic_error_x0"] for c in admissible), default=math.nan),
        "min_ic_error_v0": min((c.diagnostics["ic_error_v0"] for c in admissible), default=math.nan),
    }
    return RunReport("vdp", __version__, inputs, {"candidates": rows}, diagnostics, VDP_COLUMNS, rows), ok


# -- parser -----------------------------------------------------------------


def _add_output(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-", help="output path (default: stdout)")
    sp.add_argument("--report", default=None, help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonlimit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rules-check", help="randomized check of the calculus identities")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--trials", type=int, default=100)
    _add_output(sp)

    sp = sub.add_parser("deriv", help="fixed-step derivative of an expression or samples")
    sp.add_argument("--expr", help="expression in t, e.g. 't**2'")
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--values", help="comma-separated samples, complex allowed")
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--tau", type=float, required=True)
    _add_output(sp)

    sp = sub.add_parser("osc", help="free oscillator closed form")
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--x0", type=complex, default=1 + 0j)
    sp.add_argument("--v0", type=complex, default=0j)
    sp.add_argument("--steps", type=int, default=64)
    sp.add_argument("--convergence", action="store_true", help="tabulate the error as tau is halved")
    sp.add_argument("--halvings", type=int, default=6)
    sp.add_argument("--t", type=float, default=1.0, help="comparison time for --convergence")
    _add_output(sp)

    sp = sub.add_parser("heat", help="heat equation closed form and series bridge")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--xi", type=float, required=True)
    sp.add_argument("--C1", type=complex, default=0j)
    sp.add_argument("--C4", type=complex, default=1 + 0j)
    sp.add_argument("--nt", type=int, default=32)
    sp.add_argument("--ny", type=int, default=32)
    sp.add_argument("--series", action="store_true", help="compare mode sum with the classical series")
    sp.add_argument("--l", type=float, default=1.0)
    sp.add_argument("--phi", default="sin(pi*x)", help="initial profile, expression in x")
    sp.add_argument("--n-modes", type=int, default=20)
    sp.add_argument("--quadrature-points", type=int, default=256)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--t-max", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    _add_output(sp)

    sp = sub.add_parser("vdp", help="van der Pol 2-cycle and Cauchy candidates")
    sp.add_argument("--lam", type=float, required=True)
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--x0", type=float)
    sp.add_argument("--v0", type=float)
    sp.add_argument("--tau", type=float, help="evaluate the closed form at this step directly")
    sp.add_argument("--r-branch", type=int, choices=(1, -1), default=1)
    sp.add_argument("--phase", type=int, choices=(1, -1), default=1)
    sp.add_argument("--steps", type=int, default=CAUCHY_STEPS)
    _add_output(sp)
    return parser


COMMANDS = {
    "rules-check": cmd_rules_check,
    "deriv": cmd_deriv,
    "osc": cmd_osc,
    "heat": cmd_heat,
    "vdp": cmd_vdp,
}


def _validate(parser: argparse.ArgumentParser, args) -> None:
    sp_error = parser.error  # exits with status 2
    if args.command == "rules-check" and args.trials < 1:
        sp_error("--trials must be >= 1")
    if args.command == "deriv" and (args.expr is None) == (args.values is None):
        sp_error("deriv needs exactly one of --expr or --values")
    if args.command == "osc" and args.steps < 3:
        sp_error("--steps must be >= 3")
    if args.command == "heat" and (args.nt < 2 or args.ny < 3):
        sp_error("heat grid must be at least 2 x 3 (--nt >= 2, --ny >= 3)")
    if args.command == "vdp" and args.steps < 3:
        sp_error("--steps must be >= 3")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        report, ok = COMMANDS[args.command](args)
    except RejectedInitialData as exc:
        print(f"nonlimit {args.command}: rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except NonLimitError as exc:
        print(f"nonlimit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    _write(args.out, report.render(args.format))
    if args.report:
        _write(args.report, report.to_json())
    if not ok:
        print(f"nonlimit {args.command}: tolerance check failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
