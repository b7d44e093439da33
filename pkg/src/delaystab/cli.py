"""Command-line front end: machine-readable analyses of the delay loop.

Subcommands
-----------
roots     characteristic roots and regime as JSON
sweep     regime table over a k*tau range as CSV
simulate  exact trajectory samples as CSV
curves    the intersection-picture curves as CSV
critical  the threshold gains for a given delay as JSON

All numeric output uses the shortest representation that round-trips a
double.  Data goes to stdout, diagnostics to stderr.  Exit codes: 0 on
success, 1 on numerical failure, 2 on usage errors.  Values that begin
with a dash (negative spans such as ``-4:0``) must be passed in the
``--range=-4:0`` form.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import charroots, graphical, simulator
from .charroots import Regime, SystemParams
from .graphical import Curve
from .lambertw import ConvergenceError

__all__ = ["main", "SweepRow"]

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_FIT_COMMENT_MIN_DELAYS = 10   # simulate appends the fit comment past this horizon


@dataclass(frozen=True)
class SweepRow:
    """One grid point of the dimensionless sweep (rates scaled by tau)."""

    k_tau: float
    a: float
    b: float
    regime: Regime


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _fail_numerical(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_NUMERICAL


def _emit_csv(header: str, rows) -> None:
    out = [header]
    out.extend(rows)
    print("\n".join(out))


def cmd_roots(args: argparse.Namespace) -> int:
    if args.tau <= 0 or not math.isfinite(args.tau):
        return _fail_usage("tau must be positive")
    if args.k < 0 or not math.isfinite(args.k):
        return _fail_usage("k must be >= 0")
    if args.branches < 1:
        return _fail_usage("--branches must be >= 1")
    try:
        params = SystemParams(k=args.k, tau=args.tau)
        roots = charroots.characteristic_roots(params, args.branches)
        report = charroots.classify(params)
    except ValueError as exc:
        return _fail_usage(str(exc))
    except (ConvergenceError, RuntimeError) as exc:
        return _fail_numerical(str(exc))
    document = {
        "k": params.k,
        "tau": params.tau,
        "k_tau": params.k_tau,
        "roots": [
            {
                "branch": r.branch,
                "re": r.lam.real,
                "im": r.lam.imag,
                "residual": r.residual,
            }
            for r in roots
        ],
        "regime": report.regime.value,
    }
    print(json.dumps(document, indent=2))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.tau <= 0 or not math.isfinite(args.tau):
        return _fail_usage("tau must be positive")
    if not (
        math.isfinite(args.k_tau_min)
        and math.isfinite(args.k_tau_max)
        and 0 < args.k_tau_min < args.k_tau_max
    ):
        return _fail_usage("need 0 < k-tau-min < k-tau-max")
    if args.steps < 2:
        return _fail_usage("--steps must be >= 2")
    tau = args.tau
    span = args.k_tau_max - args.k_tau_min
    rows = []
    try:
        for i in range(args.steps):
            kt = args.k_tau_min + span * i / (args.steps - 1)
            report = charroots.classify(SystemParams(k=kt / tau, tau=tau))
            row = SweepRow(
                k_tau=kt,
                a=report.dominant.lam.real * tau,
                b=report.dominant.lam.imag * tau,
                regime=report.regime,
            )
            rows.append(f"{row.k_tau!r},{row.a!r},{row.b!r},{row.regime.value}")
    except (ConvergenceError, RuntimeError) as exc:
        return _fail_numerical(str(exc))
    _emit_csv("k_tau,a_tau,b_tau,regime", rows)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.tau <= 0 or not math.isfinite(args.tau):
        return _fail_usage("tau must be positive")
    if args.k < 0 or not math.isfinite(args.k):
        return _fail_usage("k must be >= 0")
    if not math.isfinite(args.theta0):
        return _fail_usage("theta0 must be finite")
    if not (math.isfinite(args.horizon) and args.horizon > 0):
        return _fail_usage("horizon must be positive")
    if not (math.isfinite(args.dt_out) and 0 < args.dt_out <= args.horizon):
        return _fail_usage("dt-out must satisfy 0 < dt-out <= horizon")
    try:
        params = SystemParams(k=args.k, tau=args.tau)
        traj = simulator.simulate(params, args.theta0, args.horizon)
    except simulator.HorizonCapError as exc:
        return _fail_numerical(str(exc))
    except ValueError as exc:
        return _fail_usage(str(exc))
    n_steps = int(math.floor(args.horizon / args.dt_out + 1e-9))
    rows = []
    for i in range(n_steps + 1):
        t = min(i * args.dt_out, args.horizon)
        rows.append(f"{t!r},{simulator.sample(traj, t)!r}")
    if args.horizon >= _FIT_COMMENT_MIN_DELAYS * args.tau:
        dominant = charroots.dominant_root(params)
        try:
            fit_a, fit_b = simulator.fit_decay_rate(
                traj, 5.0 * args.tau, args.horizon
            )
        except ValueError:
            pass  # e.g. identically zero signal: samples stay valid, no fit
        else:
            rows.append(
                f"# fitted_a={fit_a!r} fitted_b={fit_b!r} "
                f"dominant_a={dominant.lam.real!r} dominant_b={dominant.lam.imag!r}"
            )
    _emit_csv("t,theta", rows)
    return EXIT_OK


def cmd_curves(args: argparse.Namespace) -> int:
    if args.tau <= 0 or not math.isfinite(args.tau):
        return _fail_usage("tau must be positive")
    if args.k < 0 or not math.isfinite(args.k):
        return _fail_usage("k must be >= 0")
    if args.grid < 2:
        return _fail_usage("--grid must be >= 2")
    span = None
    if args.range is not None:
        try:
            lo_text, hi_text = args.range.split(":", 1)
            span = (float(lo_text), float(hi_text))
        except ValueError:
            return _fail_usage(f"--range must look like lo:hi, got {args.range!r}")
        if not (math.isfinite(span[0]) and math.isfinite(span[1]) and span[0] < span[1]):
            return _fail_usage("--range must be a finite increasing pair")
    try:
        params = SystemParams(k=args.k, tau=args.tau)
        segments = graphical.curve_data(
            Curve(args.which), params, args.grid, span=span
        )
    except ValueError as exc:
        return _fail_usage(str(exc))
    rows = []
    for index, segment in enumerate(segments):
        if index:
            rows.append("")  # blank line marks a branch break
        rows.extend(f"{x!r},{y!r}" for x, y in segment)
    _emit_csv("x,y", rows)
    return EXIT_OK


def cmd_critical(args: argparse.Namespace) -> int:
    if not (math.isfinite(args.tau) and args.tau > 0):
        return _fail_usage("tau must be positive")
    document = {
        "tau": args.tau,
        "k_critical": charroots.critical_gain(args.tau),
        "k_marginal": charroots.marginal_gain(args.tau),
        "a_fastest": graphical.fastest_decay(args.tau),
    }
    print(json.dumps(document, indent=2))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delaystab",
        description=(
            "Analyses of the delayed feedback loop dtheta/dt = -k theta(t - tau)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_roots = sub.add_parser("roots", help="characteristic roots as JSON")
    p_roots.add_argument("--k", type=float, required=True, help="feedback gain (>= 0)")
    p_roots.add_argument("--tau", type=float, required=True, help="delay (> 0)")
    p_roots.add_argument(
        "--branches",
        type=int,
        default=2,
        help="number of branch roots (default 2: both real branches)",
    )
    p_roots.set_defaults(handler=cmd_roots)

    p_sweep = sub.add_parser("sweep", help="regime sweep over k*tau as CSV")
    p_sweep.add_argument("--k-tau-min", type=float, required=True)
    p_sweep.add_argument("--k-tau-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument(
        "--tau", type=float, default=1.0, help="reference delay (default 1)"
    )
    p_sweep.set_defaults(handler=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="exact trajectory samples as CSV")
    p_sim.add_argument("--k", type=float, required=True)
    p_sim.add_argument("--tau", type=float, required=True)
    p_sim.add_argument("--theta0", type=float, default=1.0)
    p_sim.add_argument("--horizon", type=float, required=True)
    p_sim.add_argument("--dt-out", type=float, required=True)
    p_sim.set_defaults(handler=cmd_simulate)

    p_curves = sub.add_parser("curves", help="intersection-picture curves as CSV")
    p_curves.add_argument(
        "--which", choices=[c.value for c in Curve], required=True
    )
    p_curves.add_argument("--k", type=float, default=1.0)
    p_curves.add_argument("--tau", type=float, default=1.0)
    p_curves.add_argument("--grid", type=int, default=1024)
    p_curves.add_argument(
        "--range",
        default=None,
        help="abscissa span lo:hi (use --range=-4:0 for negative bounds)",
    )
    p_curves.set_defaults(handler=cmd_curves)

    p_crit = sub.add_parser("critical", help="threshold gains as JSON")
    p_crit.add_argument("--tau", type=float, required=True)
    p_crit.set_defaults(handler=cmd_critical)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
