"""Command-line interface: ``weakpair {rate,sweep,weakvalue,verify}``.

Exit codes: 0 success, 1 usage or I/O error, 2 quadrature failure or
degenerate selection, 3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .report import evaluate_row, format_csv, format_json, metadata, sweep_grid, sweep_rows
from .spinors import DegenerateSelectionError, selected_transition, selection_residual, velocity_operator, weak_value
from .transition import FieldParam, kinematics, transition_probability
from .units import PhysicalInput, UnitRangeError, attach_units, to_A

TOL_ENV = "WEAKPAIR_TOL"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-8
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0.0:
        raise UsageError(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not (math.isfinite(value) and value >= 0.0):
        raise argparse.ArgumentTypeError(f"must be finite and non-negative, got {text}")
    return value


def _dims(text: str) -> list[int]:
    if text == "all":
        return [1, 2, 3]
    if text in ("1", "2", "3"):
        return [int(text)]
    raise argparse.ArgumentTypeError(f"dim must be 1, 2, 3 or all, got {text}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weakpair", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rate = sub.add_parser("rate", help="model and exact coefficients at one field strength")
    rate.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    rate.add_argument("--A", type=_non_negative, help="dimensionless m^2 c^3 / (q eps hbar)")
    rate.add_argument("--sqrtA", type=_non_negative)
    rate.add_argument("--mass", type=float, help="kg (with --charge and --field)")
    rate.add_argument("--charge", type=float, help="C")
    rate.add_argument("--field", type=float, help="V/m")
    rate.add_argument("--tol", type=_positive)
    rate.add_argument("--format", choices=("csv", "json"), default="csv")

    sweep = sub.add_parser("sweep", help="decrease-rate sweep over sqrt(A)")
    sweep.add_argument("--dim", type=_dims, default=[1, 2, 3], help="1, 2, 3 or all")
    sweep.add_argument("--sqrtA-min", dest="sqrt_a_min", type=_positive, default=1e-3)
    sweep.add_argument("--sqrtA-max", dest="sqrt_a_max", type=_positive, default=1.0)
    sweep.add_argument("--points", type=int, default=31)
    sweep.add_argument("--spacing", choices=("log", "linear"), default="log")
    sweep.add_argument("--tol", type=_positive)
    sweep.add_argument("--out", help="output path (default: standard output)")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes")

    wv = sub.add_parser("weakvalue", help="weak velocity and kinematics of one transition")
    wv.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    wv.add_argument("--px", type=float, required=True)
    wv.add_argument("--py", type=float, default=0.0)
    wv.add_argument("--pz", type=float, default=0.0)
    wv.add_argument("--A", type=_non_negative, default=0.0)
    wv.add_argument("--spin-a", type=complex, help="3+1 post-selection coefficient a, e.g. 0.6+0.8j")
    wv.add_argument("--spin-b", type=complex)
    wv.add_argument("--pre-spin-a", type=complex, help="3+1 pre-selection coefficients (default: (b, a))")
    wv.add_argument("--pre-spin-b", type=complex)
    wv.add_argument("--format", choices=("text", "json"), default="text")

    ver = sub.add_parser("verify", help="run the invariant suite")
    mode = ver.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", help="reduced sample sizes (default)")
    mode.add_argument("--full", action="store_true")
    return parser


def _resolve_A(args) -> tuple[float, dict | None]:
    si = [args.mass, args.charge, args.field]
    given = sum(x is not None for x in (args.A, args.sqrtA)) + (any(v is not None for v in si))
    if given != 1:
        raise UsageError("give exactly one of --A, --sqrtA or --mass/--charge/--field")
    if args.A is not None:
        return args.A, None
    if args.sqrtA is not None:
        return args.sqrtA**2, None
    if any(v is None for v in si):
        raise UsageError("--mass, --charge and --field must be given together")
    try:
        inp = PhysicalInput(args.mass, args.charge, args.field)
        return to_A(inp), {"mass_kg": inp.mass, "charge_C": inp.charge, "field_V_per_m": inp.field, "input": inp}
    except (ValueError, UnitRangeError) as exc:
        raise UsageError(str(exc)) from None


def cmd_rate(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    A, si = _resolve_A(args)
    row = evaluate_row(args.dim, math.sqrt(A), tol, A)
    extra = {}
    if si is not None:
        inp = si.pop("input")
        model = attach_units(row.coeff_model, inp, args.dim)
        exact = attach_units(row.coeff_exact, inp, args.dim)
        extra["si_input"] = si
        extra["dimensional_rate"] = {"unit": model.unit, "model": model.value, "exact": exact.value}
    meta = metadata(tol, "rate", extra)
    out = format_json([row], meta) if args.format == "json" else format_csv([row], meta)
    sys.stdout.write(out)
    if row.validity_flag == "beyond_model_validity":
        print(f"warning: A={A:.6g} > 1 is beyond the model's validity", file=sys.stderr)
    if row.failed:
        print(f"error: quadrature failed (error estimate {row.quad_error:.3e})", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_sweep(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    try:
        grid = sweep_grid(args.sqrt_a_min, args.sqrt_a_max, args.points, args.spacing)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = sweep_rows(args.dim, grid, tol, jobs=max(1, args.jobs))
    meta = metadata(
        tol,
        "sweep",
        {
            "dims": args.dim,
            "sqrtA_min": args.sqrt_a_min,
            "sqrtA_max": args.sqrt_a_max,
            "points": args.points,
            "spacing": args.spacing,
        },
    )
    text = format_json(rows, meta) if args.format == "json" else format_csv(rows, meta)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r.failed]
    if failed:
        print(f"error: quadrature failed on {len(failed)} row(s)", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _spin_pair(dim: int, a: complex | None, b: complex | None) -> tuple[complex, complex] | None:
    if a is None and b is None:
        return None
    if dim != 3:
        raise UsageError("spin coefficients apply only to --dim 3")
    pair = (a or 0j, b or 0j)
    if pair == (0j, 0j):
        raise UsageError("spin coefficients must not both vanish")
    return pair


def cmd_weakvalue(args) -> int:
    if not args.px > 0.0:
        raise UsageError("--px must be positive")
    p = (args.px, args.py, args.pz)[: args.dim]
    spin = _spin_pair(args.dim, args.spin_a, args.spin_b)
    pre_spin = _spin_pair(args.dim, args.pre_spin_a, args.pre_spin_b)
    if pre_spin is not None and spin is None:
        spin = (1 + 0j, 0j)
    field = FieldParam(args.A, args.dim)
    kin = kinematics(p, field)
    pre, post = selected_transition(args.dim, p, field.sqrt_a, spin, pre_spin)
    result = weak_value(velocity_operator(args.dim), pre, post)
    if result.degenerate:
        print(f"error: degenerate selection, |<post|pre>| = {abs(result.overlap):.3e}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        residual = selection_residual(args.dim, p, field.sqrt_a, spin, pre_spin)
    except DegenerateSelectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    w = result.value
    fields = {
        "weak_velocity": w.real,
        "weak_velocity_imag": w.imag,
        "expected_velocity": kin.energy / args.px,
        "transition_probability": transition_probability(args.dim, p),
        "transition_time": kin.transition_time,
        "uncertainty_time": kin.uncertainty_time,
        "admitted": kin.admitted,
        "selection_residual": residual,
        "overlap_abs": abs(result.overlap),
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(fields, indent=2) + "\n")
    else:
        for key, value in fields.items():
            text = str(value).lower() if isinstance(value, bool) else format(value, ".12g")
            sys.stdout.write(f"{key}: {text}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    summary = run_checks(full=args.full)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    if not summary["passed"]:
        print("verification failed: " + ", ".join(summary["failed"]), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"rate": cmd_rate, "sweep": cmd_sweep, "weakvalue": cmd_weakvalue, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"weakpair {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
