"""Command-line front end.

Subcommands: ``solve``, ``profile``, ``sweep``, ``verify`` and
``export-tables``.  Data goes to stdout, diagnostics to stderr.  Exit status
is 0 on success, 1 when the solver (or a verification case) fails and 2 on
a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal

from . import reference
from .continuation import SolverConfig, StepFailure, evaluate_at, march
from .series import DEFAULT_TERMS, FlowParams
from .shooting import Branch, NotReached, eta_infinity, solve_alpha
from .tiers import Tier, default_tier_name, get_tier

DEFAULT_TAU = 5e-7


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# number formatting


def _fmt(x, tier: Tier) -> str:
    """Scientific notation with the tier's digit count and a signed exponent."""
    n = tier.sig_digits - 1
    if isinstance(x, Decimal):
        if x.is_zero():
            # a Decimal zero keeps its exponent ("0E-32"); print it like a float zero
            return ("-" if x.is_signed() else "") + format(0.0, f".{n}e")
        mantissa, exp = format(x, f".{n}e").split("e")
        return f"{mantissa}e{int(exp):+03d}"
    return format(float(x), f".{n}e")


def _json(obj, tier: Tier, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, (float, Decimal)):
        if isinstance(obj, float) and obj != obj:
            return "null"
        return _fmt(obj, tier)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(f'{pad}  {json.dumps(k)}: {_json(v, tier, indent + 1)}' for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(pad + "  " + _json(v, tier, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v, tier: Tier) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, Decimal)):
        return _fmt(v, tier)
    return str(v)


def _csv(rows: list[dict], tier: Tier) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([_cell(v, tier) for v in r.values()])
    return buf.getvalue()


def _table(rows: list[dict], tier: Tier) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_cell(r[c], tier) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _emit(rows, fmt: str, tier: Tier, out, single: bool = False) -> None:
    if fmt == "json":
        out.write(_json(rows[0] if single else rows, tier) + "\n")
    elif fmt == "csv":
        out.write(_csv(rows, tier))
    else:
        out.write(_table(rows, tier))


# ---------------------------------------------------------------------------
# argument handling


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0 or v == float("inf"):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def _finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v != v or v in (float("inf"), float("-inf")):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def _finite_text(text: str) -> str:
    """Validate a finite number but keep its text, so the extended tier sees every digit."""
    _finite_float(text)
    return text


def parse_range(text: str) -> list[Decimal]:
    """Expand ``lo:hi:step`` (inclusive of ``hi`` when it lands on the grid).

    Decimal arithmetic keeps grid points such as 0.2 * 3 exact.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must look like lo:hi:step")
    try:
        lo, hi, step = (Decimal(p) for p in parts)
    except ArithmeticError:
        raise UsageError(f"range {text!r} has a non-numeric part") from None
    if not all(v.is_finite() for v in (lo, hi, step)):
        raise UsageError(f"range {text!r} must be finite")
    if step == 0 or (hi - lo) * step < 0:
        raise UsageError(f"range {text!r}: step must be nonzero and point from lo to hi")
    n = int((hi - lo) / step)
    if n > 100000:
        raise UsageError(f"range {text!r} has too many points")
    return [lo + i * step for i in range(n + 1)]


def _common(p: argparse.ArgumentParser, *, flow: bool = True) -> None:
    if flow:
        p.add_argument("--beta0", type=_finite_float, default=1.0, help="coefficient of f f'' (default 1)")
        p.add_argument("--beta", type=_finite_float, default=0.0, help="pressure-gradient parameter (default 0)")
        p.add_argument("--branch", choices=[b.value for b in Branch], default="forward")
        p.add_argument("--tol", type=_positive_float, default=None, help="shooting tolerance (default 1e-12)")
        p.add_argument("--alpha0", type=_finite_text, default=None, help="initial guess for the shooting angle")
        p.add_argument("--tau-inf", type=_positive_float, default=DEFAULT_TAU,
                       help="threshold on |1 - f'| defining eta_inf (default 5e-7)")
    p.add_argument("--eta-max", type=_positive_float, default=None, help="march horizon")
    p.add_argument("--step", type=_positive_float, default=None, help="continuation step h")
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS, help="series order per step (default 30)")
    p.add_argument("--tier", choices=["standard", "extended"], default=None,
                   help="precision tier (default: $FS_TIER or standard)")
    p.add_argument("--format", choices=["json", "csv", "table"], default="json")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="falkner-skan",
        description="Similarity solutions of the Falkner-Skan boundary-layer equation "
        "f''' + beta0 f f'' + beta (1 - f'^2) = 0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="shooting angle f''(0) for one flow")
    _common(p)

    p = sub.add_parser("profile", help="f, f', f'' on a grid of eta values")
    _common(p)
    p.add_argument("--alpha", type=_finite_text, default=None,
                   help="use this angle instead of solving for it")
    p.add_argument("--grid", default="0:10:0.2", help="lo:hi:step (default 0:10:0.2)")

    p = sub.add_parser("sweep", help="shooting angles over a list of beta values")
    _common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--beta-list", help="comma-separated beta values")
    g.add_argument("--beta-range", help="lo:hi:step")
    g.add_argument("--preset", choices=["katagiri"], help="named beta grid")
    p.add_argument("--no-eta-inf", action="store_true", help="skip the eta_inf scan")

    p = sub.add_parser("verify", help="re-solve the embedded reference values")
    _common(p, flow=False)
    p.add_argument("--suite", default="all", help="case id, glob or group name (default all)")

    p = sub.add_parser("export-tables", help="write the embedded reference data as CSV files")
    p.add_argument("--out", default=".", help="output directory")
    return parser


def _config(args, params: FlowParams | None = None) -> SolverConfig:
    if args.terms < 3:
        raise UsageError("--terms must be at least 3")
    tier = get_tier(args.tier or default_tier_name())
    return SolverConfig(h=args.step, eta_max=args.eta_max, K=args.terms, tier=tier)


# ---------------------------------------------------------------------------
# commands


def _solve_record(params, res, eta_inf, tier):
    return {
        "beta0": params.beta0,
        "beta": params.beta,
        "branch": res.branch.value,
        "alpha": res.alpha,
        "tol_achieved": res.tol_achieved,
        "iterations": res.iterations,
        "eta_inf_lo": None if eta_inf is None else eta_inf[0],
        "eta_inf_hi": None if eta_inf is None else eta_inf[1],
        "tier": tier.name,
    }


def _eta_inf_or_none(params, alpha, cfg, tau):
    try:
        return eta_infinity(params, alpha, cfg, tau)
    except NotReached as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return None


def cmd_solve(args, out) -> int:
    params = FlowParams(args.beta0, args.beta)
    cfg = _config(args)
    tol = args.tol if args.tol is not None else 1e-12
    res = solve_alpha(params, args.branch, tol, cfg, alpha_init=args.alpha0)
    eta_inf = _eta_inf_or_none(params, res.alpha, cfg, args.tau_inf)
    _emit([_solve_record(params, res, eta_inf, cfg.tier)], args.format, cfg.tier, out, single=True)
    return 0


def cmd_profile(args, out) -> int:
    params = FlowParams(args.beta0, args.beta)
    grid = parse_range(args.grid)
    if grid[0] < 0:
        raise UsageError("--grid must start at eta >= 0")
    cfg = _config(args)
    if args.alpha is not None:
        alpha = cfg.tier.num(args.alpha)
    else:
        tol = args.tol if args.tol is not None else 1e-12
        alpha = solve_alpha(params, args.branch, tol, cfg, alpha_init=args.alpha0).alpha
    horizon = max(float(grid[-1]), cfg.horizon(params))
    traj = march(params, alpha, SolverConfig(
        h=cfg.h, eta_max=horizon, K=cfg.K, tier=cfg.tier
    ), early_stop=False, keep_partial=True)
    last = float(traj.last.eta)
    if float(grid[-1]) > last:
        print(f"warning: the march stopped at eta={last:g}; later grid points are omitted", file=sys.stderr)
        grid = [eta for eta in grid if float(eta) <= last]
    rows = []
    for eta in grid:
        s = evaluate_at(traj, eta if cfg.tier.name != "standard" else float(eta))
        rows.append({"eta": s.eta, "f": s.f, "fp": s.fp, "fpp": s.fpp})
    _emit(rows, args.format, cfg.tier, out)
    return 0


def _sweep_betas(args) -> list[float]:
    if args.preset == "katagiri":
        return list(reference.KATAGIRI_BETAS)
    if args.beta_range:
        return [float(b) for b in parse_range(args.beta_range)]
    try:
        betas = [float(b) for b in args.beta_list.split(",") if b.strip()]
    except ValueError:
        raise UsageError(f"--beta-list {args.beta_list!r} is not a comma list of numbers") from None
    if not betas:
        raise UsageError("--beta-list is empty")
    return betas


def cmd_sweep(args, out) -> int:
    betas = _sweep_betas(args)
    cfg = _config(args)
    if args.tol is not None:
        tol = args.tol
    else:
        # the preset reproduces twelve-digit values, which needs one more
        # digit of bracket width than the general default near beta = -0.19
        tol = 1e-13 if args.preset == "katagiri" else 1e-12
    rows = reference.sweep(
        betas, args.beta0, args.branch, tol, cfg, jobs=args.jobs,
        tau_inf=None if args.no_eta_inf else args.tau_inf, alpha_init=args.alpha0,
    )
    records = []
    failed = False
    for r in rows:
        failed = failed or r.error is not None
        records.append({
            "beta0": args.beta0,
            "beta": r.beta,
            "branch": args.branch,
            "alpha": r.alpha,
            "eta_inf_lo": None if r.eta_inf is None else r.eta_inf[0],
            "eta_inf_hi": None if r.eta_inf is None else r.eta_inf[1],
            "iterations": r.iterations,
            "error": r.error,
        })
        if r.error:
            print(f"beta={r.beta}: {r.error}", file=sys.stderr)
    _emit(records, args.format, cfg.tier, out)
    return 1 if failed else 0


def cmd_verify(args, out) -> int:
    cfg = _config(args)
    try:
        report = reference.verify(args.suite, cfg, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [
        {
            "id": o.id,
            "status": o.status,
            "digits": o.digits,
            "required": o.threshold,
            "expected": o.expected,
            "computed": o.computed,
            "eta_inf": None if o.eta_inf is None else f"{o.eta_inf[0]:.2f}-{o.eta_inf[1]:.2f}",
            "eta_inf_expected": None
            if o.expected_eta_inf is None
            else f"{o.expected_eta_inf[0]:.2f}-{o.expected_eta_inf[1]:.2f}",
            "note": o.note,
        }
        for o in report.outcomes
    ]
    rows += [
        {
            "id": f"profile eta={p.eta} {p.column}",
            "status": p.status,
            "digits": p.digits,
            "required": p.threshold,
            "expected": p.expected,
            "computed": p.computed,
            "eta_inf": None,
            "eta_inf_expected": None,
            "note": "",
        }
        for p in report.profile
    ]
    _emit(rows, args.format, cfg.tier, out)
    counts = report.counts()
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(
        f"verify: {summary}; max relative error {report.max_rel_error:.3g}; "
        f"{report.wall_time:.1f} s",
        file=sys.stderr,
    )
    return 0 if report.passed else 1


def cmd_export(args, out) -> int:
    for path in reference.export_tables(args.out):
        out.write(path + "\n")
    return 0


_COMMANDS = {
    "solve": cmd_solve,
    "profile": cmd_profile,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "export-tables": cmd_export,
}


def run(argv: list[str] | None = None, out=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "tier", None) is None and hasattr(args, "tier"):
            get_tier(default_tier_name())  # reject a bad FS_TIER early
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # invalid combinations caught by the library (reverse with beta >= 0, ...)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, StepFailure) as exc:
        print(f"{parser.prog}: solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
