"""Command-line interface.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage error.
Output files go to ``--out`` (default: ``$GWBOUND_OUTPUT_DIR`` or the current
directory).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .analysis import (
    GridSpec,
    ViolationFound,
    bisect_fixed_point,
    confirm_exact,
    extinction_probability,
    scan_inequality,
    survival_bounds,
)
from .coeffs import summarize, verify_all
from .pgf import Params, iterate_fl, iterate_sequential, phi_fl
from .reports import (
    ITERATE_COLUMNS,
    SCAN_COLUMNS,
    SIMULATE_COLUMNS,
    write_csv,
    write_json,
    write_jsonl,
)
from .simulate import SimConfig, run_simulation

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
OUTPUT_ENV = "GWBOUND_OUTPUT_DIR"


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    timestamp: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"tool": "gwbound", "version": __version__, "subcommand": self.subcommand,
             **{k: (str(v) if isinstance(v, (Fraction, Path)) else v) for k, v in self.options.items()}}
        if self.timestamp is not None:
            d["timestamp"] = self.timestamp
        return d


def parse_zeta(text: str):
    """``"p/q"`` gives an exact Fraction, anything else a float."""
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse zeta {text!r}") from None


def _params(parser: argparse.ArgumentParser, args) -> Params:
    try:
        return Params(args.r, args.zeta)
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV, "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args, name: str, **extra) -> dict:
    opts = {k: v for k, v in vars(args).items() if k not in ("func", "subparser", "timestamp", "out")}
    opts.update(extra)
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S") if getattr(args, "timestamp", False) else None
    return RunConfig(name, opts, stamp).to_dict()


def _table(rows, headers):
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) for i, h in enumerate(headers)]
    line = "  ".join(str(h).ljust(w) for h, w in zip(headers, widths))
    print(line)
    print("  ".join("-" * w for w in widths))
    for r in rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))


# subcommands

def cmd_verify(args, parser) -> int:
    if args.r_max < 2:
        parser.error("--r-max must be >= 2 (the bound is stated for r >= 2)")
    out = _out_dir(args)
    cfg = _config(args, "verify")
    reports = verify_all(args.r_max, workers=args.workers)
    write_jsonl(out / "verify_ledger.jsonl", (rep.to_record() for rep in reports), cfg)
    summary = summarize(reports)
    write_json(out / "verify_summary.json", {"summary": summary}, cfg)
    _table([(k, v["pass"], v["vacuous"], v["fail"]) for k, v in summary.items()],
           ("identity", "pass", "vacuous", "fail"))
    failures = [rep for rep in reports if not rep.passed]
    if failures:
        print(f"\nFAILED: {len(failures)} report(s); first counterexample:", file=sys.stderr)
        print(failures[0].to_record(), file=sys.stderr)
        return EXIT_VIOLATION
    print(f"\nall {len(reports)} reports pass for 2 <= r <= {args.r_max}")
    return EXIT_OK


def cmd_scan(args, parser) -> int:
    p = _params(parser, args)
    if args.mode == "exact" and not p.exact:
        parser.error("exact mode needs zeta as a fraction p/q")
    if args.grid < 2:
        parser.error("--grid must be >= 2")
    out = _out_dir(args)
    cfg = _config(args, "scan")
    try:
        rep = scan_inequality(p, GridSpec(args.grid, args.mode))
    except ViolationFound as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        write_json(out / "scan.json", {"violation": {"x": str(exc.x), "phi_nb": str(exc.phi_nb),
                                                     "phi_fl": str(exc.phi_fl)}}, cfg)
        return EXIT_VIOLATION
    payload = rep.summary()
    status = EXIT_OK if rep.ok else EXIT_VIOLATION
    if args.confirm:
        gap, count = confirm_exact(p, args.confirm, seed=args.seed)
        payload["exact_confirmation"] = {"samples": count, "min_gap": str(gap), "positive": gap > 0}
        if not gap > 0:
            status = EXIT_VIOLATION
    write_csv(out / "scan.csv", SCAN_COLUMNS, rep.rows(), cfg)
    write_json(out / "scan.json", payload, cfg)
    _table([(p.r, p.zeta, rep.mode, len(rep.x), 0, ", ".join(str(v) for v in rep.equality_points),
             f"{float(rep.min_positive_gap):.3e}" if rep.min_positive_gap is not None else "-")],
           ("r", "zeta", "mode", "points", "violations", "equality at", "min gap"))
    if rep.unexpected_equalities:
        print(f"unexpected equality points: {rep.unexpected_equalities}", file=sys.stderr)
    return status


def cmd_extinct(args, parser) -> int:
    p = _params(parser, args)
    out = _out_dir(args)
    cfg = _config(args, "extinct")
    q = extinction_probability(p)
    qb = bisect_fixed_point(p)
    exact = float(p.extinction)
    write_json(out / "extinct.json", {"iteration": q, "bisection": qb, "zeta_pow_r": exact,
                                      "error": abs(q - exact)}, cfg)
    print(f"{q:.12f}")
    return EXIT_OK if abs(q - exact) < 1e-12 and abs(qb - exact) < 1e-10 else EXIT_VIOLATION


def cmd_iterate(args, parser) -> int:
    p = _params(parser, args)
    if args.n < 1:
        parser.error("--n must be >= 1")
    out = _out_dir(args)
    cfg = _config(args, "iterate")
    curve = survival_bounds(p, args.n)
    problems = curve.problems()
    x0 = Fraction(0) if p.exact else 0.0
    matrix = iterate_fl(p, args.n, x0)
    seq = iterate_sequential(phi_fl, p, args.n, x0)
    diff = abs(matrix - seq)
    consistent = diff == 0 if p.exact else diff <= 1e-12
    if not consistent:
        problems.append(f"matrix power differs from sequential composition by {float(diff)}")
    write_csv(out / "iterate.csv", ITERATE_COLUMNS, curve.rows(), cfg)
    write_json(out / "iterate.json", {
        "fl_iterate": str(matrix), "sequential": str(seq), "difference": str(diff),
        "limit": curve.limit, "problems": problems,
    }, cfg)
    step = max(1, args.n // 10)
    _table([(n, f"{a:.15f}", f"{b:.15f}", f"{1 - b:.15f}") for n, a, b, _ in curve.rows()
            if n % step == 0 or n == args.n],
           ("n", "fl_at_0", "nb_at_0", "nb_survival"))
    print(f"\nFL iterate at n={args.n}: {float(matrix):.15f} (|matrix - sequential| = {float(diff):.3e})")
    return EXIT_OK if not problems else EXIT_VIOLATION


def cmd_simulate(args, parser) -> int:
    p = _params(parser, args)
    out = _out_dir(args)
    cfg = _config(args, "simulate")
    try:
        sim = SimConfig(p, args.reps, args.max_gen, args.seed, args.cap)
    except ValueError as exc:
        parser.error(str(exc))
    rep = run_simulation(sim)
    q = float(p.extinction)
    sigma = math.sqrt(q * (1 - q) / sim.replicates)
    payload = rep.to_dict()
    payload["extinction_probability"] = q
    payload["z_score"] = (rep.extinct_fraction - q) / sigma
    write_json(out / "simulate.json", payload, cfg)
    write_csv(out / "simulate.csv", SIMULATE_COLUMNS, rep.rows(), cfg)
    _table([(p.r, p.zeta, sim.replicates, rep.extinct, rep.survived, rep.censored,
             f"{rep.extinct_fraction:.5f}", f"{q:.5f}", f"{payload['z_score']:+.2f}")],
           ("r", "zeta", "reps", "extinct", "survived", "censored", "freq", "zeta^r", "sigmas"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gwbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gwbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, params=True):
        if params:
            sp.add_argument("--r", type=int, required=True, help="NB shape parameter (>= 2)")
            sp.add_argument("--zeta", type=parse_zeta, required=True,
                            help="zeta in (0,1); 'p/q' for exact arithmetic")
        sp.add_argument("--out", type=Path, default=None, help=f"output directory (default ${OUTPUT_ENV} or .)")
        sp.add_argument("--timestamp", action="store_true", help="add a timestamp to output files")

    sp = sub.add_parser("verify", help="exact coefficient identity suite")
    sp.add_argument("--r-max", type=int, default=25)
    sp.add_argument("--workers", type=int, default=1)
    common(sp, params=False)
    sp.set_defaults(func=cmd_verify, subparser=sp)

    sp = sub.add_parser("scan", help="scan phi_fl <= phi_nb over [0,1]")
    common(sp)
    sp.add_argument("--grid", type=int, default=10_000)
    sp.add_argument("--mode", choices=("float", "exact"), default="float")
    sp.add_argument("--confirm", type=int, default=100,
                    help="random rational points checked exactly (0 to skip)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_scan, subparser=sp)

    sp = sub.add_parser("extinct", help="extinction probability by fixed-point iteration")
    common(sp)
    sp.set_defaults(func=cmd_extinct, subparser=sp)

    sp = sub.add_parser("iterate", help="FL and NB iterates at 0 (survival curves)")
    common(sp)
    sp.add_argument("--n", type=int, default=50)
    sp.set_defaults(func=cmd_iterate, subparser=sp)

    sp = sub.add_parser("simulate", help="Monte Carlo Galton-Watson simulation")
    common(sp)
    sp.add_argument("--reps", type=int, default=100_000)
    sp.add_argument("--max-gen", type=int, default=200)
    sp.add_argument("--cap", type=int, default=10 ** 6)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_simulate, subparser=sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, args.subparser)


if __name__ == "__main__":
    sys.exit(main())
