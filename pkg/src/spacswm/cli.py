"""Command-line front end: figure tables, oracle cross-checks and Monte Carlo runs.

Exit codes: 0 success, 1 computation failure, 2 usage or config error.
Data files are plain CSV (17 significant digits, LF endings, no timestamps);
run parameters go to a ``<out>.meta`` sidecar of key=value lines.

Only phi0 = phi_i - phi_f enters any result; the config file still takes
phi_i and phi_f separately.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, fields
from pathlib import Path

from . import __version__
from .core import ExperimentConfig
from .crosscheck import run_crosscheck
from .errors import SpacsError
from .estimation import McReport, McRunConfig, crb_experiment
from .figures import FIGURES, build_figure

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CROSSCHECK_COLUMNS = ["config_id", "quantity", "set", "formula", "oracle", "abs_dev",
                      "rel_dev", "score", "pass"]
MC_COLUMNS = [f.name for f in fields(McReport)]

_FLOAT_KEYS = ("alpha_mag", "alpha_phase", "lambda", "theta_i", "phi_i", "theta_f", "phi_f",
               "lambda_lo", "lambda_hi")
_INT_KEYS = ("n_max", "seed", "n_trials", "n_runs", "lambda_points")
_REQUIRED = ("alpha_mag", "lambda", "theta_i", "theta_f", "seed", "n_trials", "n_runs",
             "lambda_lo", "lambda_hi")


class ConfigError(Exception):
    pass


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "" if math.isnan(value) else format(value, ".17g")
    return str(value)


def write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_meta(path: Path, meta: dict) -> None:
    meta = {"tool": "spacswm", "version": __version__, **meta}
    with open(Path(str(path) + ".meta"), "w", newline="\n", encoding="ascii") as fh:
        fh.writelines(f"{k}={v}\n" for k, v in meta.items())


def parse_config_file(path: Path) -> McRunConfig:
    """Read a flat key=value MC config; '#' starts a comment."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (s.strip() for s in line.partition("="))
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        if key not in _FLOAT_KEYS + _INT_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            if key == "n_max" and val == "auto":
                values[key] = None
            else:
                values[key] = int(val) if key in _INT_KEYS else float(val)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"{path}: missing keys {', '.join(missing)}")
    try:
        base = ExperimentConfig(alpha_mag=values["alpha_mag"], lam=values["lambda"],
                                theta_i=values["theta_i"], theta_f=values["theta_f"],
                                phi_i=values.get("phi_i", 0.0), phi_f=values.get("phi_f", 0.0),
                                alpha_phase=values.get("alpha_phase", 0.0))
        return McRunConfig(base=base, n_trials=values["n_trials"], n_runs=values["n_runs"],
                           seed=values["seed"], lambda_lo=values["lambda_lo"],
                           lambda_hi=values["lambda_hi"],
                           lambda_points=values.get("lambda_points", 2001),
                           n_max=values.get("n_max"))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def cmd_figure(args) -> int:
    table = build_figure(args.id, args.points)
    write_csv(args.out, table.columns, table.rows)
    write_meta(args.out, {**table.meta, "columns": ",".join(table.columns)})
    flagged = sum(1 for r in table.rows if r[-1])
    print(f"{args.id}: {len(table.rows)} rows -> {args.out} ({flagged} flagged)")
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    report = run_crosscheck(args.seed, args.points)
    rows = [[r.config_id, r.quantity, "hard" if r.hard else "soft", r.formula, r.oracle,
             r.abs_dev, r.rel_dev, r.score, int(r.passed)] for r in report.rows]
    write_csv(args.out, CROSSCHECK_COLUMNS, rows)
    summary = report.summary()
    summary_path = Path(str(args.out) + ".json")
    with open(summary_path, "w", newline="\n", encoding="ascii") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    write_meta(args.out, {"command": "crosscheck", "seed": args.seed, "points": args.points,
                          "rel_tol": "1e-08", "abs_tol": "1e-10"})
    status = "PASS" if report.hard_passed else "FAIL"
    print(f"hard set {status}: worst scored deviation {report.worst_rel_dev:.3e}")
    for name, dev in summary["soft"].items():
        print(f"  soft {name}: max rel dev " + ("n/a" if dev is None else f"{dev:.3e}"))
    return EXIT_OK if report.hard_passed else EXIT_FAIL


def cmd_mc(args) -> int:
    cfg = parse_config_file(args.config)
    report = crb_experiment(cfg)
    values = asdict(report)
    write_csv(args.out, MC_COLUMNS, [[values[c] for c in MC_COLUMNS]])
    meta = {"command": "mc", "config": args.config.name,
            **{k: fmt(v) for k, v in asdict(cfg.base).items()},
            "n_max": fmt(cfg.resolved_n_max()), "lambda_lo": fmt(cfg.lambda_lo),
            "lambda_hi": fmt(cfg.lambda_hi), "lambda_points": cfg.lambda_points}
    write_meta(args.out, meta)
    print(f"efficiency {report.efficiency:.4f}, var {report.lambda_hat_var:.4e}, "
          f"crb {report.crb:.4e}, accepted {report.accepted_fraction:.4f}")
    return EXIT_OK


def _positive_points(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return n


def _crosscheck_points(text: str) -> int:
    n = int(text)
    if n < 100:
        raise argparse.ArgumentTypeError("must be >= 100")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spacswm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="tabulate one figure as CSV")
    fig.add_argument("id", choices=FIGURES)
    fig.add_argument("--out", type=Path, required=True)
    fig.add_argument("--points", type=_positive_points, default=None,
                     help="sweep size (default 721 for fig1*/fig3, 601 for fig2, 391 for fig4)")
    fig.set_defaults(func=cmd_figure)

    cc = sub.add_parser("crosscheck", help="closed forms versus the Fock-space oracle")
    cc.add_argument("--seed", type=int, default=2024)
    cc.add_argument("--points", type=_crosscheck_points, default=1000)
    cc.add_argument("--out", type=Path, required=True)
    cc.set_defaults(func=cmd_crosscheck)

    mc = sub.add_parser("mc", help="Monte Carlo Cramer-Rao check from a key=value config")
    mc.add_argument("--config", type=Path, required=True)
    mc.add_argument("--out", type=Path, required=True)
    mc.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpacsError, ArithmeticError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
