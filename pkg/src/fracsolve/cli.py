"""Command line entry point: ``fracsolve {run,converge,weights}``.

Settings resolve as command-line flag > config file > built-in default. The
config file is flat ``key = value`` text (keys spelled like the long flags,
dashes or underscores) and is located through ``FRACSOLVE_CONFIG``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .cqtime import UniformTimeGrid, cq_weights
from .femcore import UniformMesh1D
from .harness import emit_csv, run_convergence, run_single, write_report
from .manufactured import ManufacturedCase
from .stepper import SolverConfig

DEFAULTS = {
    "case": "a",
    "alpha": 0.5,
    "s": 0.75,
    "m": 256,
    "tau": 0.01,
    "t_end": 0.1,
    "corrected_source": None,
    "axis": "time",
    "fixed": None,
    "sweep": None,
    "n": 10,
    "out": None,
}

RUN_HEADER = ("case", "alpha", "s", "m", "tau", "t_end", "corrected_source", "error")


class ConfigError(ValueError):
    pass


def parse_real(text) -> float:
    """Float, also accepting fractions such as ``1/400``."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def parse_sweep(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [parse_real(v) for v in text]
    return [parse_real(v) for v in str(text).split(",") if v.strip()]


def parse_bool(text) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


_CONVERTERS = {
    "case": str,
    "alpha": parse_real,
    "s": parse_real,
    "m": int,
    "tau": parse_real,
    "t_end": parse_real,
    "corrected_source": parse_bool,
    "axis": str,
    "fixed": parse_real,
    "sweep": parse_sweep,
    "n": int,
    "out": str,
}


def load_config(path) -> dict:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "no_corrected_source":
            key, value = "corrected_source", str(not parse_bool(value))
        if key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return values


def resolve_settings(cli: dict, env=None) -> dict:
    env = os.environ if env is None else env
    settings = dict(DEFAULTS)
    cfg_path = env.get("FRACSOLVE_CONFIG")
    if cfg_path:
        settings.update(load_config(cfg_path))
    settings.update({k: v for k, v in cli.items() if v is not None})
    return settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsolve",
        description="Solve 1D space-time fractional problems and measure convergence.",
        epilog="Settings may also come from a key = value file named by FRACSOLVE_CONFIG.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log each solve")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_flags(p):
        p.add_argument("--case", choices=("a", "b"), default=None)
        p.add_argument("--alpha", type=parse_real, default=None)
        p.add_argument("--s", type=parse_real, default=None)
        p.add_argument("--t-end", dest="t_end", type=parse_real, default=None)
        p.add_argument("--no-corrected-source", dest="corrected_source", action="store_const", const=False, default=None)
        p.add_argument("--out", default=None, help="CSV destination (stdout if omitted)")

    run = sub.add_parser("run", help="single solve, L2 error at t_end")
    problem_flags(run)
    run.add_argument("--m", type=int, default=None, help="number of subintervals")
    run.add_argument("--tau", type=parse_real, default=None)

    conv = sub.add_parser("converge", help="convergence sweep in tau or h")
    problem_flags(conv)
    conv.add_argument("--axis", choices=("time", "space"), default=None)
    conv.add_argument("--fixed", type=parse_real, default=None, help="h for time sweeps, tau for space sweeps")
    conv.add_argument("--sweep", type=parse_sweep, default=None, help="comma-separated tau or h values")

    w = sub.add_parser("weights", help="print convolution-quadrature weights")
    w.add_argument("--alpha", type=parse_real, default=None)
    w.add_argument("--tau", type=parse_real, default=None)
    w.add_argument("--n", type=int, default=None)
    return parser


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _cmd_run(opts: dict) -> None:
    case = ManufacturedCase(opts["case"], opts["alpha"], opts["s"])
    cfg = SolverConfig(
        case.alpha,
        case.s,
        UniformTimeGrid.from_end(opts["t_end"], opts["tau"]),
        UniformMesh1D(opts["m"]),
        opts["corrected_source"],
    )
    result = run_single(case, cfg)
    fh, close = _open_out(opts["out"])
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_HEADER)
        writer.writerow(
            [
                case.case_id,
                f"{case.alpha:.6g}",
                f"{case.s:.6g}",
                cfg.mesh.m,
                f"{cfg.grid.tau:.6g}",
                f"{cfg.grid.t_end:.6g}",
                int(result.corrected_source),
                f"{result.error:.6g}",
            ]
        )
    finally:
        if close:
            fh.close()


def _cmd_converge(opts: dict) -> None:
    if opts["fixed"] is None or not opts["sweep"]:
        raise ConfigError("converge needs --fixed and --sweep")
    case = ManufacturedCase(opts["case"], opts["alpha"], opts["s"])
    report = run_convergence(case, opts["axis"], opts["fixed"], opts["sweep"], opts["t_end"], opts["corrected_source"])
    if opts["out"] in (None, "-"):
        write_report(report, sys.stdout)
    else:
        emit_csv(report, opts["out"])


def _cmd_weights(opts: dict) -> None:
    table = cq_weights(opts["alpha"], opts["tau"], opts["n"])
    for j, w in enumerate(table.weights):
        print(f"{j} {w:.17g}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cli = {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}
    try:
        opts = resolve_settings(cli)
        {"run": _cmd_run, "converge": _cmd_converge, "weights": _cmd_weights}[args.command](opts)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"fracsolve: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
