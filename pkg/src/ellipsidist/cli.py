"""Command line front end.

    ellipsidist analyze  --curve a=0,b=-2 --seed 3,5 --n 1000000
    ellipsidist lattice  --tau 0.3+1.1i --z 0.1+0.25i --n 100000
    ellipsidist sequence --curve a=0,b=-2 --seed 3,5 --n 1000 --out seq.csv
    ellipsidist period   --curve a=-1,b=0
    ellipsidist torsion  --curve a=0,b=1 --seed 2,3

Every option may also come from an INI file given with ``--config``; flags
override the file.  Exit codes: 0 success, 2 usage, 3 mathematical
rejection, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .analysis import period_dict, run_analysis, to_dict
from .analytic import real_period
from .ec_core import INFINITY, Curve, Point, classify_torsion, parse_number
from .equidist import Schedule, SequenceSpec, generate, generate_points
from .errors import MathematicalRejection, NumericFailure
from .lattice import (
    DEFAULT_WINDOW,
    Lattice,
    degenerate_family,
    family_frequencies,
    frequency_window,
    parse_complex,
    weyl_window,
)
from .report import csv_text, dumps, write_atomic

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_NUMERIC = 0, 2, 3, 4

# (section, key) in the config file for each option
CONFIG_KEYS = {
    "curve": ("curve", "coefficients"),
    "a": ("curve", "a"),
    "b": ("curve", "b"),
    "seed": ("seed", "point"),
    "seed_x": ("seed", "x"),
    "seed_y": ("seed", "y"),
    "schedule": ("run", "schedule"),
    "n": ("run", "n"),
    "k": ("run", "k"),
    "digit_shift": ("run", "digit_shift"),
    "residual_tol": ("tolerances", "residual_tol"),
    "root_tol": ("tolerances", "root_tol"),
    "out": ("output", "report"),
    "cdf_csv": ("output", "cdf_csv"),
    "samples_csv": ("output", "samples_csv"),
    "figures": ("output", "figures"),
    "tau": ("lattice", "tau"),
    "z": ("lattice", "z"),
    "window": ("lattice", "window"),
}

DEFAULTS = {"schedule": "linear", "n": "1000", "k": "8", "digit_shift": "0", "window": str(DEFAULT_WINDOW)}


class UsageError(Exception):
    pass


def parse_curve(text: Optional[str], a: Optional[str] = None, b: Optional[str] = None) -> tuple:
    """``a=0,b=-2`` or ``0,-2``; separate ``a``/``b`` values win."""
    vals = {}
    if text:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if len(parts) != 2:
            raise UsageError(f"curve needs two coefficients, got {text!r}")
        for i, p in enumerate(parts):
            if "=" in p:
                k, v = (s.strip() for s in p.split("=", 1))
            else:
                k, v = "ab"[i], p
            if k not in ("a", "b"):
                raise UsageError(f"unknown curve coefficient {k!r}")
            vals[k] = v
    if a is not None:
        vals["a"] = a
    if b is not None:
        vals["b"] = b
    if set(vals) != {"a", "b"}:
        raise UsageError("curve needs both a and b")
    try:
        return parse_number(vals["a"]), parse_number(vals["b"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_seed(text: Optional[str], x: Optional[str] = None, y: Optional[str] = None):
    """``3,5``, ``x=3,y=5``, ``infinity``, or ``2,+`` (lift x with a sign)."""
    if text and text.strip().lower() in ("infinity", "inf", "o"):
        return "infinity"
    vals = {}
    if text:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        for i, p in enumerate(parts):
            if "=" in p:
                k, v = (s.strip() for s in p.split("=", 1))
            else:
                k, v = "xy"[i] if i < 2 else "?", p
            vals[k] = v
    if x is not None:
        vals["x"] = x
    if y is not None:
        vals["y"] = y
    if set(vals) != {"x", "y"}:
        raise UsageError("seed needs both x and y (or 'infinity')")
    try:
        xv = parse_number(vals["x"])
        yv = vals["y"] if vals["y"] in ("+", "-") else parse_number(vals["y"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return xv, yv


def build_curve_and_seed(cfg: dict) -> tuple[Curve, Point]:
    a, b = parse_curve(cfg.get("curve"), cfg.get("a"), cfg.get("b"))
    tols = {}
    for key in ("residual_tol", "root_tol"):
        if cfg.get(key) is not None:
            tols[key] = float(cfg[key])
    curve = Curve(a, b, **tols)
    seed = parse_seed(cfg.get("seed"), cfg.get("seed_x"), cfg.get("seed_y"))
    if seed == "infinity":
        return curve, INFINITY
    x, y = seed
    if isinstance(y, str):
        curve = curve.to_float()
        return curve, curve.lift_x(x, 1 if y == "+" else -1)
    if curve.exact and isinstance(x, Fraction) and isinstance(y, Fraction):
        p = Point(x, y)
    else:
        curve = curve.to_float()
        p = Point(float(x), float(y))
    curve.check(p)
    return curve, p


def _int(cfg, key, minimum=None) -> int:
    try:
        v = int(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be an integer, got {cfg.get(key)!r}") from None
    if minimum is not None and v < minimum:
        raise UsageError(f"{key} must be >= {minimum}")
    return v


def _schedule(cfg) -> Schedule:
    try:
        return Schedule.parse(cfg["schedule"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(cfg: dict) -> int:
    curve, seed = build_curve_and_seed(cfg)
    spec = SequenceSpec(curve, seed, _schedule(cfg), _int(cfg, "n", 1))
    res = run_analysis(spec, _int(cfg, "k", 1), _int(cfg, "digit_shift", 0))
    _emit(dumps(to_dict(res)) + "\n", cfg.get("out"))
    if cfg.get("cdf_csv"):
        from .measures import PushforwardMeasure

        PushforwardMeasure(res.pd).export_csv(cfg["cdf_csv"])
    if cfg.get("samples_csv"):
        write_atomic(cfg["samples_csv"], _sequence_csv(res.samples))
    if cfg.get("figures"):
        from .plotting import write_figures

        write_figures(res, cfg["figures"])
    return EXIT_OK


def _sequence_csv(smp) -> str:
    x = smp.x
    n = np.arange(1, smp.N + 1)
    frac = np.mod(x, 1.0)
    rows = zip(n, smp.s, smp.components.astype(int), x, frac)
    return csv_text(["n", "s_n", "component", "x_n", "frac_x_n"], rows)


def cmd_sequence(cfg: dict) -> int:
    curve, seed = build_curve_and_seed(cfg)
    spec = SequenceSpec(curve, seed, _schedule(cfg), _int(cfg, "n", 1))
    _emit(_sequence_csv(generate(spec)), cfg.get("out"))
    return EXIT_OK


def cmd_points(cfg: dict) -> int:
    """Exact multiples, for cross-checking the elliptic-log path."""
    curve, seed = build_curve_and_seed(cfg)
    spec = SequenceSpec(curve, seed, _schedule(cfg), _int(cfg, "n", 1), space="point")
    rows = []
    for i, p in enumerate(generate_points(spec), start=1):
        rows.append((i, "inf" if p.is_infinity else str(p.x), "inf" if p.is_infinity else str(p.y)))
    _emit(csv_text(["n", "x", "y"], rows), cfg.get("out"))
    return EXIT_OK


def cmd_period(cfg: dict) -> int:
    a, b = parse_curve(cfg.get("curve"), cfg.get("a"), cfg.get("b"))
    pd = real_period(Curve(a, b))
    _emit(dumps(period_dict(pd)) + "\n", cfg.get("out"))
    return EXIT_OK


def cmd_torsion(cfg: dict) -> int:
    curve, seed = build_curve_and_seed(cfg)
    tv = classify_torsion(curve, seed)
    out = {"schema": 1, "is_torsion": tv.is_torsion, "order": tv.order, "method": tv.method}
    _emit(dumps(out) + "\n", cfg.get("out"))
    return EXIT_OK


def cmd_lattice(cfg: dict) -> int:
    if cfg.get("tau") is None or cfg.get("z") is None:
        raise UsageError("lattice needs --tau and --z")
    try:
        lat = Lattice(parse_complex(cfg["tau"]))
        z = parse_complex(cfg["z"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    N = _int(cfg, "n", 1)
    K = _int(cfg, "window", 1)
    fams = degenerate_family(lat, z)
    entries = weyl_window(lat, z, N, frequency_window(K))
    out = {
        "schema": 1,
        "tau": {"re": lat.tau.real, "im": lat.tau.imag},
        "z": {"re": z.real, "im": z.imag},
        "N": N,
        "window": K,
        "families": sorted(fams),
        "flagged": sorted(
            {(f.n1, f.n2) for fam in fams if fam != "none" for f in family_frequencies(fam, K)}
        ),
        "all_within_bound": all(e.within_bound for e in entries),
        "entries": [
            {
                "n1": e.freq.n1,
                "n2": e.freq.n2,
                "k": e.k,
                "k_integer": e.k_integer,
                "S": {"re": e.weyl.real, "im": e.weyl.imag},
                "modulus": e.modulus,
                "bound": e.bound,
                "within_bound": e.within_bound,
            }
            for e in entries
        ],
    }
    _emit(dumps(out) + "\n", cfg.get("out"))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "lattice": cmd_lattice,
    "sequence": cmd_sequence,
    "points": cmd_points,
    "period": cmd_period,
    "torsion": cmd_torsion,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellipsidist", description="Equidistribution experiments on elliptic curves.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--config", help="INI file; flags override its values")
        sp.add_argument("--curve", help="coefficients, e.g. a=0,b=-2 or 1/4,-3")
        sp.add_argument("--a")
        sp.add_argument("--b")
        if seed:
            sp.add_argument("--seed", help="x,y | infinity | x,+ (lift x, sign of y)")
            sp.add_argument("--seed-x", dest="seed_x")
            sp.add_argument("--seed-y", dest="seed_y")
        sp.add_argument("--residual-tol", dest="residual_tol")
        sp.add_argument("--root-tol", dest="root_tol")
        sp.add_argument("--out", help="output path (default: stdout)")

    def run(sp):
        sp.add_argument("--schedule", help="linear | n^2+n | 1,1,0 (monic, leading first)")
        sp.add_argument("--n", help="number of terms N")

    a = sub.add_parser("analyze", help="full statistics report as JSON")
    common(a)
    run(a)
    a.add_argument("--k", help="Weyl frequencies 1..K")
    a.add_argument("--digit-shift", dest="digit_shift", help="m for frequencies 10^m k")
    a.add_argument("--cdf-csv", dest="cdf_csv", help="write the (x, F) grid")
    a.add_argument("--samples-csv", dest="samples_csv", help="write the sample table")
    a.add_argument("--figures", help="directory for PNG figures")

    s = sub.add_parser("sequence", help="sample table (n, s_n, component, x_n, {x_n}) as CSV")
    common(s)
    run(s)

    pt = sub.add_parser("points", help="exact multiples [p(n)]P as CSV")
    common(pt)
    run(pt)

    pe = sub.add_parser("period", help="roots, periods and monotonicity")
    common(pe, seed=False)

    t = sub.add_parser("torsion", help="exact torsion classification of a rational seed")
    common(t)

    lt = sub.add_parser("lattice", help="Weyl sums on C/[tau, 1]")
    lt.add_argument("--config")
    lt.add_argument("--tau")
    lt.add_argument("--z")
    lt.add_argument("--n")
    lt.add_argument("--window", help="frequencies |n1|, |n2| <= window")
    lt.add_argument("--out")
    return p


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    out = {}
    for key, (section, option) in CONFIG_KEYS.items():
        if cp.has_option(section, option):
            out[key] = cp.get(section, option)
    return out


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(load_config(getattr(args, "config", None)))
    for key, val in vars(args).items():
        if key in ("command", "config") or val is None:
            continue
        cfg[key] = val
    return cfg


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](resolve(args))
    except UsageError as exc:
        print(f"ellipsidist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MathematicalRejection as exc:
        print(f"ellipsidist: rejected: {exc}", file=sys.stderr)
        return EXIT_MATH
    except NumericFailure as exc:
        print(f"ellipsidist: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"ellipsidist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
