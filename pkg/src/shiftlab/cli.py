"""Command-line front end.

Exit codes: 0 success (for ``verify``: claim passed), 1 claim failed,
2 invalid configuration, 3 numerical error.

A flat ``key = value`` file given with ``--config`` overrides the built-in
defaults; explicit flags override the file. Relative ``--out`` paths are
resolved against ``$SHIFTLAB_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import continuum as C
from . import weights as W
from .claims import CLAIMS
from .errors import ShiftlabError
from .fockspace import HatVector, SparseVector
from .shiftop import FamilyMember, operator_norm_bound
from .spectral import (
    DEFAULT_THRESHOLD,
    S,
    S0,
    Splus,
    ljapunov_upper,
    membership,
    spectral_radius_estimate,
    trajectory,
)

OUTPUT_DIR_ENV = "SHIFTLAB_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _add_output(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--format", choices=["json", "csv", "dat"], default=default_format,
                   help="json, csv, or whitespace two-column data for gnuplot")
    p.add_argument("--out", help="output path (default: stdout)")


def _add_sequence(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["krein", "geometric", "hybrid", "tabulated"], default="geometric")
    p.add_argument("--c", type=float, default=None, help="family parameter (krein: c>0, geometric: c>=1)")
    p.add_argument("--table", help="two-column index/log-weight file for --family tabulated")
    p.add_argument("--member", default="shift", help="shift, inverse, adjoint or adjinv")


def _add_vector(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vector", default="0:1", help="comma-separated index:coefficient pairs")
    p.add_argument("--bottom", default=None,
                   help="second component; when given the lifted operator acts on vector(+)bottom")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftlab", description=__doc__.splitlines()[0], allow_abbrev=False
    )
    parser.add_argument("--config", help="flat key = value file overriding defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trajectory", allow_abbrev=False, help="ln||T^N v|| for N = 1..horizon")
    _add_sequence(p)
    _add_vector(p)
    p.add_argument("--horizon", type=int, default=64)
    _add_output(p, "csv")

    p = sub.add_parser("ljapunov", allow_abbrev=False, help="finite-horizon Ljapunov upper index")
    _add_sequence(p)
    _add_vector(p)
    p.add_argument("--horizon", type=int, default=511)
    _add_output(p, "json")

    p = sub.add_parser("specradius", allow_abbrev=False, help="||T^N||^(1/N) with the family window policy")
    _add_sequence(p)
    p.add_argument("--nmax", type=int, default=64)
    p.add_argument("--window", default=None, help="lo:hi to override the window policy")
    _add_output(p, "json")

    p = sub.add_parser("membership", allow_abbrev=False, help="horizon-limited S0 / S / S+ verdict")
    _add_sequence(p)
    _add_vector(p)
    p.add_argument("--set", dest="target", choices=["S0", "S", "S+"], default="S")
    p.add_argument("--a", type=float, default=None, help="growth base for S+")
    p.add_argument("--horizon", type=int, default=512)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    _add_output(p, "json")

    p = sub.add_parser("verify", allow_abbrev=False, help="check one claim and print its report")
    p.add_argument("claim", choices=sorted(CLAIMS))
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--M", dest="M", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    _add_output(p, "json")

    p = sub.add_parser("continuum", allow_abbrev=False, help="continuous-time propagator checks")
    p.add_argument("action", choices=["group-check", "generator-check", "propagate"])
    p.add_argument("--case", choices=sorted(C.CASES), default="b")
    p.add_argument("--t", type=float, default=1.5)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--h", type=float, default=0.1)
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--half-width", type=float, default=10.0)
    p.add_argument("--profile", help="x,value CSV profile (default: Gaussian exp(-x^2))")
    p.add_argument("--times", default=None, help="comma-separated times for propagate")
    _add_output(p, "json")
    return parser


def _sequence(args) -> W.WeightSequence:
    if args.family == "tabulated":
        if not args.table:
            raise ConfigError("--family tabulated needs --table")
        try:
            return W.load_table(args.table)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    if args.family == "hybrid":
        return W.hybrid_decay_harmonic()
    c = 1.0 if args.c is None else args.c
    try:
        return W.krein_oscillatory(c) if args.family == "krein" else W.geometric_valley(c)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _member(args) -> FamilyMember:
    try:
        return FamilyMember.parse(args.member)
    except ValueError:
        raise ConfigError(f"unknown member {args.member!r}") from None


def _vector(args):
    try:
        top = SparseVector.parse(args.vector)
        if args.bottom is not None:
            return HatVector(top, SparseVector.parse(args.bottom))
        return top
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _positive(name: str, value: int) -> int:
    if value is None or value < 1:
        raise ConfigError(f"--{name} must be >= 1")
    return value


def _rows_text(header: list[str], rows: list[list], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "dat":
        buf.write("# " + " ".join(header) + "\n")
        for r in rows:
            buf.write(" ".join(repr(x) if isinstance(x, float) else str(x) for x in r) + "\n")
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _dict_text(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    flat = [[k, v if not isinstance(v, (dict, list)) else json.dumps(v)] for k, v in d.items()]
    return _rows_text(["key", "value"], flat, fmt)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_trajectory(args) -> int:
    horizon = _positive("horizon", args.horizon)
    seq, member, v = _sequence(args), _member(args), _vector(args)
    traj = trajectory(seq, member, v, horizon)
    if args.format == "json":
        text = json.dumps({"provenance": traj.provenance, "N": traj.steps.tolist(),
                           "logNorm": traj.log_norms.tolist()}, indent=2) + "\n"
    else:
        text = _rows_text(["N", "logNorm"], [list(s) for s in traj.samples()], args.format)
    _emit(text, args.out)
    return EXIT_OK


def cmd_ljapunov(args) -> int:
    horizon = _positive("horizon", args.horizon)
    seq, member, v = _sequence(args), _member(args), _vector(args)
    est = ljapunov_upper(trajectory(seq, member, v, horizon))
    d = {"lambdaHat": est.lambda_hat, "achievedAt": est.achieved_at,
         "regressionSlope": est.regression_slope, "horizon": est.horizon}
    _emit(_dict_text(d, args.format), args.out)
    return EXIT_OK


def cmd_specradius(args) -> int:
    n_max = _positive("nmax", args.nmax)
    seq, member = _sequence(args), _member(args)
    window = None
    if args.window:
        try:
            lo, hi = (int(s) for s in args.window.split(":"))
        except ValueError:
            raise ConfigError("--window must be lo:hi") from None
        window = (lo, hi)
    bound = operator_norm_bound(seq, member, n_max, window)
    d = {"spectralRadius": spectral_radius_estimate(seq, member, n_max, window),
         "nmax": n_max, "logNorm": bound.log_norm, "argmax": bound.argmax,
         "window": list(bound.window), "exactWindow": bound.exact}
    _emit(_dict_text(d, args.format), args.out)
    return EXIT_OK


def cmd_membership(args) -> int:
    horizon = _positive("horizon", args.horizon)
    seq, member, v = _sequence(args), _member(args), _vector(args)
    if args.target == "S+":
        if args.a is None or args.a <= 1:
            raise ConfigError("--set S+ needs --a > 1")
        target = Splus(args.a)
    else:
        target = S0 if args.target == "S0" else S
    verdict = membership(seq, member, v, target, horizon, args.threshold)
    if args.format == "json":
        text = json.dumps(verdict.to_dict(), indent=2) + "\n"
    else:
        text = _rows_text(["N", "value"], [list(s) for s in verdict.certificate], args.format)
    _emit(text, args.out)
    return EXIT_OK


_VERIFY_ARGS = {
    "L2-1": {"c": "c", "kmax": "k_max"},
    "R3-1": {"c": "c"},
    "R3-2": {"c": "c", "M": "M", "nmax": "n_max"},
    "L3-2": {"nmax": "n_max", "horizon": "horizon"},
    "Th3-2": {"horizon": "horizon"},
    "Th2-1": {"c": "c", "horizon": "horizon", "seed": "seed"},
}


def cmd_verify(args) -> int:
    kwargs = {}
    for flag, name in _VERIFY_ARGS[args.claim].items():
        value = getattr(args, flag)
        if value is not None:
            kwargs[name] = value
    for flag in ("c", "kmax", "M", "nmax", "horizon", "seed"):
        if getattr(args, flag) is not None and flag not in _VERIFY_ARGS[args.claim]:
            raise ConfigError(f"--{flag} does not apply to claim {args.claim}")
    try:
        report = CLAIMS[args.claim](**kwargs)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if args.format == "json":
        text = report.to_json() + "\n"
    else:
        text = _rows_text(["label", "value"], [list(m) for m in report.measured], args.format)
    _emit(text, args.out)
    print(report.table(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_continuum(args) -> int:
    w = C.weight_function(args.case)
    if args.step <= 0 or args.half_width <= 0:
        raise ConfigError("--step and --half-width must be positive")
    if args.profile:
        p = C.Profile.from_csv(Path(args.profile).read_text())
    else:
        p = C.gaussian_profile(args.half_width, args.step)
    if args.action == "propagate":
        times = [args.t] if args.times is None else [float(s) for s in args.times.split(",")]
        text = C.propagation_series(w, p, times)
        if args.format == "dat":
            text = "# " + text.replace(",", " ")
        _emit(text, args.out)
        return EXIT_OK
    if args.action == "group-check":
        d = {"case": args.case, "t": args.t, "tau": args.tau, "step": p.step,
             "maxResidual": C.group_residual(w, p, args.t, args.tau)}
    else:
        if args.h <= 0:
            raise ConfigError("--h must be positive")
        r1 = C.generator_consistency(w, p, args.h)
        r2 = C.generator_consistency(w, p, args.h / 2)
        d = {"case": args.case, "h": args.h, "step": p.step, "maxResidual": r1,
             "maxResidualHalfH": r2, "ratio": r1 / r2 if r2 > 0 else math.inf}
    _emit(_dict_text(d, args.format), args.out)
    return EXIT_OK


COMMANDS = {
    "trajectory": cmd_trajectory,
    "ljapunov": cmd_ljapunov,
    "specradius": cmd_specradius,
    "membership": cmd_membership,
    "verify": cmd_verify,
    "continuum": cmd_continuum,
}


def _parse(parser: argparse.ArgumentParser, argv):
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        overrides = read_config(known.config)
        # config values become defaults on every subparser that knows the key
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                dests = {a.dest: a for a in sp._actions}
                values = {}
                for k, v in overrides.items():
                    if k not in dests:
                        continue
                    try:
                        values[k] = dests[k].type(v) if dests[k].type else v
                    except ValueError:
                        raise ConfigError(f"config key {k}: bad value {v!r}") from None
                sp.set_defaults(**values)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as e:  # argparse usage errors exit with 2 already
        return int(e.code or 0)
    except ConfigError as e:
        print(f"shiftlab: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError) as e:
        print(f"shiftlab: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ShiftlabError, ArithmeticError, ValueError) as e:
        print(f"shiftlab: numerical error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
