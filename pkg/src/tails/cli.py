"""``tails`` command line: tail, auto, brv, simulate and validate.

Exit codes: 0 success, 2 input error (unreadable or malformed files,
unwritable output), 3 configuration error (missing or contradictory flags).
Set ``TAILS_LOG=quiet|info|debug`` for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys

import numpy as np

from tails import __version__
from tails.copulas import (
    Clayton,
    Comonotone,
    Countermonotone,
    Gaussian,
    Gumbel,
    Independence,
    StudentT,
    validate_grid,
)
from tails.discrete import checkerboard_extend, read_joint_pmf, subcopula_from_joint
from tails.empirical import (
    MAX_RANK,
    MID_RANK,
    PairedSample,
    SeriesSample,
    auto_tail_lower,
    auto_tail_param,
    empirical_lambda_path,
)
from tails.estimators import (
    LOWER,
    UPPER,
    Schedule,
    lambda_standard_lower_path,
    lambda_standard_upper_path,
    lambda_tilde_lower,
    lambda_tilde_upper,
)
from tails.io import format_csv, read_columns, write_atomic
from tails.regvar import brv_consistency, default_xs
from tails.sampling import iid_series, moving_max_series, sample_copula

log = logging.getLogger("tails")

SCHEMA = 1
EXTENSION_CAVEAT = ("discrete margins: the copula is not unique off the margins' ranges; "
                    "values use the checkerboard (multilinear) extension")

FAMILIES = ("independence", "comonotone", "countermonotone", "clayton", "gumbel",
            "gaussian", "student_t")
SERIES_FAMILIES = ("moving_max", "iid")


class InputError(Exception):
    exit_code = 2


class ConfigError(Exception):
    exit_code = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def _setup_logging():
    level = {"quiet": logging.CRITICAL, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("TAILS_LOG", "quiet").lower(), logging.CRITICAL)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise ConfigError(f"--family {args.family} needs --{name}")
    return val


def make_family(args):
    fam = args.family.replace("-", "_")
    try:
        if fam == "independence":
            return Independence()
        if fam == "comonotone":
            return Comonotone()
        if fam == "countermonotone":
            return Countermonotone()
        if fam == "clayton":
            return Clayton(_need(args, "theta"))
        if fam == "gumbel":
            return Gumbel(_need(args, "theta"))
        if fam == "gaussian":
            return Gaussian(_need(args, "rho"))
        if fam in ("student_t", "t"):
            return StudentT(_need(args, "rho"), _need(args, "nu"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown family {args.family!r}")


def _schedule(args):
    if args.schedule is None:
        return None
    try:
        return Schedule.parse(args.schedule)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _sides(args):
    return {"upper": [UPPER], "lower": [LOWER], "both": [UPPER, LOWER]}[args.side]


def _ranks(args):
    return MID_RANK if args.ranks == "mid" else MAX_RANK


def _config_echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _report(args, estimates, warnings=()):
    return {
        "schema": SCHEMA,
        "tool": "tails",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "command": args.command,
        "config": _config_echo(args),
        "estimates": estimates,
        "warnings": list(warnings),
    }


def _read(path, ncols):
    try:
        return read_columns(path, ncols)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _exclusive(args, *names):
    given = [n for n in names if getattr(args, n, None) is not None]
    if len(given) != 1:
        flags = ", ".join("--" + n.replace("_", "-") for n in names)
        raise ConfigError(f"give exactly one of {flags}")
    return given[0]


def cmd_tail(args):
    source = _exclusive(args, "family", "joint_pmf", "pairs")
    sched = _schedule(args)
    estimates, warnings = [], []
    if source == "pairs":
        data = _read(args.pairs, 2)
        try:
            sample = PairedSample(data[:, 0], data[:, 1])
            for side in _sides(args):
                estimates.append(empirical_lambda_path(sample, side, sched, _ranks(args)).to_dict())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return _report(args, estimates, warnings)

    if source == "joint_pmf":
        try:
            jp = read_joint_pmf(args.joint_pmf)
        except OSError as exc:
            raise InputError(f"cannot read {args.joint_pmf}: {exc}") from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        c = checkerboard_extend(subcopula_from_joint(jp))
        warnings.append(EXTENSION_CAVEAT)
    else:
        c = make_family(args)

    for side in _sides(args):
        tilde = lambda_tilde_upper if side == UPPER else lambda_tilde_lower
        est = tilde(c, sched)
        estimates.append(est.to_dict())
        warnings.extend(f"{est.label}: {w}" for w in est.warnings)
        if c.continuous_margins:
            std = (lambda_standard_upper_path if side == UPPER
                   else lambda_standard_lower_path)(c, sched)
            estimates.append(std.to_dict())
    return _report(args, estimates, warnings)


def cmd_auto(args):
    if args.series is None:
        raise ConfigError("auto needs --series")
    data = _read(args.series, 1)
    sched = _schedule(args)
    estimates, warnings = [], []
    try:
        series = SeriesSample(data[:, 0])
        for side in _sides(args):
            fn = auto_tail_param if side == UPPER else auto_tail_lower
            path = fn(series, args.lag, sched, _ranks(args))
            estimates.append(path.to_dict())
            if np.any(np.isnan(path.values)):
                warnings.append(f"auto_tail_{side}: undefined levels in path")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return _report(args, estimates, warnings)


def cmd_brv(args):
    if args.family is None:
        raise ConfigError("brv needs --family")
    c = make_family(args)
    res = brv_consistency(c, default_xs())
    return _report(args, [res.to_dict()], res.warnings)


def cmd_validate(args):
    _exclusive(args, "family", "joint_pmf")
    if args.joint_pmf:
        try:
            c = checkerboard_extend(subcopula_from_joint(read_joint_pmf(args.joint_pmf)))
        except OSError as exc:
            raise InputError(str(exc)) from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        c = make_family(args)
    rep = validate_grid(c, args.grid)
    out = rep.to_dict()
    out["label"] = "validate_grid"
    return _report(args, [out])


def cmd_simulate(args):
    if args.family is None:
        raise ConfigError("simulate needs --family")
    if args.n is None or args.n < 2:
        raise ConfigError("simulate needs --n >= 2")
    fam = args.family.replace("-", "_")
    seed = 0 if args.seed is None else args.seed
    params = " ".join(f"{k}={getattr(args, k)}" for k in ("theta", "rho", "nu")
                      if getattr(args, k) is not None)
    header = f"seed={seed} family={fam} n={args.n}" + (f" {params}" if params else "")
    try:
        if fam == "moving_max":
            cols = [moving_max_series(args.n, seed).values]
        elif fam == "iid":
            cols = [iid_series(args.n, seed).values]
        else:
            s = sample_copula(make_family(args), args.n, seed)
            cols = [s.x, s.y]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return format_csv(cols, header)


def _report_csv(report):
    lines = ["label,side,t,value"]
    for est in report["estimates"]:
        path = est.get("path")
        if not path:
            continue
        values = path.get("ratio", path.get("value"))
        for t, v in zip(path["t"], values):
            lines.append(f"{est['label']},{est.get('side', '')},{t!r},"
                         f"{'' if v is None else repr(v)}")
    return "\n".join(lines) + "\n"


def _emit(args, text):
    if args.out:
        try:
            write_atomic(args.out, text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def build_parser():
    p = _Parser(prog="tails", description="Generalized tail dependence for bivariate copulas.")
    p.add_argument("--version", action="version", version=f"tails {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--family")
        sp.add_argument("--theta", type=float)
        sp.add_argument("--rho", type=float)
        sp.add_argument("--nu", type=float)
        sp.add_argument("--out")

    def estimation(sp):
        sp.add_argument("--side", choices=("upper", "lower", "both"), default="both")
        sp.add_argument("--schedule")
        sp.add_argument("--ranks", choices=("max", "mid"), default="max")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("tail", help="generalized tail dependence")
    common(sp)
    estimation(sp)
    sp.add_argument("--joint-pmf")
    sp.add_argument("--pairs")
    sp.set_defaults(func=cmd_tail)

    sp = sub.add_parser("auto", help="auto tail dependence of a series at a lag")
    common(sp)
    estimation(sp)
    sp.add_argument("--series")
    sp.add_argument("--lag", type=int, default=1)
    sp.set_defaults(func=cmd_auto, side="upper")

    sp = sub.add_parser("brv", help="regular-variation consistency check")
    common(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_brv)

    sp = sub.add_parser("simulate", help="seeded samples as CSV")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("validate", help="check copula axioms on a grid")
    common(sp)
    sp.add_argument("--joint-pmf")
    sp.add_argument("--grid", type=int, default=100)
    sp.add_argument("--format", choices=("json",), default="json")
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
        if isinstance(result, str):
            text = result
        elif getattr(args, "format", "json") == "csv":
            text = _report_csv(result)
        else:
            text = json.dumps(result, indent=2, sort_keys=True) + "\n"
        _emit(args, text)
    except (InputError, ConfigError) as exc:
        log.error("%s", exc)
        print(f"tails: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
