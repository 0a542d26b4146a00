"""Command line front end: ``fit``, ``test``, ``power``, ``critical``.

Randomized subcommands require an explicit ``--seed``; given the same seed
the output is byte-identical for any ``--threads`` value.  Exit codes:
0 success, 64 usage, 65 data, 70 numeric failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .datasets import ingest
from .distributions import (
    AlternativeSpec,
    CensoringModel,
    CensoringSpec,
    Family,
    calibrate_censoring,
)
from .errors import ConfigError, DataError, NumericError
from .estimation import weibull_mle
from .reporting import ReportTable
from .resampling import (
    PowerStudyConfig,
    null_statistic_pool,
    p_values,
    upper_order_statistic,
    warp_speed_pools,
    warp_speed_power,
)
from .statistics import DEFAULT_STATISTICS, StatisticKind, StatisticSpec

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NUMERIC = 70

_FAMILY_ALIASES = {
    "w": Family.WEIBULL,
    "weibull": Family.WEIBULL,
    "gamma": Family.GAMMA,
    "g": Family.GAMMA,
    "ln": Family.LOGNORMAL,
    "lognormal": Family.LOGNORMAL,
    "chisq": Family.CHI_SQUARE,
    "chi2": Family.CHI_SQUARE,
    "chisquare": Family.CHI_SQUARE,
    "beta": Family.BETA,
    "lind": Family.LINDLEY,
    "lindley": Family.LINDLEY,
}

_CENSOR_ALIASES = {
    "none": CensoringModel.NONE,
    "exponential": CensoringModel.EXPONENTIAL,
    "exp": CensoringModel.EXPONENTIAL,
    "uniform": CensoringModel.UNIFORM,
    "unif": CensoringModel.UNIFORM,
    "koziol-green": CensoringModel.KOZIOL_GREEN,
    "kg": CensoringModel.KOZIOL_GREEN,
}

NULL_ONLY_ALTERNATIVES = ("W:0.5", "W:1.5", "W:2")


def parse_statistic(text: str) -> StatisticSpec:
    """Parse 'KS', 'S1:5', 'KR', 'KR:-5:200' and friends."""
    parts = text.split(":")
    try:
        kind = StatisticKind(parts[0].strip().upper())
    except ValueError:
        raise ConfigError(f"unknown statistic {parts[0]!r}") from None
    try:
        if kind in (StatisticKind.S1, StatisticKind.S2):
            if len(parts) != 2:
                raise ConfigError(f"{kind.value} needs a tuning parameter, e.g. {kind.value}:5")
            return StatisticSpec(kind, a=float(parts[1]))
        if kind is StatisticKind.KR:
            if len(parts) == 1:
                return StatisticSpec(kind)
            if len(parts) == 2:
                return StatisticSpec(kind, a=float(parts[1]))
            if len(parts) == 3:
                return StatisticSpec(kind, a=float(parts[1]), m=int(parts[2]))
            raise ConfigError("KR takes at most 'KR:a:m'")
        if len(parts) != 1:
            raise ConfigError(f"{kind.value} takes no parameters")
        return StatisticSpec(kind)
    except ValueError as exc:
        raise ConfigError(f"bad statistic {text!r}: {exc}") from None


def parse_statistics(text: str | None) -> tuple[StatisticSpec, ...]:
    if text is None:
        return DEFAULT_STATISTICS
    specs = tuple(parse_statistic(tok) for tok in text.split(",") if tok.strip())
    if not specs:
        raise ConfigError("empty statistic list")
    return specs


def parse_alternative(text: str) -> AlternativeSpec:
    """Parse 'LN:0.5', 'beta:0.5,1', 'W:2' into a lifetime spec."""
    name, sep, rest = text.partition(":")
    family = _FAMILY_ALIASES.get(name.strip().lower())
    if family is None:
        raise ConfigError(f"unknown lifetime family {name!r}")
    if not sep or not rest.strip():
        raise ConfigError(f"{name} needs parameters, e.g. {name}:2")
    try:
        params = tuple(float(tok) for tok in rest.split(","))
    except ValueError:
        raise ConfigError(f"bad parameters in {text!r}") from None
    return AlternativeSpec(family, params)


def parse_censoring(text: str) -> tuple[CensoringModel, float | None]:
    """Parse 'none' or 'model:proportion' into (model, target proportion)."""
    name, sep, rest = text.partition(":")
    model = _CENSOR_ALIASES.get(name.strip().lower())
    if model is None:
        raise ConfigError(f"unknown censoring model {name!r}")
    if model is CensoringModel.NONE:
        if sep:
            raise ConfigError("censoring model 'none' takes no proportion")
        return model, None
    if not sep or not rest.strip():
        raise ConfigError(f"censoring model {name} needs a proportion, e.g. {name}:0.1")
    try:
        prop = float(rest)
    except ValueError:
        raise ConfigError(f"bad censoring proportion in {text!r}") from None
    return model, prop


def _resolve_censoring(
    model: CensoringModel, prop: float | None, lifetime: AlternativeSpec
) -> CensoringSpec:
    if model is CensoringModel.NONE:
        return CensoringSpec(CensoringModel.NONE)
    return calibrate_censoring(model, lifetime, prop)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the CLI contract wants 64.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="weibullgof",
        description="Goodness-of-fit tests for the Weibull distribution under right censoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fit = sub.add_parser("fit", help="fit the censored Weibull model to a dataset")
    p_fit.add_argument("path", help="CSV file with 'time,delta' rows")
    p_fit.set_defaults(func=cmd_fit)

    p_test = sub.add_parser("test", help="bootstrap p-values for a dataset")
    p_test.add_argument("path", help="CSV file with 'time,delta' rows")
    p_test.add_argument("--stats", help="comma list, e.g. KS,CM,S1:5 (default: all ten)")
    p_test.add_argument("-B", "--replications", type=int, default=10000, metavar="B")
    p_test.add_argument("--seed", type=int, required=True)
    p_test.add_argument("--threads", type=int, default=1)
    p_test.add_argument("--format", choices=("text", "csv"), default="text")
    p_test.set_defaults(func=cmd_test)

    p_power = sub.add_parser("power", help="warp-speed power study")
    p_power.add_argument("--alt", action="append", default=[], metavar="FAMILY:PARAMS",
                         help="lifetime law, e.g. LN:0.5 or beta:0.5,1 (repeatable)")
    p_power.add_argument("--null-only", action="store_true",
                         help="use the Weibull null rows W:0.5, W:1.5, W:2")
    p_power.add_argument("--censor", default="none", metavar="MODEL[:PROP]",
                         help="none, exponential:p, uniform:p or koziol-green:p")
    p_power.add_argument("--n", type=int, required=True)
    p_power.add_argument("--reps", type=int, required=True)
    p_power.add_argument("--alpha", type=float, default=0.10)
    p_power.add_argument("--stats", help="comma list (default: all ten)")
    p_power.add_argument("--seed", type=int, required=True)
    p_power.add_argument("--threads", type=int, default=1)
    p_power.add_argument("--format", choices=("text", "csv"), default="text")
    p_power.set_defaults(func=cmd_power)

    p_crit = sub.add_parser("critical", help="null critical value of one statistic")
    p_crit.add_argument("--stat", required=True, metavar="SPEC", help="e.g. S1:5 or KS")
    p_crit.add_argument("--censor", default="none", metavar="MODEL[:PROP]",
                        help="censoring calibrated against the unit Weibull null")
    p_crit.add_argument("--n", type=int, required=True)
    p_crit.add_argument("--reps", type=int, required=True)
    p_crit.add_argument("--alpha", type=float, default=0.10)
    p_crit.add_argument("--seed", type=int, required=True)
    p_crit.add_argument("--threads", type=int, default=1)
    p_crit.set_defaults(func=cmd_critical)

    return parser


def cmd_fit(args) -> int:
    sample = ingest(args.path)
    params = weibull_mle(sample)
    print(f"n         {sample.n}")
    print(f"events    {sample.num_events}")
    print(f"censored  {sample.n - sample.num_events}")
    print(f"scale     {params.scale:.10g}")
    print(f"shape     {params.shape:.10g}")
    return 0


def cmd_test(args) -> int:
    sample = ingest(args.path)
    specs = parse_statistics(args.stats)
    if args.replications < 99:
        raise ConfigError("need at least 99 bootstrap replications")
    params = weibull_mle(sample)
    print(
        f"fitted scale={params.scale:.6g} shape={params.shape:.6g} "
        f"censored={sample.censoring_fraction:.4f} (n={sample.n})",
        file=sys.stderr,
    )
    pvals = p_values(sample, specs, args.replications, args.seed, args.threads)
    echo = (
        f"B={args.replications};seed={args.seed};n={sample.n};"
        f"events={sample.num_events};scale={params.scale:.6g};shape={params.shape:.6g}"
    )
    table = ReportTable()
    for spec, p in zip(specs, pvals):
        se = float(np.sqrt(p * (1.0 - p) / args.replications))
        table.add(spec.label, p, se, echo)
    sys.stdout.write(table.render(args.format))
    return 0


def cmd_power(args) -> int:
    if args.null_only:
        if args.alt:
            raise ConfigError("--null-only and --alt are mutually exclusive")
        alts = [parse_alternative(a) for a in NULL_ONLY_ALTERNATIVES]
    else:
        if not args.alt:
            raise ConfigError("no alternatives given; use --alt or --null-only")
        alts = [parse_alternative(a) for a in args.alt]
    specs = parse_statistics(args.stats)
    model, prop = parse_censoring(args.censor)

    table = ReportTable()
    grid = []
    for alt in alts:
        censoring = _resolve_censoring(model, prop, alt)
        config = PowerStudyConfig(
            lifetime=alt,
            censoring=censoring,
            n=args.n,
            reps=args.reps,
            alpha=args.alpha,
            seed=args.seed,
            statistics=specs,
            threads=args.threads,
        )
        result = warp_speed_power(config)
        if result.redraw_warning:
            print(
                f"warning: {alt.label}/{censoring.label}: redraw rate "
                f"{result.redraw_rate:.3f} exceeds 1%",
                file=sys.stderr,
            )
        echo = (
            f"alt={alt.label};censor={censoring.label};n={args.n};reps={args.reps};"
            f"alpha={args.alpha:g};seed={args.seed}"
        )
        cells = {}
        for spec, power, se in zip(specs, result.powers, result.std_errors):
            table.add(spec.label, power, se, echo)
            cells[spec.label] = float(power)
        grid.append((f"{alt.label} | {censoring.label}", cells))
    table.grid_rows = grid
    sys.stdout.write(table.render(args.format))
    return 0


def cmd_critical(args) -> int:
    spec = parse_statistic(args.stat)
    model, prop = parse_censoring(args.censor)
    if args.reps < 100:
        raise ConfigError("need at least 100 replications")
    if not 0.0 < args.alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {args.alpha}")
    null_lifetime = AlternativeSpec(Family.WEIBULL, (1.0,))
    if model is CensoringModel.NONE:
        pool = null_statistic_pool(args.n, (spec,), args.reps, args.seed, args.threads)
        crit = upper_order_statistic(pool[:, 0], args.alpha)
    else:
        censoring = _resolve_censoring(model, prop, null_lifetime)
        config = PowerStudyConfig(
            lifetime=null_lifetime,
            censoring=censoring,
            n=args.n,
            reps=args.reps,
            alpha=args.alpha,
            seed=args.seed,
            statistics=(spec,),
            threads=args.threads,
        )
        _, w_star, _ = warp_speed_pools(config)
        crit = upper_order_statistic(w_star[:, 0], args.alpha)
    print(f"{crit:.10g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"weibullgof: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"weibullgof: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"weibullgof: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
