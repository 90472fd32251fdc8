"""Command-line interface: ``discordlab {evolve,critical,region,xxz,verify}``.

Exit status is 0 on success, 1 on a numeric failure (including a failed
verification suite) and 2 on invalid arguments. Curves are written as CSV,
reports as JSON with sorted keys, and ``--format svg`` or ``--figure PATH``
render a matplotlib figure.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import __version__
from .channels import ChannelKind
from .dynamics import (
    critical_points,
    detect_kinks,
    double_sc_region,
    freezing_intervals,
    trajectory,
)
from .qstate import CorrelationVector

EVOLVE_HEADER = ("param", "c1p", "c2p", "c3p", "dg1", "dg2")
REGION_HEADER = ("c1", "c2", "c3", "class")
XXZ_HEADER = ("delta", "length", "channel", "c1", "c3", "analytic_sc", "numeric_sc", "degenerate")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Numbers in delimited output: 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _round(obj):
    """Round floats in a JSON-bound structure to 12 significant digits."""
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(_round(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _svg_target(args) -> str:
    if not args.out or args.out == "-":
        raise UsageError("--format svg needs --out PATH")
    return args.out


def _parse_c(text: str) -> CorrelationVector:
    try:
        c = CorrelationVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if any(abs(x) > 1 for x in c):
        raise argparse.ArgumentTypeError(f"components must lie in [-1, 1]: {text}")
    return c


def _parse_channel(text: str) -> ChannelKind:
    try:
        return ChannelKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {n}")
    return n


# -- subcommands ---------------------------------------------------------------

def cmd_evolve(args) -> int:
    t = trajectory(args.c, args.channel, args.steps)
    report = critical_points(args.c, args.channel)
    if args.format == "csv":
        rows = (
            (p, *np.abs(cp), dg, d2)
            for p, cp, dg, d2 in zip(t.params, t.cp, t.dg, t.d2)
        )
        _emit(write_csv(EVOLVE_HEADER, rows), args.out)
    elif args.format == "json":
        _emit(dump_json({
            "channel": t.kind.value,
            "c": list(t.c),
            "critical_points": list(report.points),
            "kinks": detect_kinks(t) if len(t) >= 50 else [],
            "freezing": [vars(f) for f in freezing_intervals(t)] if len(t) >= 50 else [],
            "columns": list(EVOLVE_HEADER),
            "rows": [[p, *np.abs(cp), dg, d2] for p, cp, dg, d2 in zip(t.params, t.cp, t.dg, t.d2)],
        }), args.out)
    else:
        from .plotting import plot_trajectory
        plot_trajectory(t, _svg_target(args), report.points)
    if args.figure:
        from .plotting import plot_trajectory
        plot_trajectory(t, args.figure, report.points)
    return 0


def cmd_critical(args) -> int:
    report = critical_points(args.c, args.channel)
    if not report.physical:
        print(f"warning: c = {tuple(args.c)} lies outside the physical tetrahedron",
              file=sys.stderr)
    _emit(dump_json(report.as_dict()), args.out)
    return 0


def cmd_region(args) -> int:
    rows = double_sc_region(args.channel, args.samples, args.seed, include=args.include_point)
    if args.format == "csv":
        _emit(write_csv(REGION_HEADER, ((*c, label) for c, label in rows)), args.out)
    elif args.format == "json":
        counts = {k: sum(1 for _, label in rows if label == k) for k in ("none", "single", "double")}
        _emit(dump_json({
            "channel": args.channel.value,
            "seed": args.seed,
            "samples": args.samples,
            "counts": counts,
            "rows": [[*c, label] for c, label in rows],
        }), args.out)
    else:
        from .plotting import plot_region
        plot_region(rows, _svg_target(args), args.include_point)
    if args.figure:
        from .plotting import plot_region
        plot_region(rows, args.figure, args.include_point)
    return 0


def cmd_xxz(args) -> int:
    from .xxz import xxz_sudden_change_table

    deltas = [d for group in (args.delta or [[-1.5, 0.0, 2.0]]) for d in group]
    channels = args.channel or list(ChannelKind)
    rows = xxz_sudden_change_table(deltas, args.length, channels, args.steps)
    if args.format == "csv":
        _emit(write_csv(XXZ_HEADER, (
            (r.delta, r.length, r.channel.value, r.c.c1, r.c.c3, r.analytic, r.numeric, r.degenerate)
            for r in rows)), args.out)
    elif args.format == "json":
        out = []
        for r in rows:
            d = r.as_dict()
            t = trajectory(tuple(r.c), r.channel, args.steps)
            d["trajectory"] = {"param": t.params.tolist(), "dg1": t.dg.tolist(), "dg2": t.d2.tolist()}
            out.append(d)
        _emit(dump_json({"length": args.length, "rows": out}), args.out)
    else:
        _plot_xxz(rows, _svg_target(args), args.steps)
    if args.figure:
        _plot_xxz(rows, args.figure, args.steps)
    return 0


def _plot_xxz(rows, path, steps):
    from .plotting import plot_xxz

    channel = rows[0].channel
    curves = {f"{r.delta:g}": trajectory(tuple(r.c), r.channel, steps)
              for r in rows if r.channel is channel}
    plot_xxz(curves, path, channel.value)


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    names = args.suite or list(SUITES)
    failed = 0
    for name in names:
        result = run_suite(name, args.samples, args.resolution, args.seed)
        print(result.summary(), flush=True)
        failed += not result.passed
    print(f"{len(names) - failed}/{len(names)} suites passed")
    return 1 if failed else 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discordlab",
        description="Trace-norm geometric discord of Bell-diagonal states under local noise.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_opts(p, formats=("csv", "json", "svg"), default="csv"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    p = sub.add_parser("evolve", help="discord along a decoherence trajectory")
    p.add_argument("--c", type=_parse_c, required=True, metavar="C1,C2,C3",
                   help="correlation vector, e.g. 0.1,0.2,0.3 (use --c=-1,... for a leading minus)")
    p.add_argument("--channel", type=_parse_channel, required=True, help="bf, pf, bpf or gad")
    p.add_argument("--steps", type=_positive, default=1000)
    output_opts(p)
    p.add_argument("--figure", metavar="PATH", help="also render a figure (.png/.svg/.pdf)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("critical", help="analytic sudden-change points")
    p.add_argument("--c", type=_parse_c, required=True, metavar="C1,C2,C3")
    p.add_argument("--channel", type=_parse_channel, required=True)
    output_opts(p, formats=("json",), default="json")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("region", help="classify random physical states")
    p.add_argument("--channel", type=_parse_channel, required=True)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--include-point", type=_parse_c, action="append", default=[],
                   metavar="C1,C2,C3", help="classify this state too (listed first)")
    output_opts(p)
    p.add_argument("--figure", metavar="PATH")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("xxz", help="sudden changes of nearest neighbours in the XXZ chain")
    p.add_argument("--delta", type=_parse_floats, action="append", metavar="D[,D...]",
                   help="anisotropy; repeatable (default -1.5,0,2)")
    p.add_argument("--length", type=_positive, default=12)
    p.add_argument("--channel", type=_parse_channel, action="append",
                   help="repeatable (default: all four)")
    p.add_argument("--steps", type=_positive, default=1000)
    output_opts(p)
    p.add_argument("--figure", metavar="PATH")
    p.set_defaults(func=cmd_xxz)

    p = sub.add_parser("verify", help="run the oracle and property suites")
    p.add_argument("--suite", action="append", metavar="NAME",
                   help="core, oracle, channels, dynamics, proposition1, region, xxz")
    p.add_argument("--samples", type=_positive)
    p.add_argument("--resolution", type=_positive)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"discordlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"discordlab {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
