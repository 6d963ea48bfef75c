"""Command-line entry point: ``purecode <command> [flags]``.

Commands: table2, yield-curve, simulate, breed, channel.  CSV output uses a
header row, commas, ``\\n`` line endings and UTF-8.  Floats are rounded
half-even to ``--precision`` decimals (``--precision full`` keeps repr).

Exit codes: 0 success (or usable channel), 2 channel not usable, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import breeding, channels, protocol, recursion
from ._format import format_float
from .rng import MASK64, default_seed

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_USABLE = 2

THRESHOLD_DECIMALS = 4
DEFAULT_DECIMALS = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for "channel not usable"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _precision(text: str) -> int | None:
    if text == "full":
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("precision must be >= 0 or 'full'")
    return value


def _k_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty k list")
    return out


def _seed(text: str) -> int:
    return int(text, 0)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _info(args, message: str) -> None:
    # keep stdout clean when it carries the CSV
    stream = sys.stdout if args.out else sys.stderr
    print(message, file=stream)


def cmd_table2(args) -> int:
    k_max = args.k
    if not 1 <= k_max <= recursion.DEFAULT_MAX_K:
        raise UsageError(f"--k must be in 1..{recursion.DEFAULT_MAX_K}, got {k_max}")
    thresholds = [(k, recursion.solve_threshold(k)) for k in range(1, k_max + 1)]
    best = min(thresholds, key=lambda t: t[1])[0]
    prec = THRESHOLD_DECIMALS if args.precision is False else args.precision
    lines = ["k  f_threshold"]
    for k, f in thresholds:
        mark = "  Best" if k == best else ""
        lines.append(f"{k:<2} {format_float(f, THRESHOLD_DECIMALS)}{mark}")
    rows = [[k, format_float(f, prec)] for k, f in thresholds]
    text = _csv_text(["k", "f_threshold"], rows)
    if args.out:
        print("\n".join(lines))
        _emit(text, args.out)
    else:
        print("\n".join(lines), file=sys.stderr)
        _emit(text, None)
    return EXIT_OK


def cmd_yield_curve(args) -> int:
    ks = args.k_list if args.k_list is not None else ([args.k] if args.k else list(range(1, 8)))
    try:
        points = recursion.yield_curve(ks, args.f_min, args.f_max, args.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prec = DEFAULT_DECIMALS if args.precision is False else args.precision
    rows = [[p.k, format_float(p.f, prec), format_float(p.d_value, prec)] for p in points]
    _emit(_csv_text(["k", "f", "D"], rows), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.k < 1 or args.k > protocol.MAX_SIM_K:
        raise UsageError(f"--k must be in 1..{protocol.MAX_SIM_K}")
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    if not 0.0 <= args.f <= 1.0:
        raise UsageError("--f must lie in [0, 1]")
    seed = args.seed & MASK64
    hist = protocol.simulate_block(args.k, args.f, args.shots, seed)
    _emit(protocol.histogram_csv(hist, args.k), args.out)
    prec = DEFAULT_DECIMALS if args.precision is False else args.precision
    emp = protocol.stage_agreement(args.k, args.f, hist)
    ref = protocol.stage_agreement(args.k, args.f)
    for j, (e, r) in enumerate(zip(emp, ref), start=1):
        _info(args, f"stage {j}: p0 empirical={format_float(e, prec)} analytic={format_float(r, prec)}")
    tvd = protocol.conditional_tvd(hist, args.k, args.f)
    _info(args, f"shots={args.shots} seed={seed} "
                f"max_conditional_tvd={format_float(max(tvd.values()), prec)} "
                f"weighted_conditional_tvd={format_float(protocol.weighted_tvd(hist, args.k, args.f), prec)}")
    return EXIT_OK


def cmd_breed(args) -> int:
    if not 1 <= args.n_pairs <= breeding.MAX_DECODE_PAIRS:
        raise UsageError(f"--n-pairs must be in 1..{breeding.MAX_DECODE_PAIRS} "
                         f"(exhaustive decoding limit is {breeding.MAX_DECODE_PAIRS} pairs)")
    if args.m < 0:
        raise UsageError("--m must be >= 0")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not 0.0 <= args.f <= 1.0:
        raise UsageError("--f must lie in [0, 1]")
    run = breeding.run_breeding(args.n_pairs, args.m, args.f, args.trials,
                                args.seed & MASK64, args.delta_bits)
    prec = DEFAULT_DECIMALS if args.precision is False else args.precision
    _emit(breeding.report_csv(run, prec), args.out)
    _info(args, f"trials={args.trials} failure_rate={format_float(run.failure_probability, prec)} "
                f"mean_success_prob={format_float(run.mean_success_probability, prec)} "
                f"collision_bound(delta={args.delta_bits:g})={format_float(run.collision_bound, prec)}")
    return EXIT_OK


def cmd_channel(args) -> int:
    if args.k < 1 or args.k > recursion.DEFAULT_MAX_K:
        raise UsageError(f"--k must be in 1..{recursion.DEFAULT_MAX_K}")
    spec = channels.load_channel_spec(args.spec)
    verdict = channels.channel_usable(spec, args.k)
    prec = DEFAULT_DECIMALS if args.precision is False else args.precision
    f_c = format_float(verdict.f_c, THRESHOLD_DECIMALS if args.precision is False else prec)
    print(f"f={format_float(verdict.f, prec)} f_c={f_c} k={args.k} "
          f"usable={'yes' if verdict.usable else 'no'}")
    if args.out:
        _emit(_csv_text(["k", "f", "f_c", "usable"],
                        [[args.k, format_float(verdict.f, prec), f_c,
                          "yes" if verdict.usable else "no"]]), args.out)
    return EXIT_OK if verdict.usable else EXIT_NOT_USABLE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write CSV here instead of standard output")
    common.add_argument("--precision", type=_precision, default=False,
                        help="decimals for floats in CSV output, or 'full'")
    common.add_argument("--seed", type=_seed, default=None,
                        help="64-bit seed (default: $PURECODE_SEED or a fixed constant)")

    parser = _Parser(prog="purecode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table2", parents=[common], help="fidelity thresholds S(k, f) = 1 for k = 1..K")
    p.add_argument("--k", "--k-max", dest="k", type=int, default=14)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("yield-curve", parents=[common], help="yield D(k, f) on a fidelity grid")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--k-list", type=_k_list, default=None, help="e.g. 1-7 or 1,3,5")
    p.add_argument("--f-min", type=float, default=0.80)
    p.add_argument("--f-max", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.005)
    p.set_defaults(func=cmd_yield_curve)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo histogram of one block round")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--f", type=float, default=0.85)
    p.add_argument("--shots", type=int, default=100_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("breed", parents=[common], help="exhaustive-decoding breeding trials")
    p.add_argument("--n-pairs", type=int, default=8)
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--f", type=float, default=0.95)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--delta-bits", type=float, default=2.0)
    p.set_defaults(func=cmd_breed)

    p = sub.add_parser("channel", parents=[common], help="usability verdict for a channel spec file")
    p.add_argument("spec", help="JSON channel spec")
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=cmd_channel)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        try:
            args.seed = default_seed()
        except ValueError:
            print("purecode: error: PURECODE_SEED is not an integer", file=sys.stderr)
            return EXIT_ERROR
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"purecode {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (channels.ChannelSpecError, OSError) as exc:
        print(f"purecode {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except recursion.ThresholdBracketError as exc:
        print(f"purecode {args.command}: solver error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
