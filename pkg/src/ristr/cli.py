"""Command-line entry point: ``ristr single | sweep | table1``.

Exit codes: 0 success, 1 usage or configuration error, 2 tap-count mismatch
against the reference table.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import warnings
from dataclasses import replace
from typing import Sequence

from .config import load_config, make_sweep, parse_values
from .errors import NearFieldWarning, ReplicationMismatch, RisTrError
from .experiment import format_table, reproduce_table1, rows_to_csv, run_single, run_sweep
from .geometry import SPEED_OF_LIGHT

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file (defaults apply when omitted)")
    common.add_argument("--output", "-o", help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "table"), help="output format (overrides config)")
    common.add_argument("--units", choices=("db", "linear", "both"), help="table units (overrides config)")
    common.add_argument("--strict-near-field", action="store_true",
                        help="fail instead of warning when an endpoint is outside the near field")
    common.add_argument("--delay-model", choices=("approx", "exact"), help="path delay model")
    common.add_argument("-v", "--verbose", action="store_true", help="repeat near-field warnings for every point")

    parser = _Parser(prog="ristr", description="Near-field RIS time-reversal link simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("single", parents=[common], help="evaluate one configuration")

    sw = sub.add_parser("sweep", parents=[common], help="sweep element count, bandwidth or topology")
    sw.add_argument("--kind", choices=("element_count", "bandwidth", "topology"))
    sw.add_argument("--values", help='comma list or inclusive "start:stop:step" range')
    sw.add_argument("--workers", type=int, default=1, help="concurrent sweep points")

    t1 = sub.add_parser("table1", parents=[common], help="reproduce the reference tap-count table")
    t1.add_argument("--bandwidth", type=float, action="append",
                    help="restrict to this bandwidth in Hz (repeatable)")
    t1.add_argument("--speed-of-light", type=float, default=SPEED_OF_LIGHT,
                    help="override c0 (fault injection)")
    return parser


@contextlib.contextmanager
def _open_output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(args):
    loaded = load_config(args.config)
    system = loaded.system
    if args.strict_near_field:
        system = replace(system, near_field_policy="strict")
    if args.delay_model:
        system = replace(system, delay_model="exact" if args.delay_model == "exact" else "approximate")
    fmt = args.format or loaded.output_format
    units = args.units or loaded.output_units
    return loaded._replace(system=system, output_format=fmt, output_units=units)


def _cmd_single(args) -> int:
    loaded = _load(args)
    row = run_single(loaded.system, loaded.topology)
    text = rows_to_csv([row]) if loaded.output_format == "csv" else format_table([row], loaded.output_units)
    with _open_output(args.output) as out:
        out.write(text)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    loaded = _load(args)
    if args.kind or args.values:
        if not (args.kind and args.values):
            raise RisTrError("--kind and --values must be given together")
        spec = make_sweep(loaded, args.kind, _cli_values(args.kind, args.values))
    elif loaded.sweep is not None:
        spec = make_sweep(loaded, loaded.sweep.kind, loaded.sweep.values, loaded.sweep.topology_rule)
    else:
        raise RisTrError("no sweep defined: add a 'sweep' section to the config or pass --kind/--values")
    with _open_output(args.output) as out:
        if loaded.output_format == "csv":
            run_sweep(spec, out=out, workers=args.workers)
        else:
            out.write(format_table(run_sweep(spec, workers=args.workers), loaded.output_units))
    return EXIT_OK


def _cli_values(kind: str, text: str) -> list:
    if kind == "topology":
        pairs = []
        for item in text.split(","):
            m, _, n = item.strip().lower().partition("x")
            pairs.append((int(m), int(n)))
        return pairs
    return parse_values(text)


def _cmd_table1(args) -> int:
    bandwidths = tuple(args.bandwidth) if args.bandwidth else (2e9, 4e9)
    report = reproduce_table1(bandwidths, speed_of_light=args.speed_of_light)
    text = report.to_table() if args.format == "table" else report.to_csv()
    with _open_output(args.output) as out:
        out.write(text)
    report.check()
    return EXIT_OK


COMMANDS = {"single": _cmd_single, "sweep": _cmd_sweep, "table1": _cmd_table1}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NearFieldWarning)
        try:
            return COMMANDS[args.command](args)
        except ReplicationMismatch as exc:
            print(f"ristr: {exc}", file=sys.stderr)
            return EXIT_MISMATCH
        except (RisTrError, ValueError, OSError) as exc:
            print(f"ristr: {exc}", file=sys.stderr)
            return EXIT_USAGE
        finally:
            _report_near_field(caught, args.verbose)


def _report_near_field(caught, verbose: bool) -> None:
    msgs = [str(w.message) for w in caught if issubclass(w.category, NearFieldWarning)]
    if not msgs:
        return
    if verbose:
        for m in msgs:
            print(f"ristr: warning: {m}", file=sys.stderr)
    else:
        print(f"ristr: warning: {len(msgs)} point(s) outside the near-field bound, first: {msgs[0]}"
              " (use -v to list all)", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
