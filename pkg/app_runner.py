import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from streamforge.bench import run_benchmarks, write_report
from streamforge.datas.config import load_search_config
from streamforge.errors import ConfigError, EvalError, InternalCheckError, ParseError, SynthesisFailure
from streamforge.evaluation.concrete import run_scheme
from streamforge.ir.parser import parse_program, parse_scheme
from streamforge.ir.printer import print_rational
from streamforge.synthesizer import synthesize
from streamforge.utils.logger import Logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """Reports bad flags as UsageError (exit 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _rationals(text: str, what: str):
    try:
        return [Fraction(tok) for tok in (text or "").split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what}: expected rationals separated by spaces ({exc})") from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="streamforge", description="Turn offline list programs into online streaming schemes.")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthesize an online scheme for a .off program")
    synth.add_argument("file")
    synth.add_argument("--timeout", type=float, default=None, help="seconds per hole")
    synth.add_argument("--unroll-depth", type=int, default=None)
    synth.add_argument("--max-size", type=int, default=None)
    synth.add_argument("--tests", type=int, default=None)
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--workers", type=int, default=None)
    synth.add_argument("--emit", choices=("text", "json"), default="text")
    synth.add_argument("--debug", action="store_true")
    synth.add_argument("--no-decompose", action="store_true")
    synth.add_argument("--no-symbolic", action="store_true")

    bench = sub.add_parser("bench", help="synthesize every .off program in a directory")
    bench.add_argument("directory")
    bench.add_argument("--report", choices=("csv", "json"), default="csv")
    bench.add_argument("--output", default=None, help="also write the report to this file")
    bench.add_argument("--timeout", type=float, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--debug", action="store_true")
    bench.add_argument("--no-decompose", action="store_true")
    bench.add_argument("--no-symbolic", action="store_true")

    run = sub.add_parser("run", help="replay a scheme over a stream")
    run.add_argument("scheme_file")
    run.add_argument("--stream", required=True, help='e.g. "1 2 3/2"')
    run.add_argument("--args", default="", help="values of the extra arguments")
    return parser


def _config(ns):
    return load_search_config(
        timeout_seconds=ns.timeout,
        unroll_depth=getattr(ns, "unroll_depth", None),
        max_size=getattr(ns, "max_size", None),
        test_count=getattr(ns, "tests", None),
        seed=ns.seed,
        workers=getattr(ns, "workers", None),
        use_decomposition=False if ns.no_decompose else None,
        use_symbolic=False if ns.no_symbolic else None,
    )


def cmd_synth(ns, out) -> int:
    logger = Logger(threshold="debug" if ns.debug else None)
    program = parse_program(_read(ns.file))
    result = synthesize(program, _config(ns), logger)
    if ns.emit == "json":
        print(json.dumps(result.to_json(), indent=2), file=out)
        return EXIT_OK
    print(result.to_text(), file=out)
    for report in result.hole_reports:
        print(f"; hole {report.hole_id}: {report.method} ({report.verification}, {report.elapsed:.2f}s)", file=out)
    if result.pruned_accumulators:
        print(f"; pruned: {' '.join(f'y{i}' for i in result.pruned_accumulators)}", file=out)
    return EXIT_OK


def cmd_bench(ns, out) -> int:
    logger = Logger(threshold="debug" if ns.debug else None)
    if not Path(ns.directory).is_dir():
        raise UsageError(f"{ns.directory} is not a directory")
    df = run_benchmarks(ns.directory, _config(ns), logger)
    print(write_report(df, ns.report, ns.output), file=out)
    return EXIT_OK if df["solved"].all() else EXIT_FAILED


def cmd_run(ns, out) -> int:
    scheme = parse_scheme(_read(ns.scheme_file))
    stream = _rationals(ns.stream, "--stream")
    args = _rationals(ns.args, "--args")
    if len(args) != len(scheme.extra_args):
        raise UsageError(f"scheme takes {len(scheme.extra_args)} extra argument(s), got {len(args)}")
    for value in run_scheme(scheme, stream, args):
        print(value if isinstance(value, bool) else print_rational(value), file=out)
    return EXIT_OK


COMMANDS = {"synth": cmd_synth, "bench": cmd_bench, "run": cmd_run}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        ns = build_parser().parse_args(argv)
        return COMMANDS[ns.command](ns, out)
    except SynthesisFailure as exc:
        print(exc.describe(), file=sys.stderr)
        return EXIT_FAILED
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ParseError, ConfigError, EvalError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
