"""Command-line interface.

Subcommands: ``learn``, ``generate``, ``evaluate``, ``benchmark``,
``export-dot``.  Exit codes: 0 success, 1 usage error, 2 data error
(unreadable/inconsistent input), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import replace
from typing import List, Optional

from . import formats
from .automata import MooreMachine, run
from .charsample import characteristic_sample, random_minimal_moore
from .errors import MooreLearnError
from .evaluation import (
    ALGORITHMS,
    AccuracyPolicy,
    accuracy,
    benchmark_csv,
    format_benchmark_table,
    run_benchmark,
)
from .learners import learn_mooremi, learn_prpni, learn_ptap

_LEARNERS = {"ptap": learn_ptap, "prpni": learn_prpni, "mooremi": learn_mooremi}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="moorelearn",
                     description="Learn Moore machines from input-output traces.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("learn", help="learn a machine from a trace file")
    p.add_argument("traces", help="trace file (line format, or JSON)")
    p.add_argument("--algo", choices=ALGORITHMS, default="mooremi",
                   help="learning algorithm (default: mooremi)")
    p.add_argument("--format", choices=("auto", "line", "json"), default="auto",
                   help="trace file format (default: by file suffix)")
    p.add_argument("-o", "--out", default=None,
                   help="write the machine JSON here (default: stdout)")
    p.add_argument("--dot", default=None,
                   help="also write a DOT rendering of the machine here")

    p = sub.add_parser("generate",
                       help="generate a random minimal machine and its "
                            "characteristic sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=10)
    p.add_argument("--inputs", type=int, default=2,
                   help="number of input symbols")
    p.add_argument("--outputs", type=int, default=2,
                   help="number of output symbols")
    p.add_argument("--format", choices=("auto", "line", "json"), default="auto",
                   help="sample file format (default: by file suffix)")
    p.add_argument("--out-machine", default=None,
                   help="write the machine JSON here")
    p.add_argument("--out-sample", default=None,
                   help="write the characteristic sample here (default: stdout)")

    p = sub.add_parser("evaluate",
                       help="score a machine against a test trace file")
    p.add_argument("machine", help="machine JSON file")
    p.add_argument("test", help="test trace file")
    p.add_argument("--format", choices=("auto", "line", "json"), default="auto")

    p = sub.add_parser("benchmark", help="run a benchmark config")
    p.add_argument("config", help="benchmark config file (key = value lines)")
    p.add_argument("--timeout-s", type=float, default=None,
                   help="override the per-run timeout from the config")
    p.add_argument("--csv", default=None, help="also write per-run rows as CSV")

    p = sub.add_parser("export-dot", help="render a machine JSON file as DOT")
    p.add_argument("machine", help="machine JSON file")
    p.add_argument("-o", "--out", default=None,
                   help="write the DOT here (default: stdout)")
    return parser


def _write_or_print(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_learn(args) -> int:
    ts = formats.load_traces(args.traces, args.format)
    result = _LEARNERS[args.algo](ts)
    m = result.machine
    _write_or_print(formats.machine_to_json(m), args.out)
    if args.dot is not None:
        _write_or_print(formats.machine_to_dot(m), args.dot)
    consistent = all(run(m, t.input) == t.output for t in ts.traces)
    stats = result.stats
    sys.stderr.write(
        "algo: %s\nstates: %d\ntime_s: %.6f\nmerge_attempts: %d\n"
        "merges_accepted: %d\nconsistent_with_training: %s\n"
        % (stats.algorithm, m.n_states, stats.wall_time_s,
           stats.merge_attempts, stats.merges_accepted,
           "true" if consistent else "false"))
    return EXIT_OK


def _cmd_generate(args) -> int:
    m = random_minimal_moore(args.seed, args.states, args.inputs, args.outputs)
    report = characteristic_sample(m)
    if args.out_machine is not None:
        formats.save_machine(m, args.out_machine)
    fmt = args.format
    if args.out_sample is None:
        text = (formats.traces_to_json(report.sample) if fmt == "json"
                else formats.write_traces(report.sample))
        sys.stdout.write(text)
    else:
        formats.save_traces(report.sample, args.out_sample, fmt)
    sys.stderr.write("states: %d\nsample_traces: %d\n"
                     % (m.n_states, len(report.sample.traces)))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    m = formats.load_machine(args.machine)
    if not isinstance(m, MooreMachine):
        raise MooreLearnError("evaluate requires a Moore machine, not a DFA")
    test = formats.load_traces(args.test, args.format)
    for policy in AccuracyPolicy:
        sys.stdout.write("%s: %.2f%%\n"
                         % (policy.value, 100.0 * accuracy(policy, test, m)))
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    config = formats.load_benchmark_config(args.config)
    if args.timeout_s is not None:
        config = replace(config, timeout_s=args.timeout_s)
    results = run_benchmark(config)
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(benchmark_csv(results))
    sys.stdout.write(format_benchmark_table(results))
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    m = formats.load_machine(args.machine)
    _write_or_print(formats.machine_to_dot(m), args.out)
    return EXIT_OK


_COMMANDS = {
    "learn": _cmd_learn,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "benchmark": _cmd_benchmark,
    "export-dot": _cmd_export_dot,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (MooreLearnError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DATA
    except Exception:
        sys.stderr.write("internal error:\n%s" % traceback.format_exc())
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
