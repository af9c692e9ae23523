"""Accuracy scoring of learned machines and the benchmark harness.

A learned machine is scored against a test trace by comparing the output word
it produces on the trace's input word with the trace's recorded output word
(both of length ``n + 1``):

* strong  -- 1 if the words are identical, else 0;
* medium  -- (length of the longest matching prefix) / (n + 1);
* weak    -- (number of matching positions) / (n + 1).

The benchmark harness mirrors the evaluation protocol of the learners'
reference experiments: per seed, generate a random minimal machine, use its
characteristic sample as the training set, learn with each algorithm under a
wall-clock timeout, and score on a random test set with twice as many traces
as the training set and input words twice as long as the longest training
word.
"""

from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import warmup
from .automata import MooreMachine, run
from .charsample import characteristic_sample, random_minimal_moore
from .errors import EmptyTestSetError
from .learners import LearnResult, learn_mooremi, learn_prpni, learn_ptap
from .traces import MooreTrace, TraceSet


class AccuracyPolicy(Enum):
    STRONG = "strong"
    MEDIUM = "medium"
    WEAK = "weak"


def score_trace(policy: AccuracyPolicy, trace: MooreTrace,
                m: MooreMachine) -> float:
    """Score of one test trace in ``[0, 1]`` under the given policy."""
    expected = trace.output
    produced = run(m, trace.input)
    total = len(expected)
    if policy is AccuracyPolicy.STRONG:
        return 1.0 if produced == expected else 0.0
    if policy is AccuracyPolicy.MEDIUM:
        match = 0
        while match < total and produced[match] == expected[match]:
            match += 1
        return match / total
    matches = sum(1 for a, b in zip(produced, expected) if a == b)
    return matches / total


def accuracy(policy: AccuracyPolicy, test: TraceSet, m: MooreMachine) -> float:
    """Mean per-trace score over a test set (errors on an empty set)."""
    if not test.traces:
        raise EmptyTestSetError("cannot score an empty test set")
    return sum(score_trace(policy, t, m) for t in test.traces) / len(test.traces)


def generate_test_set(m: MooreMachine, training: TraceSet, seed: int) -> TraceSet:
    """Random test set sized relative to the training set.

    Contains ``2 * len(training)`` traces; every input word has length
    ``2 * (longest training input)`` with symbols drawn uniformly i.i.d., and
    outputs are the machine's actual runs.
    """
    ia = m.input_alphabet
    count = 2 * len(training.traces)
    length = 2 * training.max_input_length()
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, len(ia), (count, length))
    traces = []
    for row in draws:
        word = ia.decode_word([int(a) for a in row])
        traces.append(MooreTrace(word, run(m, word)))
    return TraceSet(traces, ia, m.output_alphabet)


ALGORITHMS = ("ptap", "prpni", "mooremi")

_LEARNERS = {"ptap": learn_ptap, "prpni": learn_prpni, "mooremi": learn_mooremi}


@dataclass(frozen=True)
class BenchmarkConfig:
    """Parameters of one benchmark sweep (defaults mirror the 50-state setup)."""

    states: int = 50
    inputs: int = 25
    outputs: int = 25
    seeds: int = 5
    base_seed: int = 0
    timeout_s: float = 60.0
    algos: Tuple[str, ...] = ALGORITHMS

    def __post_init__(self):
        for a in self.algos:
            if a not in ALGORITHMS:
                raise ValueError("unknown algorithm %r (expected one of %s)"
                                 % (a, ", ".join(ALGORITHMS)))


@dataclass(frozen=True)
class BenchmarkResult:
    """Outcome of one (seed, algorithm) benchmark run.

    On timeout, ``states_learned``, ``time_s``, and the accuracies are None.
    Accuracies are percentages in ``[0, 100]``.
    """

    seed: int
    algorithm: str
    states_target: int
    states_learned: Optional[int]
    time_s: Optional[float]
    strong: Optional[float]
    medium: Optional[float]
    weak: Optional[float]
    timeout: bool


def _learn_child(conn, algo: str, training: TraceSet, engine: Optional[str]):
    try:
        result = _LEARNERS[algo](training, engine=engine)
        conn.send(("ok", result))
    except BaseException as exc:  # propagated to the parent
        conn.send(("error", "%s: %s" % (type(exc).__name__, exc)))
    finally:
        conn.close()


def _learn_with_timeout(algo: str, training: TraceSet, timeout_s: float,
                        engine: Optional[str]) -> Optional[LearnResult]:
    """Run a learner in a forked process; None means the timeout struck."""
    ctx = multiprocessing.get_context("fork")
    parent_conn, child_conn = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_learn_child,
                       args=(child_conn, algo, training, engine), daemon=True)
    proc.start()
    child_conn.close()
    if not parent_conn.poll(timeout_s):
        proc.terminate()
        proc.join()
        parent_conn.close()
        return None
    status, payload = parent_conn.recv()
    proc.join()
    parent_conn.close()
    if status == "error":
        raise RuntimeError("learner %r failed: %s" % (algo, payload))
    return payload


def run_benchmark(config: BenchmarkConfig,
                  engine: Optional[str] = None) -> List[BenchmarkResult]:
    """Execute the benchmark sweep and return one result per (seed, algorithm).

    Machines, training samples, and test sets depend only on the config, so
    all columns except the wall-clock time are deterministic.
    """
    warmup(engine)  # compile kernels before forking and before timing
    results: List[BenchmarkResult] = []
    for seed in range(config.base_seed, config.base_seed + config.seeds):
        m = random_minimal_moore(seed, config.states, config.inputs,
                                 config.outputs)
        training = characteristic_sample(m, engine=engine).sample
        test = generate_test_set(m, training, seed)
        for algo in config.algos:
            outcome = _learn_with_timeout(algo, training, config.timeout_s,
                                          engine)
            if outcome is None:
                results.append(BenchmarkResult(seed, algo, config.states,
                                               None, None, None, None, None,
                                               True))
                continue
            learned = outcome.machine
            results.append(BenchmarkResult(
                seed, algo, config.states, learned.n_states,
                outcome.stats.wall_time_s,
                100.0 * accuracy(AccuracyPolicy.STRONG, test, learned),
                100.0 * accuracy(AccuracyPolicy.MEDIUM, test, learned),
                100.0 * accuracy(AccuracyPolicy.WEAK, test, learned),
                False))
    return results


CSV_COLUMNS = ("seed", "algo", "states_target", "states_learned", "time_s",
               "strong", "medium", "weak", "timeout")


def benchmark_csv(results: Sequence[BenchmarkResult]) -> str:
    """CSV rendering of benchmark results (blank cells for timed-out runs)."""
    lines = [",".join(CSV_COLUMNS)]
    for r in results:
        lines.append(",".join([
            str(r.seed),
            r.algorithm,
            str(r.states_target),
            "" if r.states_learned is None else str(r.states_learned),
            "" if r.time_s is None else "%.6f" % r.time_s,
            "" if r.strong is None else "%.6f" % r.strong,
            "" if r.medium is None else "%.6f" % r.medium,
            "" if r.weak is None else "%.6f" % r.weak,
            "1" if r.timeout else "0",
        ]))
    return "\n".join(lines) + "\n"


def format_benchmark_table(results: Sequence[BenchmarkResult]) -> str:
    """Per-algorithm averages over completed runs, one row per algorithm."""
    by_algo: Dict[str, List[BenchmarkResult]] = {}
    for r in results:
        by_algo.setdefault(r.algorithm, []).append(r)
    header = "%-9s %10s %10s %9s %9s %9s %10s" % (
        "algo", "time_s", "states", "strong%", "medium%", "weak%", "timeouts")
    lines = [header]
    for algo, rows in by_algo.items():
        done = [r for r in rows if not r.timeout]
        n_timeout = len(rows) - len(done)
        if not done:
            lines.append("%-9s %10s %10s %9s %9s %9s %9d/%d" % (
                algo, "-", "-", "-", "-", "-", n_timeout, len(rows)))
            continue

        def avg(get):
            return sum(get(r) for r in done) / len(done)

        lines.append("%-9s %10.3f %10.1f %9.2f %9.2f %9.2f %9d/%d" % (
            algo, avg(lambda r: r.time_s), avg(lambda r: r.states_learned),
            avg(lambda r: r.strong), avg(lambda r: r.medium),
            avg(lambda r: r.weak), n_timeout, len(rows)))
    return "\n".join(lines) + "\n"
