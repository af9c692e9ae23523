"""Shared fixtures and brute-force oracles for the test suite.

The oracles here intentionally use the slowest, most obviously-correct
formulation (exhaustive word enumeration) so the optimized library code can
be checked against them on small instances.
"""

from __future__ import annotations

import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pytest

import moorelearn as ml

Word = Tuple[str, ...]


# ---------------------------------------------------------------------------
# Reference machines
# ---------------------------------------------------------------------------

def make_two_state_machine() -> ml.MooreMachine:
    """Two-state machine: q0/y1, q1/y2; x1 goes to q0, x2 goes to q1."""
    return ml.MooreMachine.from_tables(
        ["x1", "x2"], ["y1", "y2"], ["y1", "y2"],
        [{"x1": 0, "x2": 1}, {"x1": 0, "x2": 1}],
    )


def make_four_state_machine() -> ml.MooreMachine:
    """Four-state machine over {a,b}/{0,1,2} with two states sharing output 2."""
    return ml.MooreMachine.from_tables(
        ["a", "b"], ["0", "1", "2"], ["0", "1", "2", "2"],
        [{"a": 2, "b": 1}, {"a": 3, "b": 3}, {"a": 0, "b": 3}, {"a": 2, "b": 2}],
    )


@pytest.fixture
def m1() -> ml.MooreMachine:
    return make_two_state_machine()


@pytest.fixture
def m4() -> ml.MooreMachine:
    return make_four_state_machine()


# ---------------------------------------------------------------------------
# Trace-set helpers
# ---------------------------------------------------------------------------

AB = ml.Alphabet(("a", "b"))
O012 = ml.Alphabet(("0", "1", "2"))


def ts_from(pairs: Sequence[Tuple[str, str]],
            inputs: ml.Alphabet = AB,
            outputs: ml.Alphabet = O012) -> ml.TraceSet:
    """Build a TraceSet from (input word, output word) strings of 1-char symbols."""
    traces = [ml.MooreTrace(tuple(i), tuple(o)) for i, o in pairs]
    return ml.TraceSet(traces, inputs, outputs)


def sample_pairs_1() -> List[Tuple[str, str]]:
    """Trace set that covers the four-state machine but cannot pin down its
    two equal-output states."""
    return [("aa", "020"), ("ba", "012"), ("bb", "012"),
            ("aba", "0222"), ("abb", "0222")]


def sample_pairs_2() -> List[Tuple[str, str]]:
    """Characteristic trace set for the four-state machine."""
    return [("aa", "020"), ("baa", "0122"), ("bba", "0122"),
            ("abaa", "02220"), ("abba", "02220")]


@pytest.fixture
def s_io1() -> ml.TraceSet:
    return ts_from(sample_pairs_1())


@pytest.fixture
def s_io2() -> ml.TraceSet:
    return ts_from(sample_pairs_2())


def consistent_with(m: ml.MooreMachine, ts: ml.TraceSet) -> bool:
    return all(ml.run(m, t.input) == t.output for t in ts)


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def all_words(alphabet: ml.Alphabet, max_len: int):
    """Yield every word over `alphabet` of length 0..max_len in < order."""
    for n in range(max_len + 1):
        for tup in itertools.product(alphabet.symbols, repeat=n):
            yield tup


def brute_equivalent(a: ml.MooreMachine, b: ml.MooreMachine) -> bool:
    """Exhaustive equivalence check.

    Partition refinement on the disjoint union of the two machines (|Q_a| +
    |Q_b| states) stabilizes after at most |Q_a| + |Q_b| rounds, and states
    split in round k are distinguished by a word of length k, so checking all
    words up to that length is exhaustive.
    """
    if a.input_alphabet.symbols != b.input_alphabet.symbols:
        return False
    bound = a.n_states + b.n_states
    for w in all_words(a.input_alphabet, bound):
        if ml.run(a, w) != ml.run(b, w):
            return False
    return True


def brute_min_suffix(m: ml.MooreMachine, q1: int, q2: int,
                     max_len: Optional[int] = None) -> Optional[Word]:
    """First word in < order on which the two states' output words differ.

    In an n-state machine any two distinguishable states are distinguished by
    a word of length at most n - 1 (partition refinement), so enumerating up
    to length n is exhaustive.
    """
    if max_len is None:
        max_len = m.n_states
    for w in all_words(m.input_alphabet, max_len):
        if run_from(m, q1, w) != run_from(m, q2, w):
            return w
    return None


def run_from(m: ml.MooreMachine, q: int, word: Word) -> Word:
    """Output word produced when starting from state q instead of the initial
    state (pure-python mirror of the run semantics)."""
    out = [m.output_symbol(q)]
    for sym in word:
        q = int(m.delta[q, m.input_alphabet.index(sym)])
        out.append(m.output_symbol(q))
    return tuple(out)


# ---------------------------------------------------------------------------
# Random generators for property suites
# ---------------------------------------------------------------------------

def padded(prefix: str, count: int) -> List[str]:
    width = len(str(count - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def random_complete_machine(rng: np.random.Generator, n_states: int,
                            n_inputs: int, n_outputs: int) -> ml.MooreMachine:
    """Arbitrary complete machine; not necessarily minimal or reachable."""
    inputs = padded("i", n_inputs)
    outputs = padded("o", n_outputs)
    delta = rng.integers(0, n_states, size=(n_states, n_inputs))
    lam = rng.integers(0, n_outputs, size=n_states)
    return ml.MooreMachine.from_tables(
        inputs, outputs, [outputs[k] for k in lam],
        [{inputs[s]: int(delta[q, s]) for s in range(n_inputs)}
         for q in range(n_states)],
    )


def random_consistent_traceset(rng: np.random.Generator,
                               max_inputs: int = 4, max_outputs: int = 4,
                               max_traces: int = 20,
                               max_len: int = 6) -> ml.TraceSet:
    """Random consistent trace set: sampled from a hidden random machine, so
    consistency is guaranteed by construction."""
    n_inputs = int(rng.integers(1, max_inputs + 1))
    n_outputs = int(rng.integers(1, max_outputs + 1))
    n_states = int(rng.integers(1, 7))
    m = random_complete_machine(rng, n_states, n_inputs, n_outputs)
    n_traces = int(rng.integers(1, max_traces + 1))
    traces = []
    for _ in range(n_traces):
        length = int(rng.integers(0, max_len + 1))
        word = tuple(m.input_alphabet.symbols[k]
                     for k in rng.integers(0, n_inputs, size=length))
        traces.append(ml.MooreTrace(word, ml.run(m, word)))
    return ml.TraceSet(traces, m.input_alphabet, m.output_alphabet)
