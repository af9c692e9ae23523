"""File formats: trace files, machine serialization, DOT export, configs.

Trace line format: one trace per line, input symbols then a literal ``|``
then output symbols, all whitespace-separated; the output side has exactly
one more symbol than the input side (an empty input side is a length-zero
trace).  ``#`` starts a comment; blank lines are skipped.  Optional header
lines ``!inputs: ...`` and ``!outputs: ...`` fix the alphabets and their
symbol order; without them the alphabets are inferred as the sorted symbols
seen.  The structured (JSON) trace format mirrors the same fields.

Machines serialize to JSON with explicit alphabets and flat delta/lambda
tables (``null`` marks an undefined transition), and export to Graphviz DOT
(Moore states labeled ``q{id}/{output}``; accepting DFA states drawn with a
double circle).
"""

from __future__ import annotations

import json
import os
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .automata import Alphabet, Dfa, Mark, MooreMachine
from .errors import TraceParseError
from .evaluation import ALGORITHMS, BenchmarkConfig
from .traces import MooreTrace, TraceSet

Machine = Union[MooreMachine, Dfa]


# ---------------------------------------------------------------- trace files

def parse_traces(text: str, source: str = "<string>") -> TraceSet:
    """Parse the line-oriented trace format into a TraceSet."""
    declared: Dict[str, Tuple[str, ...]] = {}
    raw: List[Tuple[int, List[str], List[str]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("!"):
            head, sep, rest = line[1:].partition(":")
            head = head.strip()
            if not sep or head not in ("inputs", "outputs"):
                raise TraceParseError(
                    "%s:%d: expected '!inputs:' or '!outputs:' header"
                    % (source, lineno))
            if head in declared:
                raise TraceParseError(
                    "%s:%d: duplicate '!%s:' header" % (source, lineno, head))
            symbols = tuple(rest.split())
            if not symbols:
                raise TraceParseError(
                    "%s:%d: header '!%s:' lists no symbols" % (source, lineno, head))
            declared[head] = symbols
            continue
        if line.count("|") != 1:
            raise TraceParseError(
                "%s:%d: expected exactly one '|' between input and output words"
                % (source, lineno))
        left, right = line.split("|")
        raw.append((lineno, left.split(), right.split()))

    traces = []
    for lineno, ins, outs in raw:
        if len(outs) != len(ins) + 1:
            raise TraceParseError(
                "%s:%d: output word must be one symbol longer than the input "
                "word (got %d inputs, %d outputs)"
                % (source, lineno, len(ins), len(outs)))
        traces.append(MooreTrace(tuple(ins), tuple(outs)))

    if "inputs" in declared:
        ia = Alphabet(declared["inputs"])
    else:
        seen = {s for t in traces for s in t.input}
        if not seen:
            raise TraceParseError(
                "%s: no input symbols seen and no '!inputs:' header" % source)
        ia = Alphabet.inferred(seen)
    if "outputs" in declared:
        oa = Alphabet(declared["outputs"])
    else:
        seen = {s for t in traces for s in t.output}
        if not seen:
            raise TraceParseError(
                "%s: no output symbols seen and no '!outputs:' header" % source)
        oa = Alphabet.inferred(seen)
    return TraceSet(traces, ia, oa)


def write_traces(ts: TraceSet) -> str:
    """Render a TraceSet in the line format (with alphabet headers)."""
    lines = ["!inputs: " + " ".join(ts.input_alphabet.symbols),
             "!outputs: " + " ".join(ts.output_alphabet.symbols)]
    for t in ts.traces:
        lines.append(("%s | %s" % (" ".join(t.input), " ".join(t.output))).strip())
    return "\n".join(lines) + "\n"


def traces_to_json(ts: TraceSet) -> str:
    """Render a TraceSet in the structured JSON format."""
    doc = {
        "inputs": list(ts.input_alphabet.symbols),
        "outputs": list(ts.output_alphabet.symbols),
        "traces": [{"input": list(t.input), "output": list(t.output)}
                   for t in ts.traces],
    }
    return json.dumps(doc, indent=2) + "\n"


def traces_from_json(text: str, source: str = "<string>") -> TraceSet:
    """Parse the structured JSON trace format."""
    try:
        doc = json.loads(text)
        ia = Alphabet(tuple(doc["inputs"]))
        oa = Alphabet(tuple(doc["outputs"]))
        traces = [MooreTrace(tuple(t["input"]), tuple(t["output"]))
                  for t in doc["traces"]]
    except TraceParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceParseError("%s: malformed trace JSON: %s" % (source, exc))
    return TraceSet(traces, ia, oa)


def load_traces(path: "str | os.PathLike", fmt: str = "auto") -> TraceSet:
    """Load traces from a file; ``fmt`` is 'line', 'json', or 'auto' (by suffix)."""
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "auto":
        fmt = "json" if path.endswith(".json") else "line"
    if fmt == "json":
        return traces_from_json(text, source=path)
    if fmt == "line":
        return parse_traces(text, source=path)
    raise ValueError("unknown trace format %r" % fmt)


def save_traces(ts: TraceSet, path: "str | os.PathLike", fmt: str = "auto"):
    path = os.fspath(path)
    if fmt == "auto":
        fmt = "json" if path.endswith(".json") else "line"
    text = traces_to_json(ts) if fmt == "json" else write_traces(ts)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ------------------------------------------------------- machine serialization

_MARK_NAMES = {Mark.UNKNOWN: "unknown", Mark.ACCEPTING: "accepting",
               Mark.REJECTING: "rejecting"}
_MARK_VALUES = {v: k for k, v in _MARK_NAMES.items()}


def _delta_table(delta: np.ndarray) -> List[List[Optional[int]]]:
    return [[None if t < 0 else int(t) for t in row] for row in delta]


def machine_to_json(m: Machine) -> str:
    """Serialize a Moore machine or DFA to JSON."""
    if isinstance(m, MooreMachine):
        doc = {
            "kind": "moore",
            "inputs": list(m.input_alphabet.symbols),
            "outputs": list(m.output_alphabet.symbols),
            "initial": m.initial,
            "delta": _delta_table(m.delta),
            "lambda": [m.output_symbol(q) for q in range(m.n_states)],
        }
    elif isinstance(m, Dfa):
        doc = {
            "kind": "dfa",
            "alphabet": list(m.alphabet.symbols),
            "initial": m.initial,
            "delta": _delta_table(m.delta),
            "marks": [_MARK_NAMES[Mark(int(k))] for k in m.marks],
        }
    else:
        raise TypeError("expected a MooreMachine or Dfa")
    return json.dumps(doc, indent=2) + "\n"


def machine_from_json(text: str, source: str = "<string>") -> Machine:
    """Deserialize a machine written by :func:`machine_to_json`."""
    try:
        doc = json.loads(text)
        kind = doc["kind"]
        if kind == "moore":
            ia = Alphabet(tuple(doc["inputs"]))
            oa = Alphabet(tuple(doc["outputs"]))
            delta = [[-1 if t is None else int(t) for t in row]
                     for row in doc["delta"]]
            outputs = [oa.index(s) for s in doc["lambda"]]
            return MooreMachine(ia, oa, delta, outputs, int(doc["initial"]))
        if kind == "dfa":
            alph = Alphabet(tuple(doc["alphabet"]))
            delta = [[-1 if t is None else int(t) for t in row]
                     for row in doc["delta"]]
            marks = [_MARK_VALUES[s] for s in doc["marks"]]
            return Dfa(alph, delta, marks, int(doc["initial"]))
        raise TraceParseError(
            "%s: unknown machine kind %r" % (source, kind))
    except TraceParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceParseError("%s: malformed machine JSON: %s" % (source, exc))


def load_machine(path: "str | os.PathLike") -> Machine:
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as fh:
        return machine_from_json(fh.read(), source=path)


def save_machine(m: Machine, path: "str | os.PathLike"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(machine_to_json(m))


# ------------------------------------------------------------------ DOT export

def _dot_edges(delta: np.ndarray, symbols: Sequence[str]) -> List[str]:
    lines = []
    for q in range(delta.shape[0]):
        grouped: Dict[int, List[str]] = {}
        for a, sym in enumerate(symbols):
            t = int(delta[q, a])
            if t >= 0:
                grouped.setdefault(t, []).append(sym)
        for t, syms in grouped.items():
            lines.append('  q%d -> q%d [label="%s"];' % (q, t, ",".join(syms)))
    return lines


def machine_to_dot(m: Machine, name: str = "machine") -> str:
    """Render a machine as a Graphviz digraph.

    Moore states are labeled ``q{id}/{output}``; accepting DFA states get a
    double circle.  The initial state is marked by an arrow from a point node.
    """
    lines = ["digraph %s {" % name, "  rankdir=LR;",
             '  __start [shape=point, label=""];']
    if isinstance(m, MooreMachine):
        for q in range(m.n_states):
            lines.append('  q%d [shape=circle, label="q%d/%s"];'
                         % (q, q, m.output_symbol(q)))
        symbols = m.input_alphabet.symbols
    elif isinstance(m, Dfa):
        for q in range(m.n_states):
            mark = Mark(int(m.marks[q]))
            shape = "doublecircle" if mark is Mark.ACCEPTING else "circle"
            style = ', style=dashed' if mark is Mark.UNKNOWN else ""
            lines.append('  q%d [shape=%s, label="q%d"%s];' % (q, shape, q, style))
        symbols = m.alphabet.symbols
    else:
        raise TypeError("expected a MooreMachine or Dfa")
    lines.append("  __start -> q%d;" % m.initial)
    lines.extend(_dot_edges(m.delta, symbols))
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ benchmark config

_CONFIG_KEYS = ("states", "inputs", "outputs", "seeds", "base_seed",
                "timeout_s", "algos")


def parse_benchmark_config(text: str, source: str = "<string>") -> BenchmarkConfig:
    """Parse the flat ``key = value`` benchmark config format.

    Recognized keys: states, inputs, outputs, seeds, base_seed, timeout_s,
    algos (comma-separated).  Missing keys take the defaults of
    :class:`BenchmarkConfig`; ``#`` comments and blank lines are skipped.
    """
    values: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not value:
            raise TraceParseError(
                "%s:%d: expected 'key = value'" % (source, lineno))
        if key not in _CONFIG_KEYS:
            raise TraceParseError(
                "%s:%d: unknown config key %r (expected one of %s)"
                % (source, lineno, key, ", ".join(_CONFIG_KEYS)))
        if key in values:
            raise TraceParseError("%s:%d: duplicate key %r" % (source, lineno, key))
        try:
            if key == "algos":
                values[key] = tuple(a.strip() for a in value.split(",") if a.strip())
            elif key == "timeout_s":
                values[key] = float(value)
            else:
                values[key] = int(value)
        except ValueError:
            raise TraceParseError(
                "%s:%d: bad value %r for key %r" % (source, lineno, value, key))
    try:
        return BenchmarkConfig(**values)
    except ValueError as exc:
        raise TraceParseError("%s: %s" % (source, exc))


def load_benchmark_config(path: "str | os.PathLike") -> BenchmarkConfig:
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_benchmark_config(fh.read(), source=path)
