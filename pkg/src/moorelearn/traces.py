"""Input-output traces, derived examples, and the output bit encoding.

A Moore trace pairs an input word with an output word one symbol longer (the
extra symbol is the initial state's output).  A trace of length ``n`` carries
the same information as ``n + 1`` examples, one per input prefix, each mapping
an input word to the single output symbol observed after it.

Learning reduces the multi-output problem to ``N = max(1, ceil(log2 |O|))``
binary problems: each output symbol is encoded as an ``N``-bit code (its
ordinal written in binary, most significant bit first), and example words are
partitioned per bit into positive and negative sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .automata import Alphabet, Word
from .errors import InconsistentTracesError

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class MooreTrace:
    """One observation: an input word and the output word it produced."""

    input: Word
    output: Word

    def __post_init__(self):
        object.__setattr__(self, "input", tuple(self.input))
        object.__setattr__(self, "output", tuple(self.output))
        if len(self.output) != len(self.input) + 1:
            raise ValueError(
                "output word must be exactly one symbol longer than the input word "
                "(got %d inputs, %d outputs)" % (len(self.input), len(self.output)))


@dataclass(frozen=True)
class MooreExample:
    """An input word together with the single output symbol observed after it."""

    input: Word
    output: str

    def __post_init__(self):
        object.__setattr__(self, "input", tuple(self.input))


class TraceSet:
    """An ordered collection of traces over fixed input and output alphabets.

    Every trace symbol must belong to the corresponding alphabet, and the
    traces must be internally consistent: no two traces may disagree on the
    output symbol observed after the same input prefix
    (:class:`InconsistentTracesError` otherwise).
    """

    __slots__ = ("traces", "input_alphabet", "output_alphabet")

    def __init__(self, traces: Sequence[MooreTrace],
                 input_alphabet: Alphabet, output_alphabet: Alphabet):
        self.traces = tuple(traces)
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        for t in self.traces:
            for s in t.input:
                input_alphabet.index(s)
            for s in t.output:
                output_alphabet.index(s)
        traces_to_examples(self)  # raises InconsistentTracesError on conflict

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return (self.traces == other.traces
                and self.input_alphabet == other.input_alphabet
                and self.output_alphabet == other.output_alphabet)

    __hash__ = None

    def max_input_length(self) -> int:
        return max((len(t.input) for t in self.traces), default=0)

    def __repr__(self) -> str:
        return "<TraceSet traces=%d inputs=%d outputs=%d>" % (
            len(self.traces), len(self.input_alphabet), len(self.output_alphabet))


@dataclass(frozen=True)
class OutputEncoding:
    """Fixed-width binary encoding of the output alphabet.

    Symbol ordinal ``k`` is encoded as the ``bit_count``-bit binary form of
    ``k``, most significant bit first.  Codes of value ``>= |O|`` decode to no
    symbol; ``fallback`` (the minimum output symbol in ordinal order) is the
    substitute used where an invalid code must still produce an output.
    """

    output_alphabet: Alphabet
    bit_count: int
    fallback: str = field(init=False)

    def __post_init__(self):
        needed = max(1, math.ceil(math.log2(max(1, len(self.output_alphabet)))))
        if self.bit_count < needed:
            raise ValueError("bit_count %d cannot encode %d output symbols"
                             % (self.bit_count, len(self.output_alphabet)))
        object.__setattr__(self, "fallback", self.output_alphabet.symbols[0])

    def encode(self, symbol: str) -> Bits:
        """Bit code of an output symbol, most significant bit first."""
        k = self.output_alphabet.index(symbol)
        return tuple((k >> (self.bit_count - 1 - i)) & 1 for i in range(self.bit_count))

    def decode(self, bits: Sequence[int]) -> Optional[str]:
        """Symbol for a bit code, or ``None`` if the code is invalid."""
        if len(bits) != self.bit_count:
            raise ValueError("expected %d bits, got %d" % (self.bit_count, len(bits)))
        k = 0
        for b in bits:
            k = (k << 1) | (1 if b else 0)
        if k >= len(self.output_alphabet):
            return None
        return self.output_alphabet.symbols[k]


def make_encoding(output_alphabet: Alphabet) -> OutputEncoding:
    """Encoding of ``output_alphabet`` with ``max(1, ceil(log2 |O|))`` bits."""
    return OutputEncoding(output_alphabet,
                          max(1, math.ceil(math.log2(max(1, len(output_alphabet))))))


def traces_to_examples(ts: TraceSet) -> List[MooreExample]:
    """Unroll traces into their derived examples, de-duplicated.

    A trace ``(x_1..x_n, y_0..y_n)`` yields the examples ``(epsilon, y_0)``,
    ``(x_1, y_1)``, ..., ``(x_1..x_n, y_n)``.  The result lists each distinct
    input word once, sorted in the canonical word order.  Two traces assigning
    different outputs to one input word raise :class:`InconsistentTracesError`.
    """
    by_word: Dict[Word, str] = {}
    for t in ts.traces:
        for i in range(len(t.input) + 1):
            w = t.input[:i]
            y = t.output[i]
            prev = by_word.get(w)
            if prev is None:
                by_word[w] = y
            elif prev != y:
                raise InconsistentTracesError(
                    "input word %r is observed with outputs %r and %r"
                    % (" ".join(w), prev, y))
    ia = ts.input_alphabet
    words = sorted(by_word, key=lambda w: (len(w), ia.encode_word(w)))
    return [MooreExample(w, by_word[w]) for w in words]


@dataclass(frozen=True)
class ExamplePartition:
    """Per-bit positive/negative example word sets.

    ``positive[i]`` (resp. ``negative[i]``) holds the input words whose output
    symbol has bit ``i`` equal to ``1`` (resp. ``0``) under the encoding.
    """

    positive: Tuple[FrozenSet[Word], ...]
    negative: Tuple[FrozenSet[Word], ...]

    def __post_init__(self):
        if len(self.positive) != len(self.negative) or not self.positive:
            raise ValueError("need equally many positive and negative sets, at least one")

    @property
    def bit_count(self) -> int:
        return len(self.positive)


def partition_examples(examples: Sequence[MooreExample],
                       enc: OutputEncoding) -> ExamplePartition:
    """Split example words into N positive/negative set pairs, one per code bit."""
    pos: List[set] = [set() for _ in range(enc.bit_count)]
    neg: List[set] = [set() for _ in range(enc.bit_count)]
    for ex in examples:
        bits = enc.encode(ex.output)
        for i, b in enumerate(bits):
            (pos[i] if b else neg[i]).add(ex.input)
    return ExamplePartition(tuple(frozenset(s) for s in pos),
                            tuple(frozenset(s) for s in neg))
