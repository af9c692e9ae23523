"""Deterministic Moore machines and DFAs over explicit, ordered alphabets.

States are dense integers ``0..n-1``.  Transition tables are ``(n, |alphabet|)``
int32 numpy arrays where ``-1`` marks an undefined transition; machines with no
``-1`` entries are *complete*.  A Moore machine additionally carries one output
ordinal per state; a DFA carries one :class:`Mark` per state.

Words are tuples of symbol strings.  The canonical word order ``<`` used
throughout the package is shorter-first, then lexicographic by symbol ordinal;
:func:`length_lex_key` realizes it as a sort key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    AlphabetMismatchError,
    InvalidCodeError,
    SkeletonMismatchError,
    UndefinedTransitionError,
)

Word = Tuple[str, ...]

_RESERVED_CHARS = ("|", "#")


class Mark(IntEnum):
    """Tri-state acceptance mark of a DFA state."""

    UNKNOWN = 0
    ACCEPTING = 1
    REJECTING = 2


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate-free set of symbol strings.

    The ordinal of a symbol is its position in ``symbols``; that order is fixed
    at construction and defines both the lexicographic word order and the
    output bit encoding.
    """

    symbols: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        syms = tuple(self.symbols)
        if not syms:
            raise ValueError("alphabet must contain at least one symbol")
        for s in syms:
            if not isinstance(s, str) or not s:
                raise ValueError("alphabet symbols must be non-empty strings")
            if any(c.isspace() for c in s) or any(c in s for c in _RESERVED_CHARS):
                raise ValueError(
                    "alphabet symbol %r contains whitespace or a reserved character" % s
                )
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(syms)})

    @classmethod
    def inferred(cls, symbols: Iterable[str]) -> "Alphabet":
        """Alphabet over the given symbols in sorted order (the default order)."""
        return cls(tuple(sorted(set(symbols))))

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AlphabetMismatchError(
                "symbol %r is not in alphabet %r" % (symbol, list(self.symbols))
            ) from None

    def encode_word(self, word: Sequence[str]) -> Tuple[int, ...]:
        return tuple(self.index(s) for s in word)

    def decode_word(self, ordinals: Sequence[int]) -> Word:
        return tuple(self.symbols[i] for i in ordinals)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index


def length_lex_key(word: Sequence[str], alphabet: Alphabet):
    """Sort key realizing the canonical order ``<``: by length, then by ordinals."""
    return (len(word), alphabet.encode_word(word))


def _as_delta(delta, n_symbols: int) -> np.ndarray:
    arr = np.array(delta, dtype=np.int32, copy=True)
    if arr.ndim != 2 or arr.shape[1] != n_symbols:
        raise ValueError("delta must have shape (n_states, %d)" % n_symbols)
    return arr


def _check_targets(delta: np.ndarray, n: int):
    if delta.size and ((delta < -1) | (delta >= n)).any():
        raise ValueError("delta targets must be -1 or valid state ids")


class MooreMachine:
    """Deterministic Moore machine with explicit input and output alphabets.

    ``delta[q, a]`` is the successor of state ``q`` on the input symbol of
    ordinal ``a`` (``-1`` if undefined); ``outputs[q]`` is the ordinal of the
    output symbol emitted by ``q``.  Instances are immutable: the arrays are
    frozen at construction.
    """

    __slots__ = ("input_alphabet", "output_alphabet", "delta", "outputs", "initial")

    def __init__(self, input_alphabet: Alphabet, output_alphabet: Alphabet,
                 delta, outputs, initial: int = 0):
        delta = _as_delta(delta, len(input_alphabet))
        out = np.array(outputs, dtype=np.int16, copy=True)
        if out.ndim != 1 or out.shape[0] != delta.shape[0]:
            raise ValueError("outputs must hold one output ordinal per state")
        n = delta.shape[0]
        if n == 0:
            raise ValueError("machine must have at least one state")
        _check_targets(delta, n)
        if out.size and ((out < 0) | (out >= len(output_alphabet))).any():
            raise ValueError("output ordinals out of range")
        if not 0 <= initial < n:
            raise ValueError("initial state out of range")
        delta.setflags(write=False)
        out.setflags(write=False)
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.delta = delta
        self.outputs = out
        self.initial = int(initial)

    @classmethod
    def from_tables(cls, inputs: Sequence[str], outputs: Sequence[str],
                    state_outputs: Sequence[str],
                    transitions: Sequence[Dict[str, Optional[int]]],
                    initial: int = 0) -> "MooreMachine":
        """Build a machine from symbol-level tables.

        ``transitions[q]`` maps input symbols to target states (missing or
        ``None`` entries stay undefined); ``state_outputs[q]`` is the output
        symbol of state ``q``.
        """
        ia = inputs if isinstance(inputs, Alphabet) else Alphabet(tuple(inputs))
        oa = outputs if isinstance(outputs, Alphabet) else Alphabet(tuple(outputs))
        n = len(state_outputs)
        if len(transitions) != n:
            raise ValueError("state_outputs and transitions must have equal length")
        delta = np.full((n, len(ia)), -1, dtype=np.int32)
        for q, row in enumerate(transitions):
            for sym, tgt in row.items():
                if tgt is not None:
                    delta[q, ia.index(sym)] = tgt
        outs = [oa.index(s) for s in state_outputs]
        return cls(ia, oa, delta, outs, initial)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def is_complete(self) -> bool:
        return bool((self.delta >= 0).all())

    def output_symbol(self, state: int) -> str:
        return self.output_alphabet.symbols[self.outputs[state]]

    def run(self, word: Sequence[str]) -> Word:
        return run(self, word)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MooreMachine):
            return NotImplemented
        return (self.input_alphabet == other.input_alphabet
                and self.output_alphabet == other.output_alphabet
                and self.initial == other.initial
                and self.delta.shape == other.delta.shape
                and bool((self.delta == other.delta).all())
                and bool((self.outputs == other.outputs).all()))

    __hash__ = None

    def __repr__(self) -> str:
        return "<MooreMachine states=%d inputs=%d outputs=%d%s>" % (
            self.n_states, len(self.input_alphabet), len(self.output_alphabet),
            "" if self.is_complete else " incomplete")


class Dfa:
    """Deterministic finite automaton with tri-state acceptance marks.

    Structurally a Moore machine whose per-state annotation is a
    :class:`Mark`; the marks are what the output bit encoding reads
    (bit ``1`` iff the mark is ``ACCEPTING``).
    """

    __slots__ = ("alphabet", "delta", "marks", "initial")

    def __init__(self, alphabet: Alphabet, delta, marks, initial: int = 0):
        delta = _as_delta(delta, len(alphabet))
        mk = np.array(marks, dtype=np.int8, copy=True)
        n = delta.shape[0]
        if n == 0:
            raise ValueError("DFA must have at least one state")
        if mk.ndim != 1 or mk.shape[0] != n:
            raise ValueError("marks must hold one mark per state")
        _check_targets(delta, n)
        if mk.size and ((mk < 0) | (mk > 2)).any():
            raise ValueError("marks must be Mark values")
        if not 0 <= initial < n:
            raise ValueError("initial state out of range")
        delta.setflags(write=False)
        mk.setflags(write=False)
        self.alphabet = alphabet
        self.delta = delta
        self.marks = mk
        self.initial = int(initial)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def is_complete(self) -> bool:
        return bool((self.delta >= 0).all())

    def mark_of(self, word: Sequence[str]) -> Mark:
        """Mark of the state reached by ``word`` (UndefinedTransitionError if the path breaks off)."""
        q = self.initial
        for sym in word:
            q2 = self.delta[q, self.alphabet.index(sym)]
            if q2 < 0:
                raise UndefinedTransitionError(
                    "transition on %r undefined from state %d" % (sym, q))
            q = int(q2)
        return Mark(int(self.marks[q]))

    def accepts(self, word: Sequence[str]) -> bool:
        """True iff the word's path is defined and ends in an ACCEPTING state."""
        try:
            return self.mark_of(word) is Mark.ACCEPTING
        except UndefinedTransitionError:
            return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dfa):
            return NotImplemented
        return (self.alphabet == other.alphabet
                and self.initial == other.initial
                and self.delta.shape == other.delta.shape
                and bool((self.delta == other.delta).all())
                and bool((self.marks == other.marks).all()))

    __hash__ = None

    def __repr__(self) -> str:
        return "<Dfa states=%d%s>" % (
            self.n_states, "" if self.is_complete else " incomplete")


def run(m: MooreMachine, word: Sequence[str]) -> Word:
    """Output word produced by running ``word`` from the initial state.

    The result has length ``len(word) + 1``: the initial state's output
    followed by one output per consumed input symbol.
    """
    q = m.initial
    out = [m.output_alphabet.symbols[m.outputs[q]]]
    for sym in word:
        a = m.input_alphabet.index(sym)
        q2 = m.delta[q, a]
        if q2 < 0:
            raise UndefinedTransitionError(
                "transition on %r undefined from state %d" % (sym, q))
        q = int(q2)
        out.append(m.output_alphabet.symbols[m.outputs[q]])
    return tuple(out)


def complete_with_self_loops(m: MooreMachine) -> MooreMachine:
    """Complete a Moore machine by turning every undefined transition into a self-loop."""
    if m.is_complete:
        return m
    delta = np.array(m.delta, copy=True)
    rows, cols = np.nonzero(delta < 0)
    delta[rows, cols] = rows.astype(np.int32)
    return MooreMachine(m.input_alphabet, m.output_alphabet, delta, m.outputs, m.initial)


def complete_dfa_with_self_loops(d: Dfa) -> Dfa:
    """DFA counterpart of :func:`complete_with_self_loops`."""
    if d.is_complete:
        return d
    delta = np.array(d.delta, copy=True)
    rows, cols = np.nonzero(delta < 0)
    delta[rows, cols] = rows.astype(np.int32)
    return Dfa(d.alphabet, delta, d.marks, d.initial)


def _reachable_order(delta: np.ndarray, initial: int) -> List[int]:
    """Reachable states in BFS discovery order (symbols explored in ordinal order)."""
    seen = np.zeros(delta.shape[0], dtype=bool)
    seen[initial] = True
    order = [initial]
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for t in delta[q]:
            if t >= 0 and not seen[t]:
                seen[t] = True
                order.append(int(t))
    return order


def minimize(m: MooreMachine) -> MooreMachine:
    """Minimal complete machine equivalent to ``m`` (must be complete).

    Unreachable states are removed and behaviorally equivalent states merged by
    partition refinement seeded with the output classes.  States of the result
    are numbered in BFS order from the initial state, so minimization is
    canonical: equivalent complete machines minimize to identical tables.
    """
    if not m.is_complete:
        raise UndefinedTransitionError("minimize requires a complete machine")
    order = _reachable_order(m.delta, m.initial)
    old_to_new = np.full(m.n_states, -1, dtype=np.int32)
    for new, old in enumerate(order):
        old_to_new[old] = new
    delta = old_to_new[m.delta[order]]
    outputs = m.outputs[order]

    block = np.unique(outputs, return_inverse=True)[1].astype(np.int64)
    n_blocks = int(block.max()) + 1 if len(block) else 0
    while True:
        sig = np.column_stack([block[:, None], block[delta]])
        _, block = np.unique(sig, axis=0, return_inverse=True)
        new_count = int(block.max()) + 1
        if new_count == n_blocks:
            break
        n_blocks = new_count

    # representative per block, deterministic: first state (in BFS order) of each block
    first_of_block = np.full(n_blocks, -1, dtype=np.int64)
    for q in range(len(block) - 1, -1, -1):
        first_of_block[block[q]] = q
    q_delta = np.empty((n_blocks, delta.shape[1]), dtype=np.int32)
    q_outputs = np.empty(n_blocks, dtype=np.int16)
    for b in range(n_blocks):
        rep = first_of_block[b]
        q_delta[b] = block[delta[rep]]
        q_outputs[b] = outputs[rep]
    q_initial = int(block[0])

    # renumber the quotient in BFS order for a canonical result
    order2 = _reachable_order(q_delta, q_initial)
    remap = np.full(n_blocks, -1, dtype=np.int32)
    for new, old in enumerate(order2):
        remap[old] = new
    return MooreMachine(m.input_alphabet, m.output_alphabet,
                        remap[q_delta[order2]], q_outputs[order2], 0)


def _output_translation(m1: MooreMachine, m2: MooreMachine) -> np.ndarray:
    """Map m1 output ordinals to m2 output ordinals by symbol (-1 if absent)."""
    table = np.full(len(m1.output_alphabet), -1, dtype=np.int32)
    for i, sym in enumerate(m1.output_alphabet.symbols):
        if sym in m2.output_alphabet:
            table[i] = m2.output_alphabet.index(sym)
    return table


def equivalent(m1: MooreMachine, m2: MooreMachine) -> bool:
    """True iff the machines produce the same output word on every input word.

    Both machines must be complete and share the input alphabet.  Outputs are
    compared as symbols, so the output alphabets need not be identical.
    """
    if m1.input_alphabet != m2.input_alphabet:
        raise AlphabetMismatchError("equivalence requires a common input alphabet")
    if not (m1.is_complete and m2.is_complete):
        raise UndefinedTransitionError("equivalence requires complete machines")
    trans = _output_translation(m1, m2)
    n2 = m2.n_states
    visited = np.zeros(m1.n_states * n2, dtype=bool)
    stack = [(m1.initial, m2.initial)]
    visited[m1.initial * n2 + m2.initial] = True
    while stack:
        q1, q2 = stack.pop()
        if trans[m1.outputs[q1]] != m2.outputs[q2]:
            return False
        for a in range(len(m1.input_alphabet)):
            t1 = int(m1.delta[q1, a])
            t2 = int(m2.delta[q2, a])
            key = t1 * n2 + t2
            if not visited[key]:
                visited[key] = True
                stack.append((t1, t2))
    return True


def isomorphic(m1: MooreMachine, m2: MooreMachine) -> bool:
    """True iff the machines are identical up to a renaming of states.

    Requires complete machines with every state reachable (a precondition
    violation raises ``ValueError``); alphabets must agree as for
    :func:`equivalent`.
    """
    if m1.input_alphabet != m2.input_alphabet:
        raise AlphabetMismatchError("isomorphism requires a common input alphabet")
    if not (m1.is_complete and m2.is_complete):
        raise UndefinedTransitionError("isomorphism requires complete machines")
    for m in (m1, m2):
        if len(_reachable_order(m.delta, m.initial)) != m.n_states:
            raise ValueError("isomorphism requires all states to be reachable")
    if m1.n_states != m2.n_states:
        return False
    trans = _output_translation(m1, m2)
    fwd = np.full(m1.n_states, -1, dtype=np.int32)
    bwd = np.full(m2.n_states, -1, dtype=np.int32)
    fwd[m1.initial] = m2.initial
    bwd[m2.initial] = m1.initial
    stack = [m1.initial]
    while stack:
        q1 = stack.pop()
        q2 = int(fwd[q1])
        if trans[m1.outputs[q1]] != m2.outputs[q2]:
            return False
        for a in range(len(m1.input_alphabet)):
            t1 = int(m1.delta[q1, a])
            t2 = int(m2.delta[q2, a])
            if fwd[t1] == -1 and bwd[t2] == -1:
                fwd[t1] = t2
                bwd[t2] = t1
                stack.append(t1)
            elif fwd[t1] != t2 or bwd[t2] != t1:
                return False
    return True


def _require_same_skeleton(dfas: Sequence[Dfa]):
    first = dfas[0]
    for d in dfas[1:]:
        if d.alphabet != first.alphabet:
            raise AlphabetMismatchError("component DFAs must share one alphabet")
        if (d.n_states != first.n_states or d.initial != first.initial
                or not (d.delta == first.delta).all()):
            raise SkeletonMismatchError(
                "component DFAs must share one state-transition skeleton")


def product_aligned(dfas: Sequence[Dfa], enc) -> MooreMachine:
    """Fuse DFAs sharing one skeleton into a Moore machine on that skeleton.

    ``dfas[i]`` contributes bit ``i`` of each state's output code (``1`` iff
    the state's mark is ACCEPTING); ``enc`` decodes the code vector into an
    output symbol.  A code with no symbol raises :class:`InvalidCodeError`.
    The result may be incomplete if the shared skeleton is.
    """
    if not dfas:
        raise ValueError("need at least one DFA")
    if len(dfas) != enc.bit_count:
        raise ValueError("need exactly one DFA per encoding bit")
    _require_same_skeleton(dfas)
    first = dfas[0]
    outputs = np.empty(first.n_states, dtype=np.int16)
    for q in range(first.n_states):
        bits = tuple(1 if d.marks[q] == Mark.ACCEPTING else 0 for d in dfas)
        sym = enc.decode(bits)
        if sym is None:
            raise InvalidCodeError(
                "state %d carries code %r, which decodes to no output symbol"
                % (q, bits))
        outputs[q] = enc.output_alphabet.index(sym)
    return MooreMachine(first.alphabet, enc.output_alphabet,
                        first.delta, outputs, first.initial)


def product_general(dfas: Sequence[Dfa], enc) -> MooreMachine:
    """Reachable product of complete DFAs, read as a Moore machine.

    States are the tuples of component states reachable from the tuple of
    initial states; the output of a tuple decodes its acceptance-bit vector,
    falling back to ``enc.fallback`` for codes with no symbol.  Component
    DFAs must be complete and share an alphabet.
    """
    if not dfas:
        raise ValueError("need at least one DFA")
    if len(dfas) != enc.bit_count:
        raise ValueError("need exactly one DFA per encoding bit")
    alphabet = dfas[0].alphabet
    for d in dfas:
        if d.alphabet != alphabet:
            raise AlphabetMismatchError("component DFAs must share one alphabet")
        if not d.is_complete:
            raise UndefinedTransitionError("product_general requires complete DFAs")
    n_sym = len(alphabet)
    start = tuple(d.initial for d in dfas)
    ids: Dict[Tuple[int, ...], int] = {start: 0}
    queue = [start]
    delta_rows: List[List[int]] = []
    outputs: List[int] = []
    head = 0
    while head < len(queue):
        tup = queue[head]
        head += 1
        bits = tuple(1 if d.marks[q] == Mark.ACCEPTING else 0 for d, q in zip(dfas, tup))
        sym = enc.decode(bits)
        if sym is None:
            sym = enc.fallback
        outputs.append(enc.output_alphabet.index(sym))
        row = []
        for a in range(n_sym):
            nxt = tuple(int(d.delta[q, a]) for d, q in zip(dfas, tup))
            nid = ids.get(nxt)
            if nid is None:
                nid = len(ids)
                ids[nxt] = nid
                queue.append(nxt)
            row.append(nid)
        delta_rows.append(row)
    return MooreMachine(alphabet, enc.output_alphabet,
                        np.array(delta_rows, dtype=np.int32),
                        np.array(outputs, dtype=np.int16), 0)
