"""Characteristic samples for Moore machines, and random minimal machines.

A trace set is *characteristic* for a minimal complete machine when its input
words (1) cover the nucleus -- the empty word plus every one-symbol extension
of every state's shortest access word -- and (2) for every shortest-prefix
word ``u`` and nucleus word ``v`` reaching distinct states, contain ``u.w``
and ``v.w`` among their prefixes, where ``w`` is the minimum word (in the
length-then-lexicographic order) distinguishing those two states.  Learning
with ``learn_mooremi`` from a characteristic sample of a minimal machine
recovers that machine up to isomorphism.

:func:`characteristic_sample` builds such a sample of bounded size;
:func:`is_characteristic` checks the two conditions and reports the first
violation; :func:`random_minimal_moore` generates seeded random minimal
machines for benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ._kernels import get_kernels
from .automata import Alphabet, MooreMachine, Word, minimize, run
from .errors import GenerationFailureError
from .traces import MooreTrace, TraceSet

OrdWord = Tuple[int, ...]


def shortest_prefixes(m: MooreMachine) -> Dict[int, Word]:
    """Minimum access word of every reachable state.

    BFS from the initial state expanding input symbols in ordinal order, so
    each state's word is minimal in the length-then-lexicographic order.
    """
    result: Dict[int, Word] = {m.initial: ()}
    queue: List[Tuple[int, Word]] = [(m.initial, ())]
    head = 0
    while head < len(queue):
        q, w = queue[head]
        head += 1
        for a, sym in enumerate(m.input_alphabet.symbols):
            t = int(m.delta[q, a])
            if t >= 0 and t not in result:
                result[t] = w + (sym,)
                queue.append((t, w + (sym,)))
    return result


def nucleus(m: MooreMachine) -> Tuple[Word, ...]:
    """The empty word plus every one-symbol extension of every shortest prefix.

    Sorted in the canonical word order.  These are the words a sample must
    cover to pin down every transition of the machine.
    """
    ia = m.input_alphabet
    words: List[Word] = [()]
    for w in shortest_prefixes(m).values():
        for sym in ia.symbols:
            words.append(w + (sym,))
    return tuple(sorted(words, key=lambda w: (len(w), ia.encode_word(w))))


class _SuffixFinder:
    """Memoized minimum-distinguishing-suffix queries against one machine."""

    def __init__(self, m: MooreMachine, engine: Optional[str] = None):
        if not m.is_complete:
            raise ValueError("distinguishing suffixes require a complete machine")
        self.m = m
        self._kernels = get_kernels(engine)
        n = m.n_states
        self._stamp_arr = np.zeros(n * n, dtype=np.int32)
        self._stamp = 0
        self._queue = np.empty(n * n + 1, dtype=np.int32)
        self._parent = np.empty(n * n + 1, dtype=np.int32)
        self._psym = np.empty(n * n + 1, dtype=np.int32)
        self._memo: Dict[Tuple[int, int], Optional[OrdWord]] = {}

    def suffix(self, q1: int, q2: int) -> Optional[OrdWord]:
        """Minimum distinguishing word (as ordinals), or None if equivalent."""
        key = (q1, q2) if q1 <= q2 else (q2, q1)
        if key in self._memo:
            return self._memo[key]
        self._stamp += 1
        idx = self._kernels.pair_bfs(self.m.delta, self.m.outputs, key[0], key[1],
                                     self._stamp_arr, self._stamp, self._queue,
                                     self._parent, self._psym)
        if idx < 0:
            word: Optional[OrdWord] = None
        else:
            rev = []
            while idx > 0:
                rev.append(int(self._psym[idx]))
                idx = int(self._parent[idx])
            word = tuple(reversed(rev))
        self._memo[key] = word
        return word


def min_distinguishing_suffix(m: MooreMachine, q1: int, q2: int,
                              engine: Optional[str] = None) -> Word:
    """Minimum word on which runs from ``q1`` and ``q2`` produce different outputs.

    The search is a BFS over the pair automaton whose final pairs are those
    with differing state outputs, expanding symbols in ordinal order, so the
    returned word is minimal in the length-then-lexicographic order (the empty
    word if the outputs of ``q1`` and ``q2`` already differ).  Raises
    ``ValueError`` if ``q1 == q2`` or the states are behaviorally equivalent.
    """
    if q1 == q2:
        raise ValueError("states must be distinct")
    for q in (q1, q2):
        if not 0 <= q < m.n_states:
            raise ValueError("state %d out of range" % q)
    word = _SuffixFinder(m, engine).suffix(q1, q2)
    if word is None:
        raise ValueError("states %d and %d are equivalent" % (q1, q2))
    return m.input_alphabet.decode_word(word)


@dataclass(frozen=True)
class CharSampleReport:
    """A characteristic sample plus the ingredients it was built from."""

    sample: TraceSet
    prefixes: Dict[int, Word]
    nucleus_words: Tuple[Word, ...]
    suffixes: Dict[Tuple[int, int], Word]


@dataclass(frozen=True)
class CharacteristicViolation:
    """First violated clause found by :func:`is_characteristic`.

    ``kind`` is ``"nucleus"`` (a nucleus word is not a training prefix;
    ``missing`` holds it) or ``"suffix"`` (states reached by ``u`` and ``v``
    have minimum distinguishing suffix ``w``, but ``missing`` -- one of
    ``u.w``/``v.w`` -- is not a training prefix).
    """

    kind: str
    missing: Word
    u: Optional[Word] = None
    v: Optional[Word] = None
    w: Optional[Word] = None


def _word_key(ia: Alphabet):
    return lambda w: (len(w), ia.encode_word(w))


def characteristic_sample(m: MooreMachine,
                          engine: Optional[str] = None) -> CharSampleReport:
    """Build a characteristic sample of a minimal complete Moore machine.

    Starts from the nucleus, adds ``u.w``/``v.w`` for every shortest-prefix
    word ``u`` and nucleus word ``v`` reaching distinct states (``w`` the
    minimum distinguishing suffix of those states), prunes words that are
    proper prefixes of other kept words, and pairs each kept word with the
    machine's run over it.  The sample has at most
    ``(|Q|·|I| + 1)·(|Q| + 1)`` traces.
    """
    if not m.is_complete:
        raise ValueError("characteristic samples require a complete machine")
    sp = shortest_prefixes(m)
    if len(sp) != m.n_states:
        raise ValueError("characteristic samples require all states reachable")
    ia = m.input_alphabet
    key = _word_key(ia)
    finder = _SuffixFinder(m, engine)

    def target(w: Word) -> int:
        q = m.initial
        for sym in w:
            q = int(m.delta[q, ia.index(sym)])
        return q

    nl = nucleus(m)
    nl_targets = {v: target(v) for v in nl}
    sp_items = sorted(sp.items(), key=lambda kv: key(kv[1]))

    words: Set[Word] = set(nl)
    suffixes: Dict[Tuple[int, int], Word] = {}
    for qu, u in sp_items:
        for v in nl:
            qv = nl_targets[v]
            if qu == qv:
                continue
            skey = (qu, qv) if qu <= qv else (qv, qu)
            w = suffixes.get(skey)
            if w is None:
                ow = finder.suffix(qu, qv)
                if ow is None:
                    raise ValueError(
                        "states %d and %d are equivalent; the machine must be "
                        "minimal" % (qu, qv))
                w = ia.decode_word(ow)
                suffixes[skey] = w
            words.add(u + w)
            words.add(v + w)

    # keep only words that are not proper prefixes of other kept words
    covered: Set[Word] = set()
    for w in words:
        for i in range(len(w)):
            covered.add(w[:i])
    kept = sorted((w for w in words if w not in covered), key=key)

    traces = tuple(MooreTrace(w, run(m, w)) for w in kept)
    sample = TraceSet(traces, ia, m.output_alphabet)
    return CharSampleReport(sample, sp, nl, suffixes)


def is_characteristic(ts: TraceSet, m: MooreMachine,
                      engine: Optional[str] = None
                      ) -> Tuple[bool, Optional[CharacteristicViolation]]:
    """Check whether a trace set is characteristic for a minimal machine.

    Returns ``(True, None)`` or ``(False, violation)`` with the first violated
    clause, scanning shortest-prefix words and nucleus words in canonical
    order.  ``m`` must be complete, reachable, and minimal.
    """
    ia = m.input_alphabet
    if ts.input_alphabet != ia:
        from .errors import AlphabetMismatchError

        raise AlphabetMismatchError(
            "trace set and machine must share the input alphabet")
    prefixes: Set[Word] = set()
    for t in ts.traces:
        for i in range(len(t.input) + 1):
            prefixes.add(t.input[:i])

    sp = shortest_prefixes(m)
    if len(sp) != m.n_states:
        raise ValueError("is_characteristic requires all states reachable")
    key = _word_key(ia)
    finder = _SuffixFinder(m, engine)

    def target(w: Word) -> int:
        q = m.initial
        for sym in w:
            q = int(m.delta[q, ia.index(sym)])
        return q

    nl = nucleus(m)
    for v in nl:
        if v not in prefixes:
            return False, CharacteristicViolation("nucleus", v)

    nl_targets = {v: target(v) for v in nl}
    sp_items = sorted(sp.items(), key=lambda kv: key(kv[1]))
    for qu, u in sp_items:
        for v in nl:
            qv = nl_targets[v]
            if qu == qv:
                continue
            ow = finder.suffix(qu, qv)
            if ow is None:
                raise ValueError(
                    "states %d and %d are equivalent; the machine must be "
                    "minimal" % (qu, qv))
            w = ia.decode_word(ow)
            if u + w not in prefixes:
                return False, CharacteristicViolation("suffix", u + w, u, v, w)
            if v + w not in prefixes:
                return False, CharacteristicViolation("suffix", v + w, u, v, w)
    return True, None


def _padded_symbols(prefix: str, count: int) -> Tuple[str, ...]:
    width = len(str(count - 1)) if count > 1 else 1
    return tuple("%s%0*d" % (prefix, width, k) for k in range(count))


def random_minimal_moore(seed: int, n_states: int, n_inputs: int,
                         n_outputs: int, max_tries: int = 1000) -> MooreMachine:
    """Seeded random minimal complete Moore machine with exact state count.

    Each attempt draws a uniformly random output per state and then forces
    every output symbol to appear (via a random permutation of states), draws
    a uniformly random transition table and then forces reachability (via a
    random permutation chain from the initial state), and minimizes.  The
    first attempt whose minimization keeps all ``n_states`` states is
    returned; :class:`GenerationFailureError` is raised after ``max_tries``
    attempts.  Input symbols are ``i0, i1, ...`` and output symbols
    ``o0, o1, ...`` (zero-padded so ordinal order matches sorted order).
    """
    if n_states < 1 or n_inputs < 1 or n_outputs < 1:
        raise ValueError("state and alphabet counts must be positive")
    if n_outputs > n_states:
        raise ValueError("cannot make %d outputs appear on %d states"
                         % (n_outputs, n_states))
    ia = Alphabet(_padded_symbols("i", n_inputs))
    oa = Alphabet(_padded_symbols("o", n_outputs))
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        outputs = rng.integers(0, n_outputs, n_states, dtype=np.int16)
        perm = rng.permutation(n_states)
        for k in range(n_outputs):
            outputs[perm[k]] = k
        delta = rng.integers(0, n_states, (n_states, n_inputs), dtype=np.int32)
        chain = np.concatenate(([0], rng.permutation(n_states - 1) + 1))
        for k in range(n_states - 1):
            a = int(rng.integers(0, n_inputs))
            delta[chain[k], a] = chain[k + 1]
        candidate = minimize(MooreMachine(ia, oa, delta, outputs, 0))
        if candidate.n_states == n_states:
            return candidate
    raise GenerationFailureError(
        "no minimal machine with %d states found in %d tries (seed %d)"
        % (n_states, max_tries, seed))
