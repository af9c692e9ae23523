"""Passive learners that build Moore machines from input-output traces.

All three learners share a preprocessing pipeline: traces are unrolled into
examples, each example's output symbol is binary-encoded with ``N`` bits, and
the example words are partitioned into ``N`` positive/negative set pairs (one
per bit).  They differ in what happens next:

* ``learn_ptap`` builds the prefix-tree acceptor product (N tri-state DFAs on
  one shared tree skeleton), fuses it into a Moore machine, and completes it
  with self-loops -- no generalization beyond the training prefixes.
* ``learn_prpni`` runs the classic red-blue state-merging algorithm (RPNI)
  independently per bit, completes each learned DFA with self-loops, and takes
  their reachable product.  The component DFAs generalize independently, so
  the product can be large and its codes can be invalid (those states fall
  back to the minimum output symbol).
* ``learn_mooremi`` runs one red-blue merging loop on the whole PTA product,
  accepting a merge only if it creates no accept/reject conflict in any of the
  N mark vectors.  This keeps the N DFAs on a single shared skeleton, so the
  result is consistent with the training set and, given a characteristic
  sample, equals the target machine up to isomorphism.

States of a PTA product are numbered in the canonical word order of their
access words, so numeric id comparison realizes the order ``<`` used for
survivor selection, blue-state picking, and red promotion.
"""

from __future__ import annotations

import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ._kernels import (
    MARK_ACCEPTING,
    MARK_REJECTING,
    MARK_UNKNOWN,
    PYTHON_KERNELS,
    KernelSet,
    get_kernels,
)
from .automata import (
    Alphabet,
    Dfa,
    MooreMachine,
    Word,
    complete_dfa_with_self_loops,
    complete_with_self_loops,
    product_aligned,
    product_general,
)
from .errors import MarkConflictError
from .traces import (
    ExamplePartition,
    OutputEncoding,
    TraceSet,
    make_encoding,
    partition_examples,
    traces_to_examples,
)

OrdWord = Tuple[int, ...]


class PtaProduct:
    """N tri-state DFAs sharing one prefix-tree skeleton, as mutable arrays.

    ``delta``/``parent_state``/``parent_sym`` describe the shared skeleton
    (``-1`` = undefined / no parent); ``marks[i]`` holds DFA ``i``'s per-state
    marks.  ``merged_into`` and ``alive`` track state merging: a dead state
    points at the state it was merged into, and :meth:`resolve` follows those
    pointers to the surviving representative.  State ids are assigned in the
    canonical order of access words, so ``q1 < q2`` iff ``word(q1) < word(q2)``.
    """

    __slots__ = ("input_alphabet", "delta", "marks", "alive", "merged_into",
                 "parent_state", "parent_sym", "words")

    def __init__(self, input_alphabet: Alphabet, delta: np.ndarray,
                 marks: np.ndarray, parent_state: np.ndarray,
                 parent_sym: np.ndarray, words: Tuple[OrdWord, ...]):
        self.input_alphabet = input_alphabet
        self.delta = delta
        self.marks = marks
        self.alive = np.ones(delta.shape[0], dtype=bool)
        self.merged_into = np.full(delta.shape[0], -1, dtype=np.int32)
        self.parent_state = parent_state
        self.parent_sym = parent_sym
        self.words = words

    @property
    def bit_count(self) -> int:
        return self.marks.shape[0]

    @property
    def n_states_total(self) -> int:
        return self.delta.shape[0]

    @property
    def n_states_live(self) -> int:
        return int(self.alive.sum())

    @property
    def initial(self) -> int:
        return 0

    def resolve(self, q: int) -> int:
        """Surviving representative of a (possibly merged-away) state."""
        m = self.merged_into
        while m[q] >= 0:
            q = int(m[q])
        return q

    def _resolve_table(self) -> np.ndarray:
        idx = np.arange(self.n_states_total)
        m = self.merged_into
        g = np.where(m >= 0, m, idx)
        while True:
            g2 = g[g]
            if (g2 == g).all():
                return g
            g = g2

    def word_of(self, q: int) -> Word:
        """Access word of a state (as it was in the original tree)."""
        return self.input_alphabet.decode_word(self.words[q])

    def mark(self, bit: int, q: int) -> int:
        return int(self.marks[bit, q])

    def live_reachable(self) -> List[int]:
        """Live states reachable from the root via resolved transitions, ascending."""
        res = self._resolve_table()
        seen: Set[int] = {0}
        stack = [0]
        while stack:
            q = stack.pop()
            for t in self.delta[q]:
                if t >= 0:
                    t = int(res[t])
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
        return sorted(seen)

    def to_dfas(self) -> List[Dfa]:
        """Extract the N DFAs on the current (merged) skeleton.

        States are the live reachable states renumbered in ascending id order
        (so the order ``<`` survives renumbering); transition targets are
        resolved through merge pointers.  The DFAs share one skeleton by
        construction.
        """
        live = self.live_reachable()
        res = self._resolve_table()
        remap = np.full(self.n_states_total, -1, dtype=np.int32)
        for new, old in enumerate(live):
            remap[old] = new
        delta = self.delta[live]
        defined = delta >= 0
        delta = np.where(defined, remap[res[np.where(defined, delta, 0)]], -1)
        delta = delta.astype(np.int32)
        return [Dfa(self.input_alphabet, delta, self.marks[i, live], 0)
                for i in range(self.bit_count)]

    def copy(self) -> "PtaProduct":
        p = PtaProduct(self.input_alphabet, np.array(self.delta, copy=True),
                       np.array(self.marks, copy=True),
                       np.array(self.parent_state, copy=True),
                       np.array(self.parent_sym, copy=True), self.words)
        p.alive = np.array(self.alive, copy=True)
        p.merged_into = np.array(self.merged_into, copy=True)
        return p

    def undo(self, log: "UndoLog"):
        """Restore the arrays to their exact state before the logged merge."""
        PYTHON_KERNELS.undo_merge(self.delta, self.marks, self.alive,
                                  self.merged_into, log.entries, len(log.entries))

    def __repr__(self) -> str:
        return "<PtaProduct dfas=%d states=%d live=%d>" % (
            self.bit_count, self.n_states_total, self.n_states_live)


@dataclass(frozen=True)
class UndoLog:
    """Recorded mutations of one accepted merge, for exact rollback."""

    entries: np.ndarray

    def __len__(self) -> int:
        return len(self.entries)


def build_ptap(partition: ExamplePartition, input_alphabet: Alphabet) -> PtaProduct:
    """Prefix-tree acceptor product over the words of an example partition.

    The tree covers every prefix of every word in any positive or negative
    set (all N DFAs share it); DFA ``i`` marks the state of word ``w``
    ACCEPTING if ``w`` is in ``positive[i]``, REJECTING if in ``negative[i]``,
    UNKNOWN otherwise.  A word in both raises :class:`MarkConflictError`.
    """
    prefixes: Set[OrdWord] = {()}
    for sets in (partition.positive, partition.negative):
        for words in sets:
            for w in words:
                ow = input_alphabet.encode_word(w)
                for i in range(1, len(ow) + 1):
                    prefixes.add(ow[:i])
    ordered: List[OrdWord] = sorted(prefixes, key=lambda w: (len(w), w))
    ids: Dict[OrdWord, int] = {w: q for q, w in enumerate(ordered)}
    n = len(ordered)
    n_sym = len(input_alphabet)
    delta = np.full((n, n_sym), -1, dtype=np.int32)
    parent_state = np.full(n, -1, dtype=np.int32)
    parent_sym = np.full(n, -1, dtype=np.int32)
    for w, q in ids.items():
        if w:
            p = ids[w[:-1]]
            delta[p, w[-1]] = q
            parent_state[q] = p
            parent_sym[q] = w[-1]
    marks = np.full((partition.bit_count, n), MARK_UNKNOWN, dtype=np.int8)
    for i in range(partition.bit_count):
        for w in partition.positive[i]:
            marks[i, ids[input_alphabet.encode_word(w)]] = MARK_ACCEPTING
        for w in partition.negative[i]:
            q = ids[input_alphabet.encode_word(w)]
            if marks[i, q] == MARK_ACCEPTING:
                raise MarkConflictError(
                    "word %r is both a positive and a negative example of bit %d"
                    % (" ".join(w), i))
            marks[i, q] = MARK_REJECTING
    return PtaProduct(input_alphabet, delta, marks, parent_state, parent_sym,
                      tuple(ordered))


def mooremi_merge(pta: PtaProduct, q_red: int, q_blue: int,
                  engine: Optional[str] = None) -> UndoLog:
    """Merge the blue state into the red state across all N DFAs at once.

    The blue state's unique incoming edge is redirected onto the red state and
    the resulting nondeterminism is folded away, the smaller access word
    surviving each collapsed pair; UNKNOWN marks adopt the other side's mark.
    If any fold pair has an ACCEPTING/REJECTING clash in any DFA, the arrays
    are restored exactly and :class:`MarkConflictError` is raised.  On success
    the merge is applied in place and the returned :class:`UndoLog` can
    restore the previous state via :meth:`PtaProduct.undo`.
    """
    if not (pta.alive[q_red] and pta.alive[q_blue]):
        raise ValueError("both states must be alive")
    if q_red == q_blue:
        raise ValueError("cannot merge a state with itself")
    if pta.parent_state[q_blue] < 0:
        raise ValueError("the blue state must have a parent edge to redirect")
    k = get_kernels(engine)
    n = pta.n_states_total
    n_bits, n_sym = pta.marks.shape[0], pta.delta.shape[1]
    undo = np.empty((n * (n_bits + n_sym + 2) + 4, 4), dtype=np.int64)
    stack = np.empty((n * n_sym + 4, 2), dtype=np.int32)
    ok, n_undo = k.try_merge(pta.delta, pta.marks, pta.alive, pta.merged_into,
                             pta.parent_state, pta.parent_sym, q_red, q_blue,
                             undo, stack)
    if not ok:
        raise MarkConflictError(
            "merging state %d into state %d would make a state both accepting "
            "and rejecting" % (q_blue, q_red))
    return UndoLog(np.array(undo[:n_undo], copy=True))


@dataclass
class RedBlueState:
    """Mutable state of the red-blue merging loop over a PTA product.

    ``red`` holds the promoted (established) states in ascending id order;
    the blue states are recomputed on demand as the live non-red one-letter
    successors of the red states.  :meth:`run` drives the loop to completion.
    """

    pta: PtaProduct
    engine: Optional[str] = None
    red: List[int] = field(default_factory=lambda: [0])
    merge_attempts: int = 0
    merges_accepted: int = 0

    def __post_init__(self):
        self._kernels: KernelSet = get_kernels(self.engine)
        n = self.pta.n_states_total
        n_bits, n_sym = self.pta.marks.shape[0], self.pta.delta.shape[1]
        self._undo = np.empty((n * (n_bits + n_sym + 2) + 4, 4), dtype=np.int64)
        self._stack = np.empty((n * n_sym + 4, 2), dtype=np.int32)
        self._seen = np.zeros(n, dtype=bool)
        self._cand = np.empty(max(n, 1), dtype=np.int32)
        self._is_red = np.zeros(n, dtype=bool)
        self._is_red[self.red] = True

    def blue(self) -> List[int]:
        """Current blue states in ascending order."""
        p = self.pta
        reds = np.array(self.red, dtype=np.int32)
        cnt = self._kernels.blue_candidates(p.delta, p.merged_into, p.alive,
                                            self._is_red, reds, self._seen,
                                            self._cand)
        return sorted(int(q) for q in self._cand[:cnt])

    def pick_next(self) -> Optional[int]:
        """Smallest blue state (by access word order), or None when done."""
        p = self.pta
        reds = np.array(self.red, dtype=np.int32)
        cnt = self._kernels.blue_candidates(p.delta, p.merged_into, p.alive,
                                            self._is_red, reds, self._seen,
                                            self._cand)
        if cnt == 0:
            return None
        return int(self._cand[:cnt].min())

    def step(self, q_blue: int) -> bool:
        """Try to merge ``q_blue`` into each red state in order; promote on failure.

        Returns True if a merge was accepted, False if the state was promoted.
        """
        p = self.pta
        for q_red in self.red:
            self.merge_attempts += 1
            ok, _ = self._kernels.try_merge(p.delta, p.marks, p.alive,
                                            p.merged_into, p.parent_state,
                                            p.parent_sym, q_red, q_blue,
                                            self._undo, self._stack)
            if ok:
                self.merges_accepted += 1
                # a fold can merge two red states; renormalize if so
                reds = np.array(self.red, dtype=np.int32)
                if (p.merged_into[reds] >= 0).any():
                    self.red = sorted({p.resolve(r) for r in self.red})
                    self._is_red[:] = False
                    self._is_red[self.red] = True
                return True
        insort(self.red, q_blue)
        self._is_red[q_blue] = True
        return False

    def run(self) -> "RedBlueState":
        """Process blue states smallest-first until none remain.

        The whole loop runs inside one kernel call; it is behaviorally
        identical to repeating ``self.step(self.pick_next())``.
        """
        p = self.pta
        red_buf = np.empty(p.n_states_total, dtype=np.int32)
        red_buf[:len(self.red)] = self.red
        attempts, accepts, n_red = self._kernels.red_blue_run(
            p.delta, p.marks, p.alive, p.merged_into, p.parent_state,
            p.parent_sym, self._undo, self._stack, self._seen, self._cand,
            red_buf, self._is_red, len(self.red))
        self.merge_attempts += attempts
        self.merges_accepted += accepts
        self.red = [int(q) for q in red_buf[:n_red]]
        return self


@dataclass(frozen=True)
class LearnStats:
    """Bookkeeping record returned alongside a learned machine."""

    algorithm: str
    merge_attempts: int
    merges_accepted: int
    wall_time_s: float
    states_before_completion: int
    states_after_completion: int


@dataclass(frozen=True)
class LearnResult:
    machine: MooreMachine
    stats: LearnStats


def _preprocess(ts: TraceSet) -> Tuple[OutputEncoding, ExamplePartition]:
    enc = make_encoding(ts.output_alphabet)
    return enc, partition_examples(traces_to_examples(ts), enc)


def learn_ptap(ts: TraceSet, engine: Optional[str] = None) -> LearnResult:
    """Fuse the PTA product directly into a self-loop-completed Moore machine.

    The result has one state per distinct training input prefix and is
    consistent with every training trace, but does not generalize: off-tree
    behavior is whatever the self-loops produce.
    """
    t0 = time.perf_counter()
    enc, partition = _preprocess(ts)
    pta = build_ptap(partition, ts.input_alphabet)
    m = product_aligned(pta.to_dfas(), enc)
    before = m.n_states
    m = complete_with_self_loops(m)
    return LearnResult(m, LearnStats("ptap", 0, 0, time.perf_counter() - t0,
                                     before, m.n_states))


def _rpni_state(positive, negative, alphabet: Alphabet,
                engine: Optional[str] = None) -> RedBlueState:
    partition = ExamplePartition((frozenset(positive),), (frozenset(negative),))
    pta = build_ptap(partition, alphabet)
    return RedBlueState(pta, engine).run()


def rpni(positive: Sequence[Word], negative: Sequence[Word],
         alphabet: Alphabet, engine: Optional[str] = None) -> Dfa:
    """Red-blue state merging on a single DFA (the N=1 case of the loop).

    Returns a complete DFA (undefined transitions become self-loops) that
    accepts every positive word and rejects every negative word.  A word in
    both sets raises :class:`MarkConflictError`.
    """
    rb = _rpni_state(positive, negative, alphabet, engine)
    return complete_dfa_with_self_loops(rb.pta.to_dfas()[0])


def learn_prpni(ts: TraceSet, engine: Optional[str] = None) -> LearnResult:
    """Run RPNI once per output bit, then take the reachable product.

    Each bit's DFA is learned independently, so the component skeletons
    diverge and the product can be far larger than the target machine; tuple
    states whose acceptance bits decode to no output symbol fall back to the
    minimum output symbol.  The result is complete and consistent with the
    training traces.
    """
    t0 = time.perf_counter()
    enc, partition = _preprocess(ts)
    attempts = 0
    accepts = 0
    dfas = []
    for i in range(enc.bit_count):
        rb = _rpni_state(partition.positive[i], partition.negative[i],
                         ts.input_alphabet, engine)
        attempts += rb.merge_attempts
        accepts += rb.merges_accepted
        dfas.append(complete_dfa_with_self_loops(rb.pta.to_dfas()[0]))
    m = product_general(dfas, enc)
    return LearnResult(m, LearnStats("prpni", attempts, accepts,
                                     time.perf_counter() - t0,
                                     m.n_states, m.n_states))


def learn_mooremi(ts: TraceSet, engine: Optional[str] = None) -> LearnResult:
    """Red-blue merging over all N DFAs at once on the shared PTA skeleton.

    A merge is accepted only if no DFA suffers an accept/reject conflict, so
    all N skeletons stay aligned and the fused machine is consistent with the
    training set.  On a characteristic sample of a minimal machine, the result
    is that machine up to isomorphism.
    """
    t0 = time.perf_counter()
    enc, partition = _preprocess(ts)
    pta = build_ptap(partition, ts.input_alphabet)
    rb = RedBlueState(pta, engine).run()
    m = product_aligned(pta.to_dfas(), enc)
    before = m.n_states
    m = complete_with_self_loops(m)
    return LearnResult(m, LearnStats("mooremi", rb.merge_attempts,
                                     rb.merges_accepted,
                                     time.perf_counter() - t0,
                                     before, m.n_states))
