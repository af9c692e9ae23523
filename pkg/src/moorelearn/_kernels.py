"""Hot numeric kernels with interchangeable numba and pure-python engines.

The merge fold of the state-merging learners and the pair-automaton BFS of the
distinguishing-suffix search dominate runtime at benchmark sizes.  Both are
written once as plain loops over numpy arrays; when numba is installed the
same functions are compiled with ``@njit``, otherwise (or when the environment
variable ``MOORELEARN_PURE_PYTHON=1`` is set) the uncompiled numpy versions
run.  ``benchmarks/bench_kernels.py`` compares the two engines.

Undo log entry layout (int64, one row per entry)::

    (0, state, symbol, old_target)   delta entry overwritten
    (1, bit,   state,  old_mark)     mark promoted
    (2, state, 0,      0)            state deleted (alive cleared)
    (3, state, 0,      0)            merged_into pointer installed
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


ENGINE_ENV_VAR = "MOORELEARN_PURE_PYTHON"

OP_DELTA = 0
OP_MARK = 1
OP_ALIVE = 2
OP_MERGED = 3

MARK_UNKNOWN = 0
MARK_ACCEPTING = 1
MARK_REJECTING = 2


def _try_merge(delta, marks, alive, merged, parent_state, parent_sym,
               q_red, q_blue, undo, stack):
    """Merge the blue state into the red state, folding until deterministic.

    Redirects the unique incoming edge of ``q_blue`` onto ``q_red``, then
    repeatedly merges the resulting nondeterministic target pairs; the smaller
    state id (equivalently: the smaller access word) survives each pair.
    Marks join bitwise, UNKNOWN yielding to either decided mark.  On an
    ACCEPTING/REJECTING clash every change is rolled back and ``(False, 0)``
    is returned; on success the arrays keep the merged shape and
    ``(True, n_undo)`` is returned, where ``undo[:n_undo]`` lets the caller
    restore the pre-merge state.
    """
    n_bits = marks.shape[0]
    n_sym = delta.shape[1]
    n_undo = 0

    p = parent_state[q_blue]
    while merged[p] >= 0:
        p = merged[p]
    a = parent_sym[q_blue]
    undo[n_undo, 0] = OP_DELTA
    undo[n_undo, 1] = p
    undo[n_undo, 2] = a
    undo[n_undo, 3] = delta[p, a]
    n_undo += 1
    delta[p, a] = q_red

    stack[0, 0] = q_red
    stack[0, 1] = q_blue
    n_stack = 1
    ok = True
    while n_stack > 0:
        n_stack -= 1
        q1 = stack[n_stack, 0]
        q2 = stack[n_stack, 1]
        while merged[q1] >= 0:
            q1 = merged[q1]
        while merged[q2] >= 0:
            q2 = merged[q2]
        if q1 == q2:
            continue
        if q2 < q1:
            q1, q2 = q2, q1
        conflict = False
        for i in range(n_bits):
            m1 = marks[i, q1]
            m2 = marks[i, q2]
            if ((m1 == MARK_ACCEPTING and m2 == MARK_REJECTING)
                    or (m1 == MARK_REJECTING and m2 == MARK_ACCEPTING)):
                conflict = True
                break
        if conflict:
            ok = False
            break
        for i in range(n_bits):
            m1 = marks[i, q1]
            m2 = marks[i, q2]
            if m2 != MARK_UNKNOWN and m1 == MARK_UNKNOWN:
                undo[n_undo, 0] = OP_MARK
                undo[n_undo, 1] = i
                undo[n_undo, 2] = q1
                undo[n_undo, 3] = m1
                n_undo += 1
                marks[i, q1] = m2
        undo[n_undo, 0] = OP_ALIVE
        undo[n_undo, 1] = q2
        undo[n_undo, 2] = 0
        undo[n_undo, 3] = 0
        n_undo += 1
        alive[q2] = False
        undo[n_undo, 0] = OP_MERGED
        undo[n_undo, 1] = q2
        undo[n_undo, 2] = 0
        undo[n_undo, 3] = 0
        n_undo += 1
        merged[q2] = q1
        for s in range(n_sym):
            t2 = delta[q2, s]
            if t2 < 0:
                continue
            t1 = delta[q1, s]
            if t1 < 0:
                undo[n_undo, 0] = OP_DELTA
                undo[n_undo, 1] = q1
                undo[n_undo, 2] = s
                undo[n_undo, 3] = -1
                n_undo += 1
                delta[q1, s] = t2
            else:
                stack[n_stack, 0] = t1
                stack[n_stack, 1] = t2
                n_stack += 1

    if not ok:
        for k in range(n_undo - 1, -1, -1):
            op = undo[k, 0]
            if op == OP_DELTA:
                delta[undo[k, 1], undo[k, 2]] = undo[k, 3]
            elif op == OP_MARK:
                marks[undo[k, 1], undo[k, 2]] = undo[k, 3]
            elif op == OP_ALIVE:
                alive[undo[k, 1]] = True
            else:
                merged[undo[k, 1]] = -1
        return False, 0
    return True, n_undo


def _undo_merge(delta, marks, alive, merged, undo, n_undo):
    """Roll back a successful merge recorded in ``undo[:n_undo]``."""
    for k in range(n_undo - 1, -1, -1):
        op = undo[k, 0]
        if op == OP_DELTA:
            delta[undo[k, 1], undo[k, 2]] = undo[k, 3]
        elif op == OP_MARK:
            marks[undo[k, 1], undo[k, 2]] = undo[k, 3]
        elif op == OP_ALIVE:
            alive[undo[k, 1]] = True
        else:
            merged[undo[k, 1]] = -1


def _blue_candidates(delta, merged, alive, is_red, reds, seen, out):
    """Collect the live non-red one-letter successors of the red states.

    ``reds`` lists the red state ids; successors are resolved through
    ``merged`` pointers.  Results are written to ``out`` (deduplicated,
    unsorted); returns the count.  ``seen`` is a scratch bool array that is
    left cleared.
    """
    n_sym = delta.shape[1]
    count = 0
    for idx in range(reds.shape[0]):
        r = reds[idx]
        for s in range(n_sym):
            t = delta[r, s]
            if t < 0:
                continue
            while merged[t] >= 0:
                t = merged[t]
            if is_red[t] or seen[t]:
                continue
            seen[t] = True
            out[count] = t
            count += 1
    for k in range(count):
        seen[out[k]] = False
    return count


def _make_red_blue_run(try_merge, blue_candidates):
    """Build the full red-blue loop from one engine's inner kernels.

    The loop is defined once here and instantiated per engine (the numba
    engine compiles the closure, the python engine runs it as-is) so both
    engines execute the identical algorithm: pick the smallest blue state,
    try to merge it into each red state in ascending id order, promote it to
    red when every merge conflicts.  ``red[:n_red]`` (ascending) and
    ``is_red`` describe the initial red set and are updated in place; the
    return value is ``(merge_attempts, merges_accepted, n_red)``.
    """

    def _red_blue_run(delta, marks, alive, merged, parent_state, parent_sym,
                      undo, stack, seen, cand, red, is_red, n_red):
        attempts = 0
        accepts = 0
        while True:
            cnt = blue_candidates(delta, merged, alive, is_red,
                                  red[:n_red], seen, cand)
            if cnt == 0:
                return attempts, accepts, n_red
            b = cand[0]
            for k in range(1, cnt):
                if cand[k] < b:
                    b = cand[k]
            accepted = False
            for idx in range(n_red):
                attempts += 1
                ok, _ = try_merge(delta, marks, alive, merged, parent_state,
                                  parent_sym, red[idx], b, undo, stack)
                if ok:
                    accepts += 1
                    # a fold can merge red states; resolve, sort, dedupe
                    dirty = False
                    for j in range(n_red):
                        if merged[red[j]] >= 0:
                            dirty = True
                            break
                    if dirty:
                        for j in range(n_red):
                            r = red[j]
                            while merged[r] >= 0:
                                r = merged[r]
                            red[j] = r
                        for j in range(1, n_red):
                            v = red[j]
                            i2 = j - 1
                            while i2 >= 0 and red[i2] > v:
                                red[i2 + 1] = red[i2]
                                i2 -= 1
                            red[i2 + 1] = v
                        kept = 0
                        for j in range(n_red):
                            if kept == 0 or red[kept - 1] != red[j]:
                                red[kept] = red[j]
                                kept += 1
                        n_red = kept
                        for j in range(is_red.shape[0]):
                            is_red[j] = False
                        for j in range(n_red):
                            is_red[red[j]] = True
                    accepted = True
                    break
            if not accepted:
                pos = n_red
                while pos > 0 and red[pos - 1] > b:
                    red[pos] = red[pos - 1]
                    pos -= 1
                red[pos] = b
                n_red += 1
                is_red[b] = True

    return _red_blue_run


def _pair_bfs(delta, outputs, qu, qv, stamp_arr, stamp, queue, parent, psym):
    """BFS the pair automaton from ``(qu, qv)`` to the nearest output mismatch.

    Expands pairs in FIFO order and symbols in ordinal order, so the first
    pair generated with differing state outputs is reached by the minimum
    word in the length-then-lexicographic order.  Returns the queue index of
    that pair (the word is reconstructed via ``parent``/``psym``), or ``-1``
    if the two states are equivalent.  ``stamp_arr``/``stamp`` implement
    clearing-free visited flags; ``queue`` must hold ``n*n + 1`` entries.
    """
    n = delta.shape[0]
    n_sym = delta.shape[1]
    start = qu * n + qv
    queue[0] = start
    parent[0] = -1
    psym[0] = -1
    stamp_arr[start] = stamp
    if outputs[qu] != outputs[qv]:
        return 0
    head = 0
    tail = 1
    while head < tail:
        pair = queue[head]
        q1 = pair // n
        q2 = pair % n
        for s in range(n_sym):
            t1 = delta[q1, s]
            t2 = delta[q2, s]
            tp = t1 * n + t2
            if stamp_arr[tp] == stamp:
                continue
            stamp_arr[tp] = stamp
            queue[tail] = tp
            parent[tail] = head
            psym[tail] = s
            if outputs[t1] != outputs[t2]:
                return tail
            tail += 1
        head += 1
    return -1


@dataclass(frozen=True)
class KernelSet:
    """One engine's implementations of the hot kernels."""

    name: str
    try_merge: Callable
    undo_merge: Callable
    blue_candidates: Callable
    pair_bfs: Callable
    red_blue_run: Callable


PYTHON_KERNELS = KernelSet("python", _try_merge, _undo_merge,
                           _blue_candidates, _pair_bfs,
                           _make_red_blue_run(_try_merge, _blue_candidates))

if NUMBA_AVAILABLE:
    _try_merge_jit = njit(cache=True)(_try_merge)
    _blue_candidates_jit = njit(cache=True)(_blue_candidates)
    JIT_KERNELS = KernelSet(
        "numba",
        _try_merge_jit,
        njit(cache=True)(_undo_merge),
        _blue_candidates_jit,
        njit(cache=True)(_pair_bfs),
        njit(cache=True)(_make_red_blue_run(_try_merge_jit,
                                            _blue_candidates_jit)),
    )
else:  # pragma: no cover - exercised only without numba
    JIT_KERNELS = PYTHON_KERNELS


def default_engine() -> str:
    """Engine selected by the environment: numba unless disabled or missing."""
    if os.environ.get(ENGINE_ENV_VAR, "").strip().lower() in ("1", "true", "yes"):
        return "python"
    return "numba" if NUMBA_AVAILABLE else "python"


def get_kernels(engine: Optional[str] = None) -> KernelSet:
    """Kernel set for ``engine`` ('numba' or 'python'; default per environment)."""
    if engine is None:
        engine = default_engine()
    if engine == "python":
        return PYTHON_KERNELS
    if engine == "numba":
        if not NUMBA_AVAILABLE:
            raise ValueError("numba engine requested but numba is not installed")
        return JIT_KERNELS
    raise ValueError("unknown engine %r (expected 'numba' or 'python')" % engine)


def warmup(engine: Optional[str] = None):
    """Trigger compilation of every kernel on tiny inputs (no-op for python)."""
    k = get_kernels(engine)
    delta = np.array([[1, -1], [-1, -1]], dtype=np.int32)
    marks = np.zeros((1, 2), dtype=np.int8)
    alive = np.ones(2, dtype=bool)
    merged = np.full(2, -1, dtype=np.int32)
    parent_state = np.array([-1, 0], dtype=np.int32)
    parent_sym = np.array([-1, 0], dtype=np.int32)
    undo = np.zeros((16, 4), dtype=np.int64)
    stack = np.zeros((16, 2), dtype=np.int32)
    ok, n = k.try_merge(delta, marks, alive, merged, parent_state, parent_sym,
                        0, 1, undo, stack)
    if ok:
        k.undo_merge(delta, marks, alive, merged, undo, n)
    is_red = np.array([True, False])
    seen = np.zeros(2, dtype=bool)
    out = np.zeros(4, dtype=np.int32)
    k.blue_candidates(delta, merged, alive, is_red,
                      np.array([0], dtype=np.int32), seen, out)
    red = np.zeros(2, dtype=np.int32)
    cand = np.zeros(2, dtype=np.int32)
    k.red_blue_run(delta, marks, alive, merged, parent_state, parent_sym,
                   undo, stack, seen, cand, red, is_red.copy(), 1)
    d2 = np.array([[1, 0], [0, 1]], dtype=np.int32)
    outs = np.array([0, 1], dtype=np.int16)
    stamp_arr = np.zeros(4, dtype=np.int32)
    queue = np.zeros(5, dtype=np.int32)
    parent = np.zeros(5, dtype=np.int32)
    psym = np.zeros(5, dtype=np.int32)
    k.pair_bfs(d2, outs, 0, 1, stamp_arr, 1, queue, parent, psym)
