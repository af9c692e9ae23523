"""Machines, runs, completion, minimization, equivalence, products."""

import numpy as np
import pytest

import moorelearn as ml
from moorelearn.automata import Dfa, Mark, length_lex_key

from conftest import (
    brute_equivalent,
    make_four_state_machine,
    make_two_state_machine,
    random_complete_machine,
)


# ---------------------------------------------------------------------------
# Alphabet
# ---------------------------------------------------------------------------

class TestAlphabet:
    def test_order_is_preserved(self):
        a = ml.Alphabet(("b", "a"))
        assert a.symbols == ("b", "a")
        assert a.index("b") == 0 and a.index("a") == 1

    def test_inferred_sorts(self):
        assert ml.Alphabet.inferred(["z", "a", "m"]).symbols == ("a", "m", "z")

    def test_rejects_duplicates_and_reserved(self):
        with pytest.raises(ValueError):
            ml.Alphabet(("a", "a"))
        with pytest.raises(ValueError):
            ml.Alphabet(("a b",))
        with pytest.raises(ValueError):
            ml.Alphabet(("a|b",))
        with pytest.raises(ValueError):
            ml.Alphabet(("#x",))
        with pytest.raises(ValueError):
            ml.Alphabet(())

    def test_unknown_symbol(self):
        with pytest.raises(ml.AlphabetMismatchError):
            ml.Alphabet(("a",)).index("b")

    def test_encode_decode_roundtrip(self):
        a = ml.Alphabet(("x", "y", "z"))
        w = ("y", "x", "z", "z")
        assert a.decode_word(a.encode_word(w)) == w

    def test_length_lex_order(self):
        a = ml.Alphabet(("a", "b"))
        words = [("b",), (), ("a", "a"), ("a",), ("a", "b"), ("b", "a")]
        ordered = sorted(words, key=lambda w: length_lex_key(w, a))
        assert ordered == [(), ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "a")]


# ---------------------------------------------------------------------------
# MooreMachine construction and runs
# ---------------------------------------------------------------------------

class TestMachine:
    def test_two_state_runs(self, m1):
        assert ml.run(m1, ()) == ("y1",)
        assert ml.run(m1, ("x1",)) == ("y1", "y1")
        assert ml.run(m1, ("x2", "x1")) == ("y1", "y2", "y1")
        assert ml.run(m1, ("x2", "x2")) == ("y1", "y2", "y2")

    def test_four_state_runs(self, m4):
        assert "".join(ml.run(m4, tuple("baa"))) == "0122"
        assert "".join(ml.run(m4, tuple("aa"))) == "020"
        assert "".join(ml.run(m4, tuple("abba"))) == "02220"

    def test_output_is_one_longer_than_input(self, m4):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(0, 10))
            w = tuple(rng.choice(["a", "b"], size=n))
            assert len(ml.run(m4, w)) == n + 1

    def test_from_tables_validation(self):
        with pytest.raises(ValueError):
            ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 5}])
        with pytest.raises(ValueError):
            ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 0}], initial=3)
        with pytest.raises(ml.AlphabetMismatchError):
            ml.MooreMachine.from_tables(["a"], ["0"], ["7"], [{"a": 0}])

    def test_run_undefined_transition(self):
        m = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": None}])
        assert not m.is_complete
        with pytest.raises(ml.UndefinedTransitionError):
            ml.run(m, ("a",))

    def test_arrays_are_frozen(self, m1):
        with pytest.raises(ValueError):
            m1.delta[0, 0] = 1


# ---------------------------------------------------------------------------
# Completion
# ---------------------------------------------------------------------------

class TestCompletion:
    def test_fills_with_self_loops(self):
        m = ml.MooreMachine.from_tables(
            ["a", "b"], ["0", "1"], ["0", "1"],
            [{"a": 1, "b": None}, {"a": None, "b": None}])
        c = ml.complete_with_self_loops(m)
        assert c.is_complete
        assert c.delta.tolist() == [[1, 0], [1, 1]]
        # defined transitions are untouched
        assert c.delta[0, 0] == m.delta[0, 0]

    def test_noop_when_complete(self, m4):
        assert ml.complete_with_self_loops(m4) is m4

    def test_dfa_completion(self):
        a = ml.Alphabet(("a",))
        d = Dfa(a, np.array([[-1]], dtype=np.int32),
                np.array([int(Mark.ACCEPTING)], dtype=np.int8))
        c = ml.complete_dfa_with_self_loops(d)
        assert c.delta.tolist() == [[0]]
        assert c.marks.tolist() == [int(Mark.ACCEPTING)]


# ---------------------------------------------------------------------------
# Minimization
# ---------------------------------------------------------------------------

class TestMinimize:
    def test_merges_behaviorally_equal_states(self):
        m = ml.MooreMachine.from_tables(
            ["a"], ["0", "1"], ["0", "0", "1"],
            [{"a": 1}, {"a": 0}, {"a": 2}])  # state 2 unreachable
        mm = ml.minimize(m)
        assert mm.n_states == 1
        assert mm.output_symbol(0) == "0"

    def test_already_minimal_is_isomorphic(self, m4):
        assert ml.isomorphic(ml.minimize(m4), m4)

    def test_idempotent(self, m4):
        once = ml.minimize(m4)
        assert ml.isomorphic(ml.minimize(once), once)

    def test_preserves_behavior(self):
        rng = np.random.default_rng(42)
        for _ in range(40):
            m = random_complete_machine(rng, int(rng.integers(1, 6)), 2, 2)
            mm = ml.minimize(m)
            assert mm.n_states <= m.n_states
            assert brute_equivalent(m, mm)
            assert ml.equivalent(m, mm)

    def test_canonical_numbering_is_deterministic(self):
        rng = np.random.default_rng(7)
        m = random_complete_machine(rng, 6, 2, 2)
        a, b = ml.minimize(m), ml.minimize(m)
        assert a.delta.tolist() == b.delta.tolist()
        assert a.outputs.tolist() == b.outputs.tolist()


# ---------------------------------------------------------------------------
# Equivalence and isomorphism
# ---------------------------------------------------------------------------

class TestEquivalence:
    def test_reflexive(self, m1, m4):
        assert ml.equivalent(m1, m1)
        assert ml.equivalent(m4, m4)

    def test_detects_difference(self, m4):
        other = ml.MooreMachine.from_tables(
            ["a", "b"], ["0", "1", "2"], ["0", "1", "2", "2"],
            [{"a": 2, "b": 1}, {"a": 3, "b": 3}, {"a": 0, "b": 3},
             {"a": 2, "b": 3}])  # one transition differs
        assert not ml.equivalent(m4, other)

    def test_output_alphabets_may_differ(self):
        a = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 0}])
        c = ml.MooreMachine.from_tables(["a"], ["0", "9"], ["0"], [{"a": 0}])
        assert ml.equivalent(a, c)

    def test_same_symbols_matter_not_ordinals(self):
        a = ml.MooreMachine.from_tables(["a"], ["0", "1"], ["1"], [{"a": 0}])
        b = ml.MooreMachine.from_tables(["a"], ["1", "0"], ["1"], [{"a": 0}])
        assert ml.equivalent(a, b)

    def test_input_alphabet_mismatch_raises(self):
        a = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 0}])
        b = ml.MooreMachine.from_tables(["b"], ["0"], ["0"], [{"b": 0}])
        with pytest.raises(ml.AlphabetMismatchError):
            ml.equivalent(a, b)

    def test_incomplete_raises(self):
        a = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 0}])
        inc = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": None}])
        with pytest.raises(ml.UndefinedTransitionError):
            ml.equivalent(inc, a)

    def test_agrees_with_brute_force(self):
        rng = np.random.default_rng(3)
        seen_equal = seen_diff = 0
        for _ in range(60):
            x = random_complete_machine(rng, int(rng.integers(1, 5)), 2, 2)
            y = random_complete_machine(rng, int(rng.integers(1, 5)), 2, 2)
            expected = brute_equivalent(x, y)
            assert ml.equivalent(x, y) == expected
            seen_equal += expected
            seen_diff += not expected
        assert seen_diff > 0  # the sample exercised the negative case


class TestIsomorphism:
    def test_permuted_copy(self, m4):
        # renumber states by the permutation (0,1,2,3) -> (3,2,0,1)
        perm = [3, 2, 0, 1]
        inv = [perm.index(q) for q in range(4)]
        shuffled = ml.MooreMachine.from_tables(
            ["a", "b"], ["0", "1", "2"],
            [m4.output_symbol(inv[q]) for q in range(4)],
            [{"a": perm[int(m4.delta[inv[q], 0])],
              "b": perm[int(m4.delta[inv[q], 1])]} for q in range(4)],
            initial=perm[0],
        )
        assert ml.isomorphic(shuffled, m4)
        assert ml.equivalent(shuffled, m4)

    def test_size_mismatch_is_false(self, m1, m4):
        m1b = ml.MooreMachine.from_tables(
            ["a", "b"], ["0", "1", "2"], ["0", "1"],
            [{"a": 1, "b": 0}, {"a": 0, "b": 1}])
        assert not ml.isomorphic(m1b, m4)

    def test_equivalent_but_not_isomorphic(self):
        # same behavior, different transition structure on equal-output states
        a = ml.MooreMachine.from_tables(
            ["a"], ["0"], ["0"], [{"a": 0}])
        b = ml.MooreMachine.from_tables(
            ["a"], ["0"], ["0", "0"], [{"a": 1}, {"a": 0}])
        assert ml.equivalent(a, b)
        assert not ml.isomorphic(a, b)

    def test_unreachable_states_raise(self):
        a = ml.MooreMachine.from_tables(["a"], ["0"], ["0"], [{"a": 0}])
        u = ml.MooreMachine.from_tables(["a"], ["0"], ["0", "0"],
                                        [{"a": 0}, {"a": 0}])
        with pytest.raises(ValueError):
            ml.isomorphic(u, a)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def _dfa(alphabet, delta, marks):
    return Dfa(ml.Alphabet(alphabet),
               np.asarray(delta, dtype=np.int32),
               np.asarray(marks, dtype=np.int8))


class TestProductAligned:
    def test_reads_back_bits(self):
        # shared 3-state skeleton: 0 -a-> 1 -a-> 2
        enc = ml.make_encoding(ml.Alphabet(("0", "1", "2")))
        delta = [[1], [2], [-1]]
        acc, rej = int(Mark.ACCEPTING), int(Mark.REJECTING)
        d_hi = _dfa(("a",), delta, [rej, rej, acc])   # high bit: only state 2
        d_lo = _dfa(("a",), delta, [rej, acc, rej])   # low bit: only state 1
        m = ml.product_aligned([d_hi, d_lo], enc)
        # codes: state0 (0,0)->'0', state1 (0,1)->'1', state2 (1,0)->'2'
        assert [m.output_symbol(q) for q in range(3)] == ["0", "1", "2"]

    def test_skeleton_mismatch_raises(self):
        enc = ml.make_encoding(ml.Alphabet(("0", "1", "2")))
        a = _dfa(("a",), [[0]], [int(Mark.ACCEPTING)])
        b = _dfa(("a",), [[1], [0]], [int(Mark.ACCEPTING)] * 2)
        with pytest.raises(ml.SkeletonMismatchError):
            ml.product_aligned([a, b], enc)

    def test_wrong_dfa_count_raises(self):
        enc = ml.make_encoding(ml.Alphabet(("0", "1", "2")))  # 2 bits
        a = _dfa(("a",), [[0]], [int(Mark.ACCEPTING)])
        with pytest.raises(ValueError):
            ml.product_aligned([a], enc)

    def test_invalid_code_raises(self):
        # |O| = 3 so code (1,1) has no symbol; a state accepting in both bits
        enc = ml.make_encoding(ml.Alphabet(("0", "1", "2")))
        acc = int(Mark.ACCEPTING)
        a = _dfa(("a",), [[0]], [acc])
        b = _dfa(("a",), [[0]], [acc])
        with pytest.raises(ml.InvalidCodeError):
            ml.product_aligned([a, b], enc)


class TestProductGeneral:
    def test_parity_product_with_fallback(self):
        # bit DFAs over {a,b}: high bit = odd number of a's,
        # low bit = odd number of b's; the (1,1) combination has no symbol in
        # a 3-letter output alphabet, so it must map to the first symbol.
        enc = ml.make_encoding(ml.Alphabet(("0", "1", "2")))
        acc, rej = int(Mark.ACCEPTING), int(Mark.REJECTING)
        odd_a = _dfa(("a", "b"), [[1, 0], [0, 1]], [rej, acc])
        odd_b = _dfa(("a", "b"), [[0, 1], [1, 0]], [rej, acc])
        m = ml.product_general([odd_a, odd_b], enc)
        assert m.is_complete
        # ab has odd a's and odd b's -> invalid code (1,1) -> fallback '0'
        assert "".join(ml.run(m, ("a", "b"))) == "020"
        assert "".join(ml.run(m, ("a",))) == "02"
        assert "".join(ml.run(m, ("b",))) == "01"
        # after aba: even a's, odd b's -> code (0,1) -> '1'
        assert "".join(ml.run(m, ("a", "b", "a"))) == "0201"

    def test_requires_complete(self):
        enc = ml.make_encoding(ml.Alphabet(("0", "1")))
        d = _dfa(("a",), [[-1]], [int(Mark.ACCEPTING)])
        with pytest.raises(ml.UndefinedTransitionError):
            ml.product_general([d], enc)

    def test_single_bit_roundtrip(self):
        enc = ml.make_encoding(ml.Alphabet(("n", "y")))
        acc, rej = int(Mark.ACCEPTING), int(Mark.REJECTING)
        d = _dfa(("a",), [[1], [0]], [rej, acc])
        m = ml.product_general([d], enc)
        assert "".join(ml.run(m, ("a", "a", "a"))) == "nyny"
