"""Traces, example unrolling, output encoding, partitioning."""

import math

import pytest

import moorelearn as ml
from moorelearn.traces import partition_examples, traces_to_examples

from conftest import AB, O012, sample_pairs_1, ts_from


class TestMooreTrace:
    def test_length_invariant(self):
        with pytest.raises(ValueError):
            ml.MooreTrace(("a",), ("0",))
        with pytest.raises(ValueError):
            ml.MooreTrace((), ())
        t = ml.MooreTrace((), ("0",))
        assert t.input == () and t.output == ("0",)

    def test_traceset_validates_symbols(self):
        with pytest.raises(ml.AlphabetMismatchError):
            ml.TraceSet([ml.MooreTrace(("z",), ("0", "0"))], AB, O012)
        with pytest.raises(ml.AlphabetMismatchError):
            ml.TraceSet([ml.MooreTrace(("a",), ("0", "9"))], AB, O012)

    def test_traceset_iteration_and_len(self):
        ts = ts_from([("a", "00"), ("b", "01")])
        assert len(ts.traces) == 2
        assert [t.input for t in ts] == [("a",), ("b",)]

    def test_max_input_length(self):
        ts = ts_from(sample_pairs_1())
        assert ts.max_input_length() == 3


class TestUnrolling:
    def test_every_prefix_becomes_an_example(self):
        ts = ts_from([("ab", "012")])
        ex = traces_to_examples(ts)
        assert [(e.input, e.output) for e in ex] == [
            ((), "0"), (("a",), "1"), (("a", "b"), "2")]

    def test_examples_sorted_and_deduplicated(self):
        ts = ts_from([("aa", "000"), ("ab", "001"), ("b", "02")])
        ex = traces_to_examples(ts)
        words = [e.input for e in ex]
        # length-lex order, no duplicates (eps and ("a",) are shared)
        assert words == [(), ("a",), ("b",),
                         ("a", "a"), ("a", "b")]
        assert len(set(words)) == len(words)

    def test_conflicting_prefixes_raise(self):
        # second trace disagrees with the first on the output after 'a'
        with pytest.raises(ml.InconsistentTracesError):
            ts_from([("aa", "000"), ("ab", "011")])

    def test_conflict_mentions_word(self):
        with pytest.raises(ml.InconsistentTracesError, match="'a'"):
            ts_from([("a", "00"), ("a", "01")])


class TestOutputEncoding:
    def test_three_symbols_two_bits(self):
        enc = ml.make_encoding(O012)
        assert enc.bit_count == 2
        assert enc.encode("0") == (0, 0)
        assert enc.encode("1") == (0, 1)
        assert enc.encode("2") == (1, 0)
        assert enc.fallback == "0"

    def test_decode_inverse_and_invalid(self):
        enc = ml.make_encoding(O012)
        for s in O012.symbols:
            assert enc.decode(enc.encode(s)) == s
        assert enc.decode((1, 1)) is None

    def test_single_output_still_one_bit(self):
        enc = ml.make_encoding(ml.Alphabet(("only",)))
        assert enc.bit_count == 1
        assert enc.encode("only") == (0,)
        assert enc.decode((1,)) is None

    def test_power_of_two_sizes(self):
        for n in (2, 4, 8):
            enc = ml.make_encoding(ml.Alphabet(tuple(f"s{i}" for i in range(n))))
            assert enc.bit_count == max(1, math.ceil(math.log2(n)))
            codes = {enc.encode(s) for s in enc.output_alphabet.symbols}
            assert len(codes) == n  # injective

    def test_big_endian_order(self):
        enc = ml.make_encoding(ml.Alphabet(tuple(str(i) for i in range(5))))
        assert enc.bit_count == 3
        assert enc.encode("4") == (1, 0, 0)
        assert enc.encode("3") == (0, 1, 1)


class TestPartition:
    def test_fig_style_partition(self):
        # examples: b -> 0, aa -> 1, ab -> 2 (plus prefixes from the traces)
        enc = ml.make_encoding(O012)
        ts = ts_from([("b", "00"), ("aa", "001"), ("ab", "002")])
        part = partition_examples(traces_to_examples(ts), enc)
        assert part.bit_count == 2
        # bit 0 (high): only output '2' has a 1 -> ab positive
        assert part.positive[0] == frozenset({("a", "b")})
        # bit 1 (low): only output '1' -> aa positive
        assert part.positive[1] == frozenset({("a", "a")})
        # every example word lands in exactly one side of each bit
        all_words = {e.input for e in traces_to_examples(ts)}
        for i in range(2):
            assert part.positive[i] | part.negative[i] == all_words
            assert not (part.positive[i] & part.negative[i])

    def test_partition_counts(self):
        enc = ml.make_encoding(O012)
        ts = ts_from(sample_pairs_1())
        ex = traces_to_examples(ts)
        part = partition_examples(ex, enc)
        n = len(ex)
        for i in range(part.bit_count):
            assert len(part.positive[i]) + len(part.negative[i]) == n
