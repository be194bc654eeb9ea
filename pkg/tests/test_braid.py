"""Braid words: parsing, free reduction, and the strand homomorphisms."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidcong.braid import (
    BraidWord,
    conjugate_word,
    fold_to_three_strands,
    include,
)
from braidcong.burau import LatticeVector, apply_word, integral_burau, transvection


def random_word(rng, n, length):
    return BraidWord.from_ints(
        n, [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    )


word_strategy = st.integers(min_value=3, max_value=6).flatmap(
    lambda n: st.lists(
        st.integers(min_value=1, max_value=n - 1).flatmap(
            lambda i: st.sampled_from([i, -i])
        ),
        max_size=20,
    ).map(lambda letters: BraidWord.from_ints(n, letters))
)


class TestParsing:
    def test_parse_and_str_roundtrip(self):
        w = BraidWord.parse("4: 1 2 -3 1")
        assert str(w) == "4: 1 2 -3 1"
        assert w.strands == 4

    def test_bare_letters_need_strands(self):
        assert BraidWord.parse("1 -2", strands=3).signed_ints() == [1, -2]
        with pytest.raises(ValueError):
            BraidWord.parse("1 -2")

    def test_strand_conflict(self):
        with pytest.raises(ValueError):
            BraidWord.parse("4: 1", strands=3)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            BraidWord.from_ints(3, [3])

    def test_empty_word(self):
        w = BraidWord.parse("5:")
        assert len(w) == 0 and str(w) == "5:"

    def test_pretty_compresses_runs(self):
        w = BraidWord.from_ints(3, [1, 1, 1, -2])
        assert w.pretty() == "s1^3 s2^-1"


class TestFreeReduction:
    def test_adjacent_inverse_pair(self):
        assert BraidWord.parse("3: 1 -1").free_reduce() == BraidWord(3)

    def test_nested_cancellation(self):
        w = BraidWord.parse("3: 1 2 -2 1").free_reduce()
        assert w.signed_ints() == [1, 1]

    @given(word_strategy)
    @settings(max_examples=100, deadline=None)
    def test_word_times_inverse_reduces_to_empty(self, w):
        assert (w * w.inverse()).free_reduce() == BraidWord(w.strands)

    @given(word_strategy)
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, w):
        r = w.free_reduce()
        assert r.free_reduce() == r

    def test_representation_invariance(self):
        rng = random.Random(0)
        for _ in range(30):
            w = random_word(rng, 4, 15)
            assert integral_burau(w.free_reduce()) == integral_burau(w)


class TestConjugation:
    def test_conjugate_by_empty(self):
        h = BraidWord.parse("3: 1 2")
        assert conjugate_word(BraidWord(3), h) == h

    def test_literal_concatenation(self):
        g = BraidWord.parse("3: 2")
        h = BraidWord.parse("3: 1")
        assert conjugate_word(g, h).signed_ints() == [2, 1, -2]

    def test_strand_mismatch(self):
        with pytest.raises(ValueError):
            conjugate_word(BraidWord(3), BraidWord(4))

    def test_matrix_conjugation_identity(self):
        # rho(g h g^-1) with h a generator power is a transvection power
        # along the moved vector
        rng = random.Random(1)
        for n in (3, 4, 5):
            c1 = LatticeVector.c(n, 1)
            for m in (1, 2, 3):
                g = random_word(rng, n, 10)
                w = conjugate_word(g, BraidWord.generator(n, 1) ** m)
                expected = (
                    integral_burau(g)
                    * transvection(c1) ** m
                    * integral_burau(g.inverse())
                )
                assert integral_burau(w) == expected


class TestFoldToThreeStrands:
    def test_generator_images(self):
        assert fold_to_three_strands(BraidWord.parse("4: 3")).signed_ints() == [1]
        assert fold_to_three_strands(BraidWord.parse("4: 2")).signed_ints() == [2]

    def test_collapses_mixed_pair(self):
        assert fold_to_three_strands(BraidWord.parse("4: 1 -3")) == BraidWord(3)

    def test_wrong_strand_count(self):
        with pytest.raises(ValueError):
            fold_to_three_strands(BraidWord.parse("3: 1"))

    def test_section_property(self):
        # including a 3-strand word into 4 strands and folding back is the identity
        rng = random.Random(2)
        for _ in range(50):
            w = random_word(rng, 3, rng.randint(0, 12))
            assert fold_to_three_strands(include(w, 4)) == w.free_reduce()


class TestInclude:
    def test_reinterprets_letters(self):
        w = include(BraidWord.parse("2: 1"), 4)
        assert w.strands == 4 and w.signed_ints() == [1]

    def test_rejects_shrinking(self):
        with pytest.raises(ValueError):
            include(BraidWord.parse("4: 1"), 3)

    def test_block_structure(self):
        rng = random.Random(3)
        for _ in range(20):
            w = random_word(rng, 2, rng.randint(1, 8))
            big = integral_burau(include(w, 4))
            small = integral_burau(w)
            for i in range(2):
                for j in range(2):
                    assert big.rows[i][j] == small.rows[i][j]
            assert all(big.rows[i][j] == (1 if i == j else 0)
                       for i in range(4) for j in range(4)
                       if i >= 2 or j >= 2)

    def test_concatenation_homomorphism(self):
        rng = random.Random(4)
        for _ in range(20):
            a = random_word(rng, 3, 5)
            b = random_word(rng, 3, 5)
            assert include(a * b, 5) == include(a, 5) * include(b, 5)


class TestWordAction:
    def test_apply_matches_matrix(self):
        rng = random.Random(5)
        for n in (3, 5):
            for _ in range(25):
                w = random_word(rng, n, 12)
                v = LatticeVector(tuple(rng.randint(-5, 5) for _ in range(n)))
                assert apply_word(w, v).coords == integral_burau(w).apply(v.coords)
