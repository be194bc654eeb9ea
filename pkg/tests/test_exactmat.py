"""Exact arithmetic: Laurent polynomials and the three matrix families."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidcong.errors import NotUnimodular
from braidcong.exactmat import (
    LaurentPoly,
    MatL,
    MatMod,
    MatZ,
    format_matrix,
    parse_matrix,
)

small_poly = st.dictionaries(
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-9, max_value=9),
    max_size=5,
).map(LaurentPoly)


def schoolbook(a, b):
    """Independent reference product used as the multiplication oracle."""
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


class TestLaurentPoly:
    def test_zero_coefficients_stripped(self):
        p = LaurentPoly({0: 1, 2: 0, -3: 0})
        assert p.coeffs() == {0: 1}

    def test_str(self):
        p = LaurentPoly({0: 1, 1: -1})
        assert str(p) == "1 - t"

    @given(small_poly, small_poly, small_poly)
    @settings(max_examples=100, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a

    @given(small_poly)
    @settings(max_examples=50, deadline=None)
    def test_eval_is_ring_hom_at_minus_one(self, a):
        b = LaurentPoly({1: 2, -1: 3})
        assert (a * b).eval_at(-1) == a.eval_at(-1) * b.eval_at(-1)
        assert (a + b).eval_at(-1) == a.eval_at(-1) + b.eval_at(-1)

    def test_eval_requires_unit(self):
        with pytest.raises(ValueError):
            LaurentPoly({-1: 1}).eval_at(2)


class TestMatZ:
    def test_hand_product(self):
        a = MatZ([[1, 1], [0, 1]])
        b = MatZ([[1, 0], [-1, 1]])
        assert (a * b).rows == ((0, 1), (-1, 1))
        assert (a * b).rows == tuple(map(tuple, schoolbook(a.rows, b.rows)))

    def test_identity_product(self):
        i = MatZ.identity(3)
        assert i * i == i

    def test_random_products_match_schoolbook(self):
        rng = random.Random(0)
        for _ in range(25):
            n = rng.randint(1, 5)
            a = MatZ([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
            b = MatZ([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
            assert (a * b).rows == tuple(map(tuple, schoolbook(a.rows, b.rows)))

    def test_inverse_elementary(self):
        assert MatZ([[1, 1], [0, 1]]).inverse() == MatZ([[1, -1], [0, 1]])
        assert MatZ.identity(4).inverse() == MatZ.identity(4)

    def test_inverse_roundtrip_on_transvection_products(self):
        from braidcong.burau import LatticeVector, transvection

        rng = random.Random(1)
        for _ in range(10):
            m = MatZ.identity(4)
            for _ in range(20):
                coords = [rng.randint(-2, 2) for _ in range(3)]
                m = m * transvection(LatticeVector.from_c_coords(4, coords))
            assert (m * m.inverse()).is_identity()

    def test_inverse_rejects_non_unimodular(self):
        with pytest.raises(NotUnimodular):
            MatZ([[2, 0], [0, 1]]).inverse()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            MatZ.identity(2) * MatZ.identity(3)

    def test_pow_negative(self):
        a = MatZ([[1, 1], [0, 1]])
        assert a**-2 == MatZ([[1, -2], [0, 1]])


class TestMatMod:
    def test_nilpotent_square(self):
        a = MatMod(4, [[1, 2], [0, 1]])
        assert (a * a).is_identity()

    def test_parity_reduction(self):
        assert MatZ([[2, 1], [-1, 0]]).reduce_mod(2) == MatMod(2, [[0, 1], [1, 0]])

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            MatMod.identity(2, 3) * MatMod.identity(2, 5)

    def test_reduce_is_ring_hom(self):
        rng = random.Random(2)
        for ell in (2, 3, 5, 6):
            for _ in range(20):
                a = MatZ([[rng.randint(-20, 20) for _ in range(3)] for _ in range(3)])
                b = MatZ([[rng.randint(-20, 20) for _ in range(3)] for _ in range(3)])
                assert (a * b).reduce_mod(ell) == a.reduce_mod(ell) * b.reduce_mod(ell)

    def test_encoding_injective_exhaustively(self):
        for ell in (2, 3):
            seen = {}
            for flat in range(ell**4):
                vals = [(flat // ell**k) % ell for k in range(4)]
                m = MatMod(ell, [vals[:2], vals[2:]])
                enc = m.encode()
                assert enc not in seen or seen[enc] == m
                seen[enc] = m
            assert len(seen) == ell**4

    def test_encode_decode_roundtrip(self):
        rng = random.Random(3)
        for ell in (2, 251, 257, 65521):
            m = MatMod(ell, [[rng.randrange(ell) for _ in range(3)] for _ in range(3)])
            assert MatMod.decode(m.encode(), 3, ell) == m

    def test_inverse(self):
        a = MatMod(6, [[1, 1], [0, 1]])
        assert (a * a.inverse()).is_identity()
        with pytest.raises(ValueError):
            MatMod(4, [[2, 0], [0, 1]]).inverse()

    def test_modulus_bounds(self):
        with pytest.raises(ValueError):
            MatMod(1, [[0]])
        with pytest.raises(ValueError):
            MatMod(70000, [[0]])


class TestMatL:
    def test_eval_of_generator_block(self):
        t = LaurentPoly.t()
        m = MatL([[1 - t, 1], [t, 0]])
        assert m.eval_at(-1) == MatZ([[2, 1], [-1, 0]])

    def test_constant_matrix_evaluates_to_itself(self):
        m = MatL([[3, 0], [1, 2]])
        assert m.eval_at(-1) == MatZ([[3, 0], [1, 2]])

    def test_t_times_identity(self):
        t = LaurentPoly.t()
        m = MatL([[t, 0], [0, t]])
        assert m.eval_at(-1) == MatZ([[-1, 0], [0, -1]])

    def test_eval_is_multiplicative(self):
        rng = random.Random(4)
        for _ in range(15):
            def rnd():
                return LaurentPoly(
                    {rng.randint(-2, 2): rng.randint(-3, 3) for _ in range(2)}
                )

            a = MatL([[rnd() for _ in range(2)] for _ in range(2)])
            b = MatL([[rnd() for _ in range(2)] for _ in range(2)])
            assert (a * b).eval_at(-1) == a.eval_at(-1) * b.eval_at(-1)


class TestTextFormat:
    def test_roundtrip_integer(self):
        m = MatZ([[1, -2], [3, 4]])
        assert parse_matrix(format_matrix(m)) == m

    def test_roundtrip_modular(self):
        m = MatMod(7, [[1, 2], [3, 4]])
        assert parse_matrix(format_matrix(m)) == m

    def test_header_zero_means_integers(self):
        m = parse_matrix("2 0\n1 2\n3 4\n")
        assert isinstance(m, MatZ)

    def test_malformed(self):
        with pytest.raises(ValueError):
            parse_matrix("2 0\n1 2\n")


class TestExactness:
    def test_floats_rejected_everywhere(self):
        # silent float truncation would undermine every exactness guarantee
        with pytest.raises(TypeError):
            MatZ([[1.5, 0], [0, 1]])
        with pytest.raises(TypeError):
            MatMod(4, [[0.5, 0], [0, 1]])
        with pytest.raises(TypeError):
            LaurentPoly({0: 1.5})
