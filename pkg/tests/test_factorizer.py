"""The certificate engine: reductions, orbit search, assembly, verification."""

import random

import pytest

from braidcong.braid import BraidWord
from braidcong.burau import (
    LatticeVector,
    apply_word,
    form,
    pairing_with_c,
    transvection,
    transvection_power,
)
from braidcong.factorizer import (
    Factor,
    FactorCertificate,
    SearchStats,
    _Engine,
    euclidean_reduce,
    factor_power,
    orbit_to_target,
    step_three_normalize,
    step_two_factors,
    verify_certificate,
)


def rand_word(rng, n, length):
    return BraidWord.from_ints(
        n, [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    )


def rand_zero_sum(rng, n, bound=5):
    return LatticeVector.from_c_coords(
        n, [rng.randint(-bound, bound) for _ in range(n - 1)]
    )


class TestEuclideanReduce:
    def test_already_reduced(self):
        x = LatticeVector.c(4, 3)
        word, x2 = euclidean_reduce(4, x)
        assert x2 == x and len(word) == 0

    def test_clears_coordinate(self):
        x = LatticeVector.from_c_coords(4, [0, 1, 0])
        word, x2 = euclidean_reduce(4, x)
        lam = x2.c_coords()
        assert lam[1] == 0
        assert apply_word(word, x) == x2
        # the two tracked entries end at (+-gcd, 0)
        assert abs(lam[0] - lam[2]) == 1

    def test_random_inputs(self):
        rng = random.Random(0)
        for n in (3, 4, 5, 6):
            for _ in range(200):
                x = rand_zero_sum(rng, n)
                word, x2 = euclidean_reduce(n, x)
                assert apply_word(word, x) == x2
                assert x2.c_coords()[n - 3] == 0
                # word only uses the last two generators
                assert all(i in (n - 2, n - 1) for i, _ in word.letters)

    def test_gcd_preserved(self):
        rng = random.Random(1)
        for _ in range(100):
            x = rand_zero_sum(rng, 5)
            lam = x.c_coords()
            p, q = lam[1] - lam[3], lam[2]
            word, x2 = euclidean_reduce(5, x)
            lam2 = x2.c_coords()
            import math

            assert abs(lam2[1] - lam2[3]) == math.gcd(p, q)


class TestOrbitSearch:
    def test_trivial_target(self):
        assert orbit_to_target(4, LatticeVector.c(4, 3)) == BraidWord(4)

    def test_negated_target_uses_flip(self):
        g = orbit_to_target(4, -LatticeVector.c(4, 3))
        assert apply_word(g, -LatticeVector.c(4, 3)) == LatticeVector.c(4, 3)

    def test_small_feasible_instance(self):
        y = LatticeVector.from_c_coords(4, [2, 0, 1])
        g = orbit_to_target(4, y)
        assert apply_word(g, y) == LatticeVector.c(4, 3)

    def test_inverse_orbit_instances(self):
        rng = random.Random(2)
        stats = SearchStats()
        for n in (4, 5, 6):
            target = LatticeVector.c(n, n - 1)
            for _ in range(100):
                g0 = rand_word(rng, n, 12)
                y = apply_word(g0, target)
                g = orbit_to_target(n, y, stats=stats)
                assert apply_word(g, y) == target
        assert stats.searches == 300

    def test_rejects_imprimitive_pairings(self):
        with pytest.raises(ValueError):
            orbit_to_target(4, LatticeVector.from_c_coords(4, [2, 0, 2]))

    def test_rejects_nonzero_sum(self):
        with pytest.raises(ValueError):
            orbit_to_target(4, LatticeVector.e(4, 1))


class TestStepTwo:
    def test_shift_orthogonal_and_parity(self):
        rng = random.Random(3)
        engine = _Engine(m=2)
        for n in (3, 4, 5):
            for _ in range(50):
                lam = [rng.randint(-4, 4) for _ in range(n - 1)]
                lam[n - 3] = 0
                x = LatticeVector.from_c_coords(n, lam)
                sign = rng.choice([1, -1])
                x_next, (f1, f2) = step_two_factors(engine, n, x, sign)
                y = x_next - x
                assert form(x, y) == 0
                # the moved candidate pairs with the bridging vector by -sign
                v = x + x_next
                assert pairing_with_c(v, n - 2) == -sign
                diff = v - LatticeVector.c(n, n - 1)
                assert all(c % 2 == 0 for c in diff.coords)
                assert diff.coord_sum() == 0

    def test_four_matrix_identity(self):
        engine = _Engine(m=3)
        x = LatticeVector.from_c_coords(4, [1, 0, 0])
        x_next, (f1, f2) = step_two_factors(engine, 4, x, 1)
        lhs = transvection_power(x, 6) * transvection_power(x_next, 6)
        assert lhs == f1.matrix() * f2.matrix()

    def test_commuting_transvection_identity_standalone(self):
        # the underlying identity holds for every orthogonal pair
        rng = random.Random(4)
        for _ in range(40):
            n = rng.randint(3, 5)
            x = rand_zero_sum(rng, n, 3)
            y = rand_zero_sum(rng, n, 3)
            if form(x, y) != 0:
                continue
            two_x_y = x + x + y
            lhs = transvection(x) ** 2 * transvection(x + y) ** 2
            rhs = transvection(two_x_y) * transvection(y)
            assert lhs == rhs

    def test_printed_example(self):
        # n=4, m=1, x = c1: the shift is 3 c3 and the identity is checked
        # as exact 4x4 integer matrices
        engine = _Engine(m=1)
        x = LatticeVector.from_c_coords(4, [1, 0, 0])
        x_next, _ = step_two_factors(engine, 4, x, 1)
        assert x_next == LatticeVector.from_c_coords(4, [1, 0, 3])
        lhs = transvection(x) ** 2 * transvection(x_next) ** 2
        rhs = transvection(x + x_next) * transvection(x_next - x)
        assert lhs == rhs

    def test_requires_cleared_coordinate(self):
        engine = _Engine(m=1)
        with pytest.raises(ValueError):
            step_two_factors(engine, 4, LatticeVector.from_c_coords(4, [0, 1, 0]), 1)


class TestStepThree:
    def test_clears_last_coordinate(self):
        rng = random.Random(5)
        engine = _Engine(m=2)
        for n in (3, 4, 5):
            for _ in range(50):
                lam = [rng.randint(-5, 5) for _ in range(n - 1)]
                lam[n - 3] = 0
                x = LatticeVector.from_c_coords(n, lam)
                x2, moves = step_three_normalize(engine, n, x)
                lam2 = x2.c_coords()
                assert lam2[n - 3] == 0 and lam2[n - 2] == 0

    def test_move_count_bound(self):
        # an odd coordinate takes one parity move, then one pair per two units
        engine = _Engine(m=1)
        x = LatticeVector.from_c_coords(4, [1, 0, 5])
        x2, moves = step_three_normalize(engine, 4, x)
        assert x2.c_coords()[2] == 0
        assert len(moves) <= 1 + 2 * 5

    def test_already_zero(self):
        engine = _Engine(m=1)
        x = LatticeVector.from_c_coords(4, [3, 0, 0])
        x2, moves = step_three_normalize(engine, 4, x)
        assert x2 == x and moves == []


class TestFactorPower:
    def test_zero_vector(self):
        cert = factor_power(4, 2, LatticeVector.zero(4))
        assert cert.factors == ()
        assert verify_certificate(cert).ok

    def test_two_strand_base_case(self):
        cert = factor_power(2, 3, LatticeVector.from_c_coords(2, [2]))
        assert len(cert.factors) == 1
        assert cert.factors[0].exponent == 24  # 2 * k^2 * m with k = 2

    def test_every_combination_verifies(self):
        rng = random.Random(6)
        for n in (2, 3, 4, 5, 6):
            for m in (1, 2, 3):
                for _ in range(10):
                    x = rand_zero_sum(rng, n)
                    cert = factor_power(n, m, x)
                    assert verify_certificate(cert).ok
                    assert all(
                        f.exponent and f.exponent % m == 0 for f in cert.factors
                    )

    def test_deterministic_given_seed(self):
        x = LatticeVector.from_c_coords(5, [2, -1, 3, 0])
        a = factor_power(5, 2, x, seed=0)
        b = factor_power(5, 2, x, seed=0)
        assert a == b

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            factor_power(4, 0, LatticeVector.zero(4))
        with pytest.raises(ValueError):
            factor_power(4, 1, LatticeVector.e(4, 1))  # not zero-sum
        with pytest.raises(ValueError):
            factor_power(3, 1, LatticeVector.zero(4))


class TestVerifyCertificate:
    def test_empty_certificate_for_zero(self):
        cert = FactorCertificate(4, 2, LatticeVector.zero(4), ())
        assert verify_certificate(cert).ok

    def test_tampered_exponent_multiplicity(self):
        cert = factor_power(4, 2, LatticeVector.from_c_coords(4, [1, 0, 3]))
        bad = FactorCertificate(
            cert.n,
            cert.m,
            cert.x,
            (Factor(cert.factors[0].witness, cert.factors[0].exponent + 1),)
            + cert.factors[1:],
        )
        res = verify_certificate(bad)
        assert not res.ok and "not a multiple" in res.reason

    def test_tampered_exponent_same_class(self):
        # adding a full multiple of m keeps multiplicity but breaks the product
        cert = factor_power(4, 2, LatticeVector.from_c_coords(4, [1, 0, 3]))
        bad = FactorCertificate(
            cert.n,
            cert.m,
            cert.x,
            (Factor(cert.factors[0].witness, cert.factors[0].exponent + cert.m * 2),)
            + cert.factors[1:],
        )
        res = verify_certificate(bad)
        assert not res.ok and "product" in res.reason

    def test_tampered_witness(self):
        cert = factor_power(4, 1, LatticeVector.from_c_coords(4, [0, 0, 2]))
        assert cert.factors
        bad_witness = (BraidWord.parse("4: 2") * cert.factors[0].witness).free_reduce()
        bad = FactorCertificate(
            cert.n,
            cert.m,
            cert.x,
            (Factor(bad_witness, cert.factors[0].exponent),) + cert.factors[1:],
        )
        assert not verify_certificate(bad).ok

    def test_zero_exponent_rejected(self):
        cert = FactorCertificate(
            3, 1, LatticeVector.zero(3), (Factor(BraidWord(3), 0),)
        )
        res = verify_certificate(cert)
        assert not res.ok and "zero exponent" in res.reason


class TestSerialization:
    def test_roundtrip(self):
        cert = factor_power(4, 2, LatticeVector.from_c_coords(4, [1, -2, 3]))
        parsed = FactorCertificate.parse(cert.serialize())
        assert parsed == cert
        assert verify_certificate(parsed).ok

    def test_empty_factor_list(self):
        cert = factor_power(3, 1, LatticeVector.zero(3))
        parsed = FactorCertificate.parse(cert.serialize())
        assert parsed == cert

    def test_malformed(self):
        with pytest.raises(ValueError):
            FactorCertificate.parse("")
        with pytest.raises(ValueError):
            FactorCertificate.parse("4 2\n")


class TestCrossModuleShadow:
    def test_factors_stay_in_power_closure(self):
        from braidcong.burau import integral_burau
        from braidcong.finquot import braid_image, normal_closure

        rng = random.Random(7)
        n, m = 4, 2
        ell = 2 * m
        ambient = braid_image(n, ell)
        seed = integral_burau(BraidWord.generator(n, 1) ** m).reduce_mod(ell)
        closure = normal_closure(ambient, [seed]).encodings()
        for _ in range(20):
            x = rand_zero_sum(rng, n)
            cert = factor_power(n, m, x)
            acc = None
            for f in cert.factors:
                img = f.matrix_mod(ell)
                assert img.encode() in closure
                acc = img if acc is None else acc * img
            if acc is not None:
                assert acc.is_identity()


class TestBudgets:
    def test_orbit_budget_fails_loudly(self):
        from braidcong.errors import SearchBudgetExceeded

        y = apply_word(
            BraidWord.parse("5: 1 2 3 4 1 2 3 4 -1 -2"), LatticeVector.c(5, 4)
        )
        with pytest.raises(SearchBudgetExceeded):
            orbit_to_target(5, y, node_budget=2)

    def test_factor_power_propagates_search_budget(self):
        from braidcong.errors import SearchBudgetExceeded

        with pytest.raises(SearchBudgetExceeded):
            factor_power(5, 2, LatticeVector.from_c_coords(5, [3, 2, 0, 4]),
                         node_budget=1)

    def test_deep_coordinates_terminate(self):
        # large last coordinate: many L-move pairs, still exact and verified
        cert = factor_power(4, 1, LatticeVector.from_c_coords(4, [0, 0, 20]))
        assert verify_certificate(cert).ok


class TestGeneralization:
    def test_higher_strand_counts(self):
        # the construction is uniform in n; spot check beyond the suite range
        rng = random.Random(8)
        for n in (7, 8):
            for _ in range(3):
                x = rand_zero_sum(rng, n, 3)
                assert verify_certificate(factor_power(n, 2, x)).ok

    def test_large_coordinates(self):
        rng = random.Random(9)
        for _ in range(3):
            x = rand_zero_sum(rng, 5, 50)
            assert verify_certificate(factor_power(5, 3, x)).ok
