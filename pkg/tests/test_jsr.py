import numpy as np
import pytest
from math import comb

from osrkit import (
    DomainError,
    MatrixTuple,
    ResourceBudgetError,
    jsr_bracket_kron,
    jsr_bracket_osr,
    jsr_bracket_sym,
    jsr_bracket_words,
    kron_power_tuple,
    perm_commutation_check,
    perm_top_eigenvector_sign,
    sum_sym_lift,
    sym_lift,
)

from conftest import E12, E21, random_tuple, shift_pair


class TestWordsBracket:
    def test_shift_pair(self):
        b = jsr_bracket_words(shift_pair(), 2)
        assert np.isclose(b.lower, 2.0)
        assert np.isclose(b.upper, 2.0)

    def test_single_diagonal(self):
        b = jsr_bracket_words(MatrixTuple((np.diag([0.5, -2.0]),)), 3)
        assert np.isclose(b.lower, 2.0)
        assert np.isclose(b.upper, 2.0)

    def test_identity_pair(self):
        b = jsr_bracket_words(MatrixTuple((np.eye(2), np.eye(2))), 3)
        assert np.isclose(b.lower, 1.0)
        assert np.isclose(b.upper, 1.0)

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            jsr_bracket_words(shift_pair(), 8, budget=100)


class TestOsrBracket:
    def test_scalars(self):
        b = jsr_bracket_osr(MatrixTuple((np.eye(1), np.eye(1))))
        assert np.isclose(b.lower, 1.0)
        assert np.isclose(b.upper, np.sqrt(2))

    def test_shift_pair(self):
        b = jsr_bracket_osr(shift_pair())
        assert np.isclose(b.lower, np.sqrt(2))
        assert np.isclose(b.upper, 2.0)

    def test_single_matrix_collapses(self):
        m = np.array([[0.3, 1.0], [0.0, -0.8]])
        b = jsr_bracket_osr(MatrixTuple((m,)))
        assert np.isclose(b.lower, b.upper)
        assert np.isclose(b.upper, 0.8)


class TestKronPower:
    def test_k1_is_input(self):
        x = shift_pair()
        assert all(np.array_equal(a, b) for a, b in zip(kron_power_tuple(x, 1), x))

    def test_single_entry(self):
        lifted = kron_power_tuple(MatrixTuple((E12,)), 2)
        expected = np.zeros((4, 4))
        expected[0, 3] = 1.0
        assert np.array_equal(lifted[0], expected)

    def test_diagonal_structure(self):
        x = MatrixTuple((np.diag([2.0, 3.0]),))
        lifted = kron_power_tuple(x, 2)[0]
        assert np.allclose(lifted, np.diag([4.0, 6.0, 6.0, 9.0]))

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            kron_power_tuple(random_tuple(np.random.default_rng(0), 4, 1), 7)


class TestKronBracket:
    def test_scalars_k3(self):
        x = MatrixTuple((np.eye(1), np.eye(1)))
        b = jsr_bracket_kron(x, 3)
        assert np.isclose(b.upper, 2.0 ** (1.0 / 6.0))
        assert np.isclose(b.lower, 1.0)

    def test_shift_pair_k2(self):
        b = jsr_bracket_kron(shift_pair(), 2)
        assert np.isclose(b.upper, 2.0)
        assert np.isclose(b.lower, 2.0 / 2.0 ** 0.25)

    def test_k1_matches_osr(self):
        rng = np.random.default_rng(1)
        x = random_tuple(rng, 2, 2)
        b1 = jsr_bracket_kron(x, 1)
        b0 = jsr_bracket_osr(x)
        assert np.isclose(b1.lower, b0.lower) and np.isclose(b1.upper, b0.upper)

    def test_upper_bounds_tighten_even_k(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            x = random_tuple(rng, 2, 2, real=True)
            uppers = [jsr_bracket_kron(x, k).upper for k in (1, 2, 4)]
            assert uppers[1] <= uppers[0] + 1e-9
            assert uppers[2] <= uppers[1] + 1e-9


class TestSymLift:
    def test_diagonal(self):
        lift = sym_lift(np.diag([2.0, 3.0]), 2)
        assert lift.basis == ((2, 0), (1, 1), (0, 2))
        assert np.allclose(lift.mat, np.diag([4.0, 6.0, 9.0]))

    def test_shift_pair_degree_2(self):
        lift = sum_sym_lift(shift_pair(), 2)
        vals = np.sort_complex(np.linalg.eigvals(lift.mat))
        assert np.allclose(vals, [-4.0, 0.0, 4.0])

    def test_identity(self):
        lift = sym_lift(np.eye(3), 4)
        assert np.allclose(lift.mat, np.eye(comb(6, 2)))

    def test_dimension_formula(self):
        for n, k in ((2, 2), (3, 4), (4, 3)):
            lift = sym_lift(np.eye(n), k)
            assert lift.dim == comb(n + k - 1, n - 1)

    def test_complex_flagged(self):
        lift = sym_lift(np.eye(2) * 1j, 2)
        assert not lift.real_input
        real_lift = sym_lift(np.eye(2), 2)
        assert real_lift.real_input

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            sym_lift(np.eye(4), 40)


class TestSymBracket:
    def test_shift_pair_exact(self):
        b = jsr_bracket_sym(shift_pair(), 1)
        assert abs(b.upper - 2.0) <= 1e-10

    def test_single_diagonal(self):
        for k in (1, 2):
            b = jsr_bracket_sym(MatrixTuple((np.diag([0.25, -0.5]),)), k)
            assert np.isclose(b.upper, 0.5)

    def test_refines_kron(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            x = random_tuple(rng, 2, 2, real=True)
            for k in (1, 2, 3):
                assert (
                    jsr_bracket_sym(x, k).upper
                    <= jsr_bracket_kron(x, k).upper + 1e-9
                )


class TestSandwich:
    def test_brackets_intersect(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            x = random_tuple(rng, rng.integers(2, 4), rng.integers(2, 4), real=True)
            words = jsr_bracket_words(x, 8)
            for k in (1, 2, 3):
                kb = jsr_bracket_kron(x, k)
                assert words.lower - 1e-9 <= kb.upper
                assert kb.lower <= words.upper + 1e-9


class TestPermCommutation:
    def test_identity_sigma(self):
        rng = np.random.default_rng(5)
        x = random_tuple(rng, 2, 2)
        assert perm_commutation_check(x, 2, (0, 1))

    def test_swap(self):
        rng = np.random.default_rng(6)
        x = random_tuple(rng, 2, 2)
        assert perm_commutation_check(x, 2, (1, 0))

    def test_three_cycle(self):
        rng = np.random.default_rng(7)
        x = random_tuple(rng, 2, 3)
        assert perm_commutation_check(x, 3, (1, 2, 0))

    def test_rejects_non_permutation(self):
        with pytest.raises(DomainError):
            perm_commutation_check(shift_pair(), 2, (0, 0))

    def test_top_eigenvector_sign_recorded(self):
        # observed-only quantity: sign under the factor swap, never asserted
        # to be +1 in general; for these seeds the top eigenvector should be
        # a swap eigenvector whenever the top eigenvalue is simple and real
        rng = np.random.default_rng(8)
        for _ in range(5):
            x = random_tuple(rng, 2, 2, real=True)
            sign = perm_top_eigenvector_sign(x, 2, (1, 0))
            assert sign in (1, -1, None)
