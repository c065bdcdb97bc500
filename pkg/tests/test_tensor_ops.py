import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osrkit import DimensionError, Superoperator, kron, psi, ptrace_q, unvec, vec

from conftest import E12, random_matrix, random_psd


def basis_matrix(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_scalar(self):
        assert np.allclose(kron([[2.0]], [[3.5]]), [[7.0]])

    def test_single_entry(self):
        # 2E12 (x) 2E12 has its only entry, 4, at row 1, column 4 (1-based)
        k = kron(2 * E12, 2 * E12)
        expected = np.zeros((4, 4))
        expected[0, 3] = 4.0
        assert np.array_equal(k, expected)


class TestVec:
    def test_column_stacking_basis(self):
        # vec E_{1,2} = e_3 for n = 2
        assert np.array_equal(vec(E12), np.array([0, 0, 1, 0], dtype=complex))

    def test_identity(self):
        assert np.array_equal(vec(np.eye(2)), np.array([1, 0, 0, 1], dtype=complex))

    def test_columns_first(self):
        assert np.array_equal(
            vec(np.array([[1.0, 2.0], [3.0, 4.0]])),
            np.array([1, 3, 2, 4], dtype=complex),
        )


class TestUnvec:
    def test_identity(self):
        assert np.array_equal(unvec([1, 0, 0, 1], 2), np.eye(2))

    def test_basis(self):
        assert np.array_equal(unvec([0, 0, 1, 0], 2), E12)

    def test_bad_length(self):
        with pytest.raises(DimensionError):
            unvec([1, 0, 0], 2)

    @given(st.integers(min_value=1, max_value=5), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, n, seed):
        m = random_matrix(np.random.default_rng(seed), n)
        assert np.array_equal(unvec(vec(m), n), m)


class TestPsi:
    def test_fixed_point(self):
        e = np.zeros((4, 4), dtype=complex)
        e[0, 0] = 1.0
        assert np.array_equal(psi(e), e)

    def test_single_entry(self):
        # psi(4 E_{1,4}) = 4 E_{3,3} (1-based indices, n = 2)
        e = np.zeros((4, 4), dtype=complex)
        e[0, 3] = 4.0
        expected = np.zeros((4, 4), dtype=complex)
        expected[2, 2] = 4.0
        assert np.array_equal(psi(e), expected)
        # cross-check against the outer-product form for X = 2E12
        assert np.allclose(psi(kron(np.conj(2 * E12), 2 * E12)),
                           np.outer(vec(2 * E12), np.conj(vec(2 * E12))))

    def test_identity_to_rank_one(self):
        v = vec(np.eye(2))
        assert np.allclose(psi(np.eye(4)), np.outer(v, v.conj()))

    @given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_involution_exact(self, n, seed):
        e = random_matrix(np.random.default_rng(seed), n * n)
        assert np.array_equal(psi(psi(e)), e)

    @given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_outer_product_law(self, n, seed):
        rng = np.random.default_rng(seed)
        a = random_matrix(rng, n)
        b = random_matrix(rng, n)
        assert np.allclose(psi(kron(np.conj(a), b)),
                           np.outer(vec(b), np.conj(vec(a))), atol=1e-12)

    def test_four_modularity(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = rng.integers(2, 4)
            a, b, c, d = (random_matrix(rng, n) for _ in range(4))
            e = random_matrix(rng, n * n)
            lhs = kron(np.conj(a), b) @ psi(e) @ kron(c, d.conj().T)
            rhs = psi(kron(np.conj(d), b) @ e @ kron(c, a.conj().T))
            assert np.linalg.norm(lhs - rhs, "fro") <= 1e-12 * max(
                1.0, np.linalg.norm(lhs, "fro")
            )

    def test_schur_product_property(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = rng.integers(2, 4)
            e = random_psd(rng, n * n)
            f = random_psd(rng, n * n)
            prod = psi(psi(e) @ psi(f))
            w = np.linalg.eigvalsh((prod + prod.conj().T) / 2)
            bound = 1e-10 * np.linalg.norm(e, 2) * np.linalg.norm(f, 2)
            assert w.min() >= -bound


class TestPtraceQ:
    def test_psi_of_identity(self):
        assert np.allclose(ptrace_q(psi(np.eye(4))), np.eye(2))

    def test_single_entry(self):
        e = np.zeros((4, 4), dtype=complex)
        e[2, 2] = 1.0  # E_{3,3}: i=1, j=2, k=1, l=2 so chi_{jl} = 1
        expected = np.zeros((2, 2), dtype=complex)
        expected[0, 0] = 1.0
        assert np.array_equal(ptrace_q(e), expected)

    def test_vectorization_identity(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = rng.integers(2, 5)
            a = random_matrix(rng, n)
            b = random_matrix(rng, n)
            lhs = ptrace_q(np.outer(vec(a), np.conj(vec(b))))
            assert np.allclose(lhs, a @ b.conj().T, atol=1e-12)

    def test_positivity(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            n = rng.integers(2, 4)
            e = random_psd(rng, n * n)
            w = np.linalg.eigvalsh(ptrace_q(e))
            assert w.min() >= -1e-10 * np.linalg.norm(e, 2)

    def test_modularity(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            n = rng.integers(2, 4)
            a = random_matrix(rng, n)
            b = random_matrix(rng, n)
            e = random_matrix(rng, n * n)
            lhs = ptrace_q(kron(np.eye(n), a) @ e @ kron(np.eye(n), b.conj().T))
            rhs = a @ ptrace_q(e) @ b.conj().T
            assert np.linalg.norm(lhs - rhs, "fro") <= 1e-12 * max(
                1.0, np.linalg.norm(rhs, "fro")
            )


class TestSuperoperator:
    def test_tagging(self):
        s = Superoperator.from_matrix(np.eye(9))
        assert s.factor_dim == 3

    def test_bad_size(self):
        with pytest.raises(DimensionError):
            Superoperator.from_matrix(np.eye(5))

    def test_immutably_shared(self):
        s = Superoperator.from_matrix(np.eye(4))
        with pytest.raises(ValueError):
            s.mat[0, 0] = 2.0
