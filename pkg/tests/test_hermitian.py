import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_density, random_unitary, svd_trace_distance
from qnmc.hermitian import (
    ContractError,
    DensityMatrix,
    eigenvalues_hermitian,
    eigh_hermitian,
    jacobi_eigh,
    purity,
    trace_distance,
    trace_distances,
)
from qnmc.tolerances import DEFAULT


class TestEigenvalues:
    def test_identity(self):
        assert eigenvalues_hermitian(np.eye(2)).tolist() == [1.0, 1.0]

    def test_diagonal(self):
        np.testing.assert_allclose(eigenvalues_hermitian(np.diag([0.75, 0.25])), [0.25, 0.75], atol=0)

    def test_all_halves(self):
        np.testing.assert_allclose(eigenvalues_hermitian(0.5 * np.ones((2, 2))), [0.0, 1.0], atol=1e-15)

    def test_non_hermitian_names_entry_pair(self):
        m = np.array([[1.0, 2.0, 0.0], [2.0, 1.0, 0.5], [0.0, 0.0, 1.0]])
        with pytest.raises(ContractError, match=r"\(1,2\).*\(2,1\)"):
            eigenvalues_hermitian(m)

    def test_non_square_rejected(self):
        with pytest.raises(ContractError):
            eigenvalues_hermitian(np.zeros((2, 3)))

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17, 35])
    def test_against_lapack(self, rng, n):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = g + g.conj().T
        w = eigenvalues_hermitian(m)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-10 * max(1, np.abs(m).max()))
        assert np.all(np.diff(w) >= 0)

    @pytest.mark.parametrize("n", [2, 4, 9, 20])
    def test_reconstruction(self, rng, n):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = (g + g.conj().T) / 2
        w, v = eigh_hermitian(m)
        assert np.max(np.abs(m - (v * w) @ v.conj().T)) <= DEFAULT.reconstruction
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-9

    def test_real_symmetric_stays_real(self, rng):
        g = rng.normal(size=(6, 6))
        w, v = eigh_hermitian(g + g.T)
        assert v.dtype == np.float64
        np.testing.assert_allclose(w, np.linalg.eigvalsh(g + g.T), atol=1e-12)

    def test_degenerate_spectrum(self):
        m = np.diag([1.0, 1.0, 1.0]) + 0.0j
        assert eigenvalues_hermitian(m).tolist() == [1.0, 1.0, 1.0]

    def test_batched_matches_single(self, rng):
        stack = np.stack([random_density(rng, 4) for _ in range(7)])
        batched, _ = jacobi_eigh(stack)
        for m, w in zip(stack, batched):
            np.testing.assert_array_equal(w, eigenvalues_hermitian(m))

    def test_tiny_entries_do_not_overflow(self):
        m = np.array([[1.0, 1e-300], [1e-300, 2.0]])
        np.testing.assert_allclose(eigenvalues_hermitian(m), [1.0, 2.0])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 2**32 - 1))
    def test_trace_and_square_sum(self, n, seed):
        r = np.random.default_rng(seed)
        g = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
        m = g + g.conj().T
        w = eigenvalues_hermitian(m)
        assert abs(w.sum() - np.trace(m).real) <= 1e-9 * max(1, np.abs(m).sum())
        assert abs(np.sum(w**2) - np.trace(m @ m).real) <= 1e-9 * max(1, np.sum(np.abs(m) ** 2))


class TestDensityMatrix:
    def test_valid(self):
        rho = DensityMatrix(np.diag([0.25, 0.75]))
        assert rho.dim == 2
        assert rho.data.dtype == np.float64

    def test_immutable(self):
        rho = DensityMatrix(np.diag([0.5, 0.5]))
        with pytest.raises(ValueError):
            rho.data[0, 0] = 1.0

    def test_copy_on_construction(self):
        src = np.diag([0.5, 0.5])
        rho = DensityMatrix(src)
        src[0, 0] = 7.0
        assert rho.data[0, 0] == 0.5

    @pytest.mark.parametrize(
        "bad, match",
        [
            (np.diag([0.5, 0.6]), "unit trace"),
            (np.diag([1.5, -0.5]), "positive semidefinite"),
            (np.array([[0.5, 0.1], [0.2, 0.5]]), "Hermitian"),
            (np.ones((2, 3)), "square"),
        ],
    )
    def test_contract_violations(self, bad, match):
        with pytest.raises(ContractError, match=match):
            DensityMatrix(bad)

    def test_small_negative_eigenvalue_tolerated(self):
        DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]))

    def test_from_vector_requires_unit_norm(self):
        with pytest.raises(ContractError):
            DensityMatrix.from_vector([1.0, 1.0])

    def test_from_vector(self):
        rho = DensityMatrix.from_vector(np.array([1.0, 1.0j]) / math.sqrt(2))
        np.testing.assert_allclose(rho.data, [[0.5, -0.5j], [0.5j, 0.5]])


class TestPurity:
    def test_projector(self, rng):
        v = rng.normal(size=5) + 1j * rng.normal(size=5)
        assert abs(purity(DensityMatrix.from_vector(v / np.linalg.norm(v))) - 1.0) <= 1e-12

    def test_maximally_mixed_qubit(self):
        assert purity(np.diag([0.5, 0.5])) == 0.5

    def test_mixture(self):
        rho = 0.5 * (np.diag([1.0, 0.0]) + 0.5 * np.ones((2, 2)))
        assert abs(purity(rho) - 0.75) <= 1e-15


class TestTraceDistance:
    def test_self(self, rng):
        rho = random_density(rng, 4)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal(self):
        assert trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 1.0

    def test_encoded_basis_vectors(self):
        # encodings of [1,0] and [0,1]: overlap 1/2 so d = sqrt(1 - 1/4)
        a = DensityMatrix.from_vector(np.array([1.0, 0.0, 1.0]) / math.sqrt(2))
        b = DensityMatrix.from_vector(np.array([0.0, 1.0, 1.0]) / math.sqrt(2))
        assert abs(trace_distance(a, b) - math.sqrt(3) / 2) <= 1e-12
        assert abs(svd_trace_distance(a, b) - math.sqrt(3) / 2) <= 1e-12

    def test_dimension_mismatch_names_dims(self):
        with pytest.raises(ContractError, match="2 vs 3"):
            trace_distance(np.eye(2) / 2, np.eye(3) / 3)

    @pytest.mark.parametrize("n", [2, 3, 6, 11])
    def test_matches_svd_oracle(self, rng, n):
        for _ in range(20):
            a, b = random_density(rng, n), random_density(rng, n)
            assert abs(trace_distance(a, b) - svd_trace_distance(a, b)) <= 1e-9

    def test_unitary_invariance(self, rng):
        for n in range(2, 7):
            a, b = random_density(rng, n), random_density(rng, n)
            u = random_unitary(rng, n)
            rotated = trace_distance(u @ a @ u.conj().T, u @ b @ u.conj().T)
            assert abs(rotated - trace_distance(a, b)) <= 1e-9

    def test_symmetry_bit_exact(self, rng):
        for _ in range(50):
            a, b = random_density(rng, 5), random_density(rng, 5)
            assert trace_distance(a, b) == trace_distance(b, a)

    def test_batched(self, rng):
        ref = random_density(rng, 4)
        stack = np.stack([random_density(rng, 4) for _ in range(9)])
        np.testing.assert_allclose(
            trace_distances(stack, ref), [svd_trace_distance(s, ref) for s in stack], atol=1e-12
        )

    def test_batched_dimension_mismatch(self, rng):
        with pytest.raises(ContractError):
            trace_distances(np.zeros((3, 2, 2)), np.eye(3) / 3)
