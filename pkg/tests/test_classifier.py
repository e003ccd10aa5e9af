import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_qnmc, oracle_state
from qnmc.classifier import (
    TrainingError,
    centroid_purities,
    classify_nmc,
    classify_qnmc,
    fit_nmc,
    fit_qnmc,
    predict_nmc,
    predict_qnmc,
    train_nmc,
    train_qnmc,
    verify_centroid_inequality,
)
from qnmc.datagen import Dataset
from qnmc.encoding import DensityPattern, EncodingKind, Pattern, encode, encode_dataset, encode_matrix
from qnmc.hermitian import ContractError, DensityMatrix, eigenvalues_hermitian, purity


def pats(rows):
    return [Pattern(x, y) for x, y in rows]


class TestNMC:
    def test_midpoint(self):
        model = train_nmc(pats([([0, 0], 1), ([2, 0], 1), ([5, 5], 2)]))
        np.testing.assert_array_equal(model.centroid(1), [1, 0])

    def test_singletons(self):
        model = train_nmc(pats([([1, 2], 1), ([3, 4], 2)]))
        np.testing.assert_array_equal(model.centroid(2), [3, 4])

    def test_three_point_mean(self):
        model = train_nmc(pats([([1, 1], 1), ([3, 5], 1), ([2, 0], 1), ([9, 9], 2)]))
        np.testing.assert_allclose(model.centroid(1), [2, 2])

    def test_classify(self):
        model = fit_nmc([[0, 0], [2, 0]], [1, 2])
        assert classify_nmc(model, [0.9, 0]) == 1
        assert classify_nmc(model, [2, 0]) == 2

    def test_tie_goes_to_smallest_label(self):
        model = fit_nmc([[2, 0], [0, 0]], [2, 1])
        assert classify_nmc(model, [1, 0]) == 1

    def test_dimension_mismatch(self):
        model = fit_nmc([[0, 0], [2, 0]], [1, 2])
        with pytest.raises(ContractError):
            classify_nmc(model, [1, 0, 0])

    def test_empty_training(self):
        with pytest.raises(TrainingError):
            train_nmc([])

    def test_absent_class_is_an_error(self):
        with pytest.raises(TrainingError, match="3"):
            fit_nmc([[0, 0], [1, 1]], [1, 2], classes=(1, 2, 3))

    def test_from_dataset(self):
        ds = Dataset("toy", np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 4.0]]), np.array([1, 1, 2]))
        np.testing.assert_allclose(train_nmc(ds).centroid(1), [1.0, 2.0])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([1e-3, 0.5, 2.0, 1e3, -1.5]))
    def test_rescaling_invariance(self, seed, t):
        r = np.random.default_rng(seed)
        X = r.normal(size=(40, 3))
        y = r.integers(1, 4, size=40)
        y[:3] = [1, 2, 3]
        base = predict_nmc(fit_nmc(X, y), X)
        scaled = predict_nmc(fit_nmc(t * X, y), t * X)
        np.testing.assert_array_equal(base, scaled)


class TestQNMC:
    def test_singleton_centroid_is_pure(self):
        dp = encode([1.0, 2.0], "norm-augmented", 1)
        model = train_qnmc([dp, encode([3.0, -1.0], "norm-augmented", 2)])
        np.testing.assert_array_equal(model.centroid(1).data, dp.state.data)
        assert abs(purity(model.centroid(1)) - 1) <= 1e-12

    def test_average_of_two_pure_states_is_mixed(self):
        model = train_qnmc(encode_dataset(pats([([1, 0], 1), ([0, 1], 1), ([5, 5], 2)]), "norm-augmented"))
        rho = model.centroid(1)
        assert purity(rho) < 1 - 1e-6
        np.testing.assert_allclose(eigenvalues_hermitian(rho), [0.0, 0.25, 0.75], atol=1e-12)
        np.testing.assert_allclose(np.linalg.eigvalsh(rho.data), [0.0, 0.25, 0.75], atol=1e-12)

    def test_classify_pure_centroid(self):
        dps = encode_dataset(pats([([1, 0], 1), ([0, 1], 2)]), "norm-augmented")
        model = train_qnmc(dps)
        assert classify_qnmc(model, dps[1].state) == 2
        assert classify_qnmc(model, encode([0.9, 0.1], "norm-augmented").state) == 1

    def test_orthogonal_centroids(self):
        a = DensityMatrix(np.diag([1.0, 0.0]))
        b = DensityMatrix(np.diag([0.0, 1.0]))
        model = train_qnmc([DensityPattern(a, 1, 0.0), DensityPattern(b, 2, 0.0)])
        assert classify_qnmc(model, b) == 2

    def test_tie_goes_to_smallest_label(self):
        a = DensityMatrix(np.diag([1.0, 0.0]))
        b = DensityMatrix(np.diag([0.0, 1.0]))
        model = fit_qnmc(np.stack([b.data, a.data]), [5, 3])
        assert classify_qnmc(model, np.eye(2) / 2) == 3

    def test_mixed_dims_rejected(self):
        with pytest.raises(TrainingError, match="mixed"):
            train_qnmc([encode([1.0], "stereo-nd", 1), encode([1.0, 1.0], "stereo-nd", 2)])

    def test_empty(self):
        with pytest.raises(TrainingError):
            train_qnmc([])

    def test_dimension_mismatch(self):
        model = train_qnmc(encode_dataset(pats([([1, 0], 1), ([0, 1], 2)]), "norm-augmented"))
        with pytest.raises(ContractError):
            classify_qnmc(model, np.eye(2) / 2)

    def test_centroids_are_barycentres(self, rng):
        X = rng.normal(size=(60, 4))
        y = rng.integers(1, 4, size=60)
        states = encode_matrix(X, "stereo-nd")
        model = fit_qnmc(states, y)
        counts = {lab: np.sum(y == lab) for lab in model.labels}
        pooled = sum(counts[lab] * model.centroid(lab).data for lab in model.labels) / len(y)
        np.testing.assert_allclose(pooled, states.mean(axis=0), atol=1e-9)
        for rho in model.centroids:
            assert abs(np.trace(rho.data) - 1) <= 1e-9

    def test_deterministic(self, rng):
        X = rng.normal(size=(30, 3))
        y = rng.integers(1, 3, size=30)
        s = encode_matrix(X, "norm-augmented")
        a = predict_qnmc(fit_qnmc(s, y), s)
        b = predict_qnmc(fit_qnmc(s.copy(), y.copy()), s.copy())
        np.testing.assert_array_equal(a, b)

    def test_rescaling_changes_labels(self):
        # class 1 sits near the origin, class 2 far out along the same direction
        X = np.array([[0.1, 0.0], [0.2, 0.05], [3.0, 0.1], [4.0, -0.1], [1.0, 0.0], [1.2, 0.1]])
        y = np.array([1, 1, 2, 2, 1, 2])
        labels = {}
        for t in (0.01, 1.0, 100.0):
            s = encode_matrix(t * X, "norm-augmented")
            labels[t] = predict_qnmc(fit_qnmc(s, y), s).tolist()
        assert len({tuple(v) for v in labels.values()}) > 1

    @pytest.mark.parametrize("kind", ["norm-augmented", "stereo-nd", "stereo2d"])
    def test_matches_brute_force(self, kind, rng):
        for _ in range(40):
            n = int(rng.integers(4, 21))
            X = rng.normal(size=(n, 2)) * rng.choice([0.3, 1.0, 3.0])
            y = rng.integers(1, 4, size=n)
            y[:2] = [1, 2]
            model = fit_qnmc(encode_matrix(X, kind), y)
            ours = [classify_qnmc(model, encode(x, kind).state) for x in X]
            assert ours == oracle_qnmc(X, y.tolist(), X, kind)

    def test_oracle_state_agrees_with_encoders(self, rng):
        for kind in ("norm-augmented", "stereo-nd", "stereo2d"):
            x = rng.normal(size=2)
            np.testing.assert_allclose(encode(x, kind).state.data, oracle_state(x, kind), atol=1e-14)


class TestCentroidInequality:
    def test_identical_patterns(self):
        assert not verify_centroid_inequality(pats([([1, 2], 1), ([1, 2], 1), ([3, 1], 2)]), "norm-augmented")

    def test_basis_vectors(self):
        assert verify_centroid_inequality(pats([([1, 0], 1), ([0, 1], 1), ([2, 2], 2)]), "norm-augmented")

    @pytest.mark.parametrize("kind", list(EncodingKind))
    def test_generic_data(self, kind, rng):
        X = rng.normal(size=(20, 2))
        y = np.repeat([1, 2], 10)
        ds = Dataset("g", X, y)
        assert verify_centroid_inequality(ds, kind)
        model = fit_qnmc(encode_matrix(X, kind), y)
        assert all(p < 1 - 1e-6 for p in centroid_purities(model).values())
