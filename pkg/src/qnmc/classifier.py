"""Nearest mean classifiers: Euclidean (NMC) and trace-distance (QNMC).

Both share the same decision rule: argmin of a distance to per-class
prototypes, with exact ties going to the smallest class label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .encoding import DensityPattern, EncodingKind, Pattern, encode_matrix
from .hermitian import ContractError, DensityMatrix, purity, trace_distances
from .tolerances import DEFAULT, Tolerances


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalModel:
    labels: tuple
    centroids: np.ndarray  # (L, d), row l belongs to labels[l]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    def centroid(self, label) -> np.ndarray:
        return self.centroids[self.labels.index(label)]


@dataclass(frozen=True)
class QuantumModel:
    labels: tuple
    centroids: tuple  # DensityMatrix per label
    encoding: EncodingKind | None = None

    @property
    def dim(self) -> int:
        return self.centroids[0].dim

    def centroid(self, label) -> DensityMatrix:
        return self.centroids[self.labels.index(label)]


def _sorted_labels(y, classes=None) -> tuple:
    present = sorted(set(np.asarray(y).tolist()))
    if classes is None:
        return tuple(present)
    classes = tuple(sorted(classes))
    missing = [c for c in classes if c not in present]
    if missing:
        raise TrainingError(f"classes {missing} have no training patterns")
    unknown = [c for c in present if c not in classes]
    if unknown:
        raise TrainingError(f"training labels {unknown} are not in the class alphabet")
    return classes


def _unpack(training) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(training, "X") and hasattr(training, "y"):
        return np.asarray(training.X, dtype=float), np.asarray(training.y)
    patterns: Sequence[Pattern] = list(training)
    if not patterns:
        raise TrainingError("training set is empty")
    X = np.vstack([p.features for p in patterns])
    y = np.array([p.label for p in patterns])
    return X, y


def fit_nmc(X, y, classes=None) -> ClassicalModel:
    """Class means of the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingError("training set is empty")
    if len(y) != X.shape[0]:
        raise TrainingError(f"{X.shape[0]} patterns but {len(y)} labels")
    labels = _sorted_labels(y, classes)
    mu = np.vstack([X[y == lab].mean(axis=0) for lab in labels])
    return ClassicalModel(labels, mu)


def train_nmc(training, classes=None) -> ClassicalModel:
    """Train the classical nearest mean classifier.

    ``training`` is a :class:`~qnmc.datagen.Dataset` or a sequence of
    :class:`Pattern`. Passing ``classes`` makes it an error for any class of
    that alphabet to be absent from the training data.
    """
    X, y = _unpack(training)
    return fit_nmc(X, y, classes)


def _argmin_label(dist: np.ndarray, labels: tuple) -> np.ndarray:
    # labels are sorted, so argmin's first-occurrence rule is the smallest-label tie-break
    return np.asarray(labels)[np.argmin(dist, axis=1)]


def predict_nmc(model: ClassicalModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.dim:
        raise ContractError(f"dimension mismatch: model has d={model.dim}, patterns have {X.shape[1]}")
    diff = X[:, None, :] - model.centroids[None, :, :]
    dist = np.sqrt(np.einsum("nld,nld->nl", diff, diff))
    return _argmin_label(dist, model.labels)


def classify_nmc(model: ClassicalModel, x) -> Hashable:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ContractError(f"expected one feature vector, got shape {x.shape}")
    return predict_nmc(model, x[None])[0]


def fit_qnmc(states, y, classes=None, encoding=None, tol: Tolerances = DEFAULT) -> QuantumModel:
    """Quantum centroids of a ``(N, n, n)`` stack of density matrices."""
    states = np.asarray(states)
    y = np.asarray(y)
    if states.ndim != 3 or states.shape[0] == 0:
        raise TrainingError("training set is empty")
    if len(y) != states.shape[0]:
        raise TrainingError(f"{states.shape[0]} states but {len(y)} labels")
    labels = _sorted_labels(y, classes)
    centroids = tuple(DensityMatrix(states[y == lab].mean(axis=0), tol=tol) for lab in labels)
    return QuantumModel(labels, centroids, encoding)


def train_qnmc(training: Sequence[DensityPattern], classes=None, tol: Tolerances = DEFAULT) -> QuantumModel:
    """Average the density patterns of each class into its quantum centroid."""
    training = list(training)
    if not training:
        raise TrainingError("training set is empty")
    dims = {p.state.dim for p in training}
    if len(dims) != 1:
        raise TrainingError(f"density patterns have mixed dimensions {sorted(dims)}")
    dtype = np.result_type(*{p.state.data.dtype for p in training})
    states = np.stack([p.state.data.astype(dtype, copy=False) for p in training])
    return fit_qnmc(states, [p.label for p in training], classes, tol=tol)


def predict_qnmc(model: QuantumModel, states, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Labels for a ``(N, n, n)`` stack of density matrices."""
    states = np.asarray(states)
    if states.ndim == 2:
        states = states[None]
    if states.shape[1:] != (model.dim, model.dim):
        raise ContractError(
            f"dimension mismatch: model states are {model.dim}x{model.dim}, got {states.shape[1:]}"
        )
    dist = np.column_stack([trace_distances(states, c.data, tol) for c in model.centroids])
    return _argmin_label(dist, model.labels)


def classify_qnmc(model: QuantumModel, state, tol: Tolerances = DEFAULT) -> Hashable:
    data = state.data if isinstance(state, DensityMatrix) else np.asarray(state)
    if data.ndim != 2:
        raise ContractError(f"expected one density matrix, got shape {data.shape}")
    return predict_qnmc(model, data[None], tol)[0]


def verify_centroid_inequality(training, kind: EncodingKind | str, tol: Tolerances = DEFAULT) -> bool:
    """True iff some quantum centroid differs from the encoding of its class mean.

    The comparison is the largest absolute entry difference against
    ``tol.centroid_inequality``.
    """
    X, y = _unpack(training)
    classical = fit_nmc(X, y)
    quantum = fit_qnmc(encode_matrix(X, kind), y, tol=tol)
    encoded_means = encode_matrix(classical.centroids, kind)
    for rho, rho_mu in zip(quantum.centroids, encoded_means):
        if np.max(np.abs(rho.data - rho_mu)) > tol.centroid_inequality:
            return True
    return False


def centroid_purities(model: QuantumModel) -> dict:
    return {lab: purity(c) for lab, c in zip(model.labels, model.centroids)}
