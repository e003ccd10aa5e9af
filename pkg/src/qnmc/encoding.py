"""Encodings of real feature vectors as pure density matrices.

Three encoders are provided:

``Stereo2D``
    Two features only. The inverse stereographic image of ``x`` is read as
    the Bloch vector of a qubit, giving a complex 2x2 state.
``StereoProjector``
    The same inverse stereographic map in ``d`` dimensions produces a unit
    vector in ``R^(d+1)`` (the *projector vector*); the state is its projector.
``NormAugmented``
    ``x`` is normalised, its norm appended as an extra coordinate, and the
    result rescaled to unit length (the *augmented vector*). The norm of ``x``
    stays recoverable from the last diagonal entry of the state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np

from .hermitian import DensityMatrix


class EncodingError(ValueError):
    """A pattern lies outside the domain of the chosen encoding."""


class EncodingKind(enum.Enum):
    STEREO_2D = "stereo2d"
    STEREO_PROJECTOR = "stereo-nd"
    NORM_AUGMENTED = "norm-augmented"

    @classmethod
    def parse(cls, name: "str | EncodingKind") -> "EncodingKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown encoding {name!r}; choose one of {choices}") from None


@dataclass(frozen=True)
class Pattern:
    features: np.ndarray
    label: Hashable

    def __post_init__(self):
        x = np.asarray(self.features, dtype=float)
        if x.ndim != 1 or x.size < 1:
            raise ValueError(f"features must be a non-empty vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("features must be finite")
        object.__setattr__(self, "features", x)


@dataclass(frozen=True)
class DensityPattern:
    state: DensityMatrix
    label: Hashable
    source_norm: float


def _vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise EncodingError(f"expected a feature vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise EncodingError("features must be finite")
    return v


_HUGE = 1e150


def _stereo_rows(X: np.ndarray) -> np.ndarray:
    """Rows ``[2x, |x|^2 - 1] / (|x|^2 + 1)``, rearranged where ``|x|^2`` would overflow."""
    sq = np.einsum("...i,...i->...", X, X)
    huge = np.abs(X).max(axis=-1) > _HUGE
    with np.errstate(over="ignore", invalid="ignore"):
        vec = np.concatenate([2.0 * X, (sq - 1.0)[..., None]], axis=-1) / (sq + 1.0)[..., None]
    if np.any(huge):
        n = _row_norms(X[huge])
        k = 1.0 / n
        vec[huge] = np.concatenate(
            [2.0 * (X[huge] / n[..., None]) / (n + k)[..., None], ((1.0 - k * k) / (1.0 + k * k))[..., None]],
            axis=-1,
        )
    return vec


def bloch_vector(x) -> np.ndarray:
    """Inverse stereographic projection of ``x`` onto the unit sphere in ``R^(d+1)``."""
    return _stereo_rows(_vector(x))


def projector_vector(x) -> np.ndarray:
    """Unit vector whose projector is the ``StereoProjector`` state (same as :func:`bloch_vector`)."""
    return bloch_vector(x)


def _row_norms(X: np.ndarray) -> np.ndarray:
    # scaled so that neither tiny nor huge entries under/overflow when squared
    scale = np.max(np.abs(X), axis=-1, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return scale[..., 0] * np.sqrt(np.sum((X / safe) ** 2, axis=-1))


def augmented_vector(x) -> np.ndarray:
    """Unit vector ``[x/|x|, |x|] / sqrt(|x|^2 + 1)`` behind the ``NormAugmented`` state.

    >>> augmented_vector([3.0, 4.0]) * np.sqrt(26.0)
    array([0.6, 0.8, 5. ])
    """
    v = _vector(x)
    norm = float(_row_norms(v))
    if norm == 0.0:
        raise EncodingError("norm-augmented encoding is undefined for the zero vector")
    return np.append(v / norm, norm) / np.hypot(norm, 1.0)


def recover_norm(state) -> float:
    """``|x|`` from a ``NormAugmented`` state.

    The last diagonal entry is ``|x|^2 / (|x|^2 + 1)``; its complement is
    read off the remaining diagonal rather than computed as ``1 - rho[d, d]``,
    which would cancel catastrophically for large norms.
    """
    diag = np.real(np.diagonal(state.data if isinstance(state, DensityMatrix) else np.asarray(state)))
    return float(np.sqrt(diag[-1] / np.sum(diag[:-1])))


def _stereo_2d_rows(X: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", X, X)
    rho = np.empty((X.shape[0], 2, 2), dtype=complex)
    rho[:, 0, 0] = sq
    rho[:, 0, 1] = X[:, 0] - 1j * X[:, 1]
    rho[:, 1, 0] = X[:, 0] + 1j * X[:, 1]
    rho[:, 1, 1] = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        rho /= (sq + 1.0)[:, None, None]
    huge = np.abs(X).max(axis=1) > _HUGE
    if huge.any():
        # the Bloch form 0.5 * [[1 + r3, r1 - i r2], [r1 + i r2, 1 - r3]] stays finite
        r = _stereo_rows(X[huge])
        rho[huge, 0, 0] = 0.5 * (1.0 + r[:, 2])
        rho[huge, 0, 1] = 0.5 * (r[:, 0] - 1j * r[:, 1])
        rho[huge, 1, 0] = 0.5 * (r[:, 0] + 1j * r[:, 1])
        rho[huge, 1, 1] = 0.5 * (1.0 - r[:, 2])
    return rho


def encode_stereo_2d(x, label: Hashable = None) -> DensityPattern:
    v = _vector(x)
    if v.size != 2:
        raise EncodingError(f"stereo2d encoding needs exactly 2 features, got {v.size}")
    rho = _stereo_2d_rows(v[None])[0]
    return DensityPattern(DensityMatrix(rho, validate=False), label, float(_row_norms(v)))


def encode_stereo_projector(x, label: Hashable = None) -> DensityPattern:
    v = _vector(x)
    return DensityPattern(
        DensityMatrix.from_vector(projector_vector(v)), label, float(_row_norms(v))
    )


def encode_norm_augmented(x, label: Hashable = None) -> DensityPattern:
    v = _vector(x)
    return DensityPattern(
        DensityMatrix.from_vector(augmented_vector(v)), label, float(_row_norms(v))
    )


ENCODERS = {
    EncodingKind.STEREO_2D: encode_stereo_2d,
    EncodingKind.STEREO_PROJECTOR: encode_stereo_projector,
    EncodingKind.NORM_AUGMENTED: encode_norm_augmented,
}


def encode(x, kind: EncodingKind | str, label: Hashable = None) -> DensityPattern:
    return ENCODERS[EncodingKind.parse(kind)](x, label)


def state_dim(d: int, kind: EncodingKind | str) -> int:
    """Dimension of the density matrices produced for ``d``-feature patterns."""
    kind = EncodingKind.parse(kind)
    if kind is EncodingKind.STEREO_2D:
        if d != 2:
            raise EncodingError(f"stereo2d encoding needs exactly 2 features, got {d}")
        return 2
    return d + 1


def encode_dataset(patterns: Iterable[Pattern], kind: EncodingKind | str) -> list[DensityPattern]:
    """Encode every pattern, keeping order and labels.

    The feature dimension is checked once against the first pattern; a
    failure on any pattern is re-raised with its position in the input.
    """
    kind = EncodingKind.parse(kind)
    patterns = list(patterns)
    if not patterns:
        return []
    d = patterns[0].features.size
    state_dim(d, kind)
    encoder = ENCODERS[kind]
    out = []
    for i, p in enumerate(patterns):
        if p.features.size != d:
            raise EncodingError(f"pattern {i}: expected {d} features, got {p.features.size}")
        try:
            out.append(encoder(p.features, p.label))
        except EncodingError as exc:
            raise EncodingError(f"pattern {i}: {exc}") from exc
    return out


def encode_matrix(X, kind: EncodingKind | str) -> np.ndarray:
    """Vectorised encoding of the rows of ``X`` into a ``(N, n, n)`` stack of states.

    Raises :class:`EncodingError` naming the first offending row.
    """
    kind = EncodingKind.parse(kind)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise EncodingError(f"expected an (N, d) feature matrix, got shape {X.shape}")
    n_rows, d = X.shape
    state_dim(d, kind)
    bad = ~np.all(np.isfinite(X), axis=1)
    if bad.any():
        raise EncodingError(f"row {int(np.argmax(bad))}: features must be finite")
    if kind is EncodingKind.STEREO_2D:
        return _stereo_2d_rows(X)
    if kind is EncodingKind.STEREO_PROJECTOR:
        vec = _stereo_rows(X)
    else:
        norm = _row_norms(X)
        zero = norm == 0.0
        if zero.any():
            raise EncodingError(
                f"row {int(np.argmax(zero))}: norm-augmented encoding is undefined for the zero vector"
            )
        vec = np.hstack([X / norm[:, None], norm[:, None]]) / np.hypot(norm, 1.0)[:, None]
    return np.einsum("ni,nj->nij", vec, vec)
