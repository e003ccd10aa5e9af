"""Hermitian eigensolver, density matrices and the trace distance.

The eigensolver is a cyclic complex Jacobi method. It works on a stack of
matrices at once: every rotation ``(p, q)`` is applied to the whole batch
with numpy, so classifying a test fold costs one Python-level sweep loop
rather than one per pattern. Matrices here are small (``d + 1`` is at most a
few dozen), where Jacobi is accurate and perfectly adequate.
"""

from __future__ import annotations

import numpy as np

from .tolerances import DEFAULT, Tolerances


class ContractError(ValueError):
    """An input violated a documented precondition."""


class ConvergenceError(RuntimeError):
    pass


def _as_square_stack(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.dtype.kind not in "fc":
        arr = arr.astype(np.float64)
    elif arr.dtype.kind == "f" and arr.dtype != np.float64:
        arr = arr.astype(np.float64)
    elif arr.dtype.kind == "c" and arr.dtype != np.complex128:
        arr = arr.astype(np.complex128)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ContractError(f"expected square matrices, got shape {arr.shape}")
    return arr


def check_hermitian(m, tol: float = DEFAULT.hermitian) -> None:
    """Raise :class:`ContractError` naming the worst entry pair if ``m`` is not Hermitian."""
    arr = _as_square_stack(m)
    if arr.ndim != 2:
        raise ContractError(f"expected a single matrix, got shape {arr.shape}")
    gap = np.abs(arr - arr.conj().T)
    if gap.size and gap.max() > tol:
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        raise ContractError(
            f"matrix is not Hermitian: entry ({i},{j})={arr[i, j]!r} but "
            f"entry ({j},{i})={arr[j, i]!r} (|difference|={gap[i, j]:.3e} > {tol:g})"
        )


_NEGLIGIBLE = 1e-280


def _off_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=1))


def jacobi_eigh(stack, vectors: bool = False, tol: Tolerances = DEFAULT):
    """Diagonalise a stack of Hermitian matrices with cyclic Jacobi rotations.

    Args:
        stack: array of shape ``(B, n, n)`` (real symmetric or complex Hermitian).
            Hermiticity is assumed, not checked.
        vectors: also accumulate the eigenvectors.
        tol: convergence threshold and sweep cap.

    Returns:
        ``w`` of shape ``(B, n)`` in ascending order, and ``V`` of shape
        ``(B, n, n)`` with eigenvectors in columns (``None`` unless requested).
    """
    a = np.array(_as_square_stack(stack), copy=True)
    if a.ndim != 3:
        raise ContractError(f"expected a (B, n, n) stack, got shape {a.shape}")
    batch, n, _ = a.shape
    v = np.tile(np.eye(n, dtype=a.dtype), (batch, 1, 1)) if vectors else None
    limit = tol.jacobi_off * np.maximum(1.0, np.linalg.norm(a.reshape(batch, -1), axis=1))

    for _ in range(tol.jacobi_max_sweeps + 1):
        if batch == 0 or n < 2:
            break
        # converged matrices are frozen so each result is independent of its batch
        active = np.flatnonzero(_off_norm(a) >= limit)
        if active.size == 0:
            break
        sub = a[active]
        sub_v = v[active] if v is not None else None
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(sub, sub_v, p, q)
        a[active] = sub
        if v is not None:
            v[active] = sub_v
    else:
        worst = float(np.max(_off_norm(a) / limit))
        raise ConvergenceError(
            f"Jacobi did not converge in {tol.jacobi_max_sweeps} sweeps "
            f"(off-diagonal mass {worst:.3g}x the threshold)"
        )

    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if v is not None:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def _rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    apq = a[:, p, q]
    mag = np.abs(apq)
    # entries this small are far below any convergence threshold; dividing
    # by them would overflow
    live = mag > _NEGLIGIBLE
    if not live.any():
        return
    safe = np.where(live, mag, 1.0)
    # phase makes the (p, q) entry real before the real rotation
    phase = np.where(live, apq / safe, 1.0)
    app = np.real(a[:, p, p]).copy()
    aqq = np.real(a[:, q, q]).copy()
    with np.errstate(over="ignore", invalid="ignore"):
        tau = (aqq - app) / (2.0 * safe)
        root = np.sqrt(1.0 + tau * tau)
        big = ~np.isfinite(root)
        t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.where(big, np.abs(tau), root))
    t = np.where(live & np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    c_ = c[:, None]
    s_ = s[:, None]
    cphase = np.conj(phase)[:, None]

    # columns of A U; rows follow from Hermiticity, the 2x2 block in closed form
    col_p = a[:, :, p].copy()
    col_q = a[:, :, q] * cphase
    new_p = c_ * col_p - s_ * col_q
    new_q = s_ * col_p + c_ * col_q
    a[:, :, p] = new_p
    a[:, :, q] = new_q
    a[:, p, :] = np.conj(new_p)
    a[:, q, :] = np.conj(new_q)
    a[:, p, p] = app - t * mag
    a[:, q, q] = aqq + t * mag
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    if v is not None:
        vp = v[:, :, p].copy()
        vq = v[:, :, q] * cphase
        v[:, :, p] = c_ * vp - s_ * vq
        v[:, :, q] = s_ * vp + c_ * vq


def eigh_hermitian(m, tol: Tolerances = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of one Hermitian matrix."""
    arr = _as_square_stack(m)
    check_hermitian(arr, tol.hermitian)
    w, v = jacobi_eigh(arr[None], vectors=True, tol=tol)
    return w[0], v[0]


def eigenvalues_hermitian(m, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order.

    >>> eigenvalues_hermitian([[0.5, 0.5], [0.5, 0.5]]).round(12).tolist()
    [0.0, 1.0]
    """
    arr = _as_square_stack(m)
    check_hermitian(arr, tol.hermitian)
    return jacobi_eigh(arr[None], tol=tol)[0][0]


class DensityMatrix:
    """Immutable Hermitian, unit-trace, positive-semidefinite matrix.

    Real symmetric input is stored as ``float64``; anything with a complex
    dtype as ``complex128``. Both are treated as complex Hermitian.
    """

    __slots__ = ("_data",)

    def __init__(self, data, *, validate: bool = True, tol: Tolerances = DEFAULT):
        arr = np.array(_as_square_stack(data), copy=True)
        if arr.ndim != 2:
            raise ContractError(f"expected a single matrix, got shape {arr.shape}")
        if validate:
            _validate_density(arr, tol)
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_vector(cls, vec, tol: Tolerances = DEFAULT) -> "DensityMatrix":
        """Pure state ``|v><v|`` of a unit vector; skips the eigenvalue check."""
        v = np.asarray(vec)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > tol.trace:
            raise ContractError(f"state vector must have unit norm, got {norm!r}")
        out = cls.__new__(cls)
        arr = np.outer(v, v.conj())
        arr.setflags(write=False)
        out._data = arr
        return out

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy() if copy else self._data
        return self._data.astype(dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, purity={purity(self):.6g})"


def _validate_density(arr: np.ndarray, tol: Tolerances) -> None:
    check_hermitian(arr, tol.hermitian)
    tr = np.trace(arr)
    if abs(tr - 1.0) > tol.trace:
        raise ContractError(f"density matrix must have unit trace, got {tr!r}")
    # eigenvalues in [-psd, 0) count as zero for this check only
    lowest = jacobi_eigh(arr[None], tol=tol)[0][0, 0]
    if lowest < -tol.psd:
        raise ContractError(f"density matrix is not positive semidefinite (eigenvalue {lowest!r})")


def _raw(m) -> np.ndarray:
    return m.data if isinstance(m, DensityMatrix) else np.asarray(m)


def purity(a) -> float:
    """``Tr(a^2)``, which is 1 exactly for pure states."""
    arr = _raw(a)
    return float(np.sum(np.abs(arr) ** 2))


def trace_distance(a, b, tol: Tolerances = DEFAULT) -> float:
    """Half the sum of absolute eigenvalues of ``a - b``.

    >>> trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    1.0
    """
    x, y = _raw(a), _raw(b)
    if x.shape != y.shape:
        raise ContractError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    # canonical operand order so that d(a, b) == d(b, a) bit for bit
    if x.tobytes() > y.tobytes():
        x, y = y, x
    w = jacobi_eigh((x - y)[None], tol=tol)[0][0]
    return float(0.5 * np.sum(np.abs(w)))


def trace_distances(states, reference, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Trace distance from every matrix in a ``(B, n, n)`` stack to ``reference``."""
    stack = np.asarray(states)
    ref = _raw(reference)
    if stack.ndim != 3 or stack.shape[1:] != ref.shape:
        raise ContractError(
            f"dimension mismatch: states {stack.shape[1:]} vs reference {ref.shape}"
        )
    w = jacobi_eigh(stack - ref, tol=tol)[0]
    return 0.5 * np.sum(np.abs(w), axis=1)
