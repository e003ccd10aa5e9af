"""Datasets: CSV ingestion, manifests, splits, rescaling and synthetic families."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .encoding import Pattern
from .rng import stream


class DataError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labelled feature matrix.

    Labels are integers ``1..L``; ``label_names[l - 1]`` is the original name
    of class ``l`` when the data came from a file. ``classes`` is the full
    label alphabet, which subsets produced by :func:`split` keep even when a
    class happens to be absent from them. ``rows`` maps each pattern back to
    its row in the source dataset.
    """

    name: str
    X: np.ndarray
    y: np.ndarray
    classes: tuple = ()
    label_names: tuple = ()
    rows: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2:
            raise DataError(f"{self.name}: feature matrix must be 2-D, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DataError(f"{self.name}: {X.shape[0]} patterns but {y.shape[0]} labels")
        classes = tuple(self.classes) or tuple(sorted(set(y.tolist())))
        unknown = set(y.tolist()) - set(classes)
        if unknown:
            raise DataError(f"{self.name}: labels {sorted(unknown)} are not in the alphabet {classes}")
        rows = np.arange(X.shape[0]) if self.rows is None else np.asarray(self.rows)
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "label_names", tuple(self.label_names))
        object.__setattr__(self, "rows", _frozen(rows))

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def class_counts(self) -> dict:
        return {c: int(np.sum(self.y == c)) for c in self.classes}

    @property
    def patterns(self) -> list[Pattern]:
        return [Pattern(x, lab) for x, lab in zip(self.X, self.y.tolist())]

    def subset(self, idx, name: str | None = None) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return Dataset(
            name or self.name, self.X[idx], self.y[idx], self.classes, self.label_names, self.rows[idx]
        )

    @classmethod
    def from_patterns(cls, name: str, patterns: Sequence[Pattern], classes=()) -> "Dataset":
        patterns = list(patterns)
        if not patterns:
            raise DataError(f"{name}: no patterns")
        d = patterns[0].features.size
        for i, p in enumerate(patterns):
            if p.features.size != d:
                raise DataError(f"{name}: pattern {i} has {p.features.size} features, expected {d}")
        return cls(name, np.vstack([p.features for p in patterns]), np.array([p.label for p in patterns]), classes)


# -- CSV ----------------------------------------------------------------------


def load_csv(
    path,
    label_column: int = -1,
    header: bool = False,
    label_alphabet: Sequence[str] | None = None,
    name: str | None = None,
) -> Dataset:
    """Read a comma-separated file of numeric features plus one label column.

    Labels are mapped to ``1..L`` in order of first appearance, or in the
    order of ``label_alphabet`` when one is given (then any other label is an
    error).
    """
    path = Path(path)
    name = name or path.stem
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    if header and rows:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0])
    if width < 2:
        raise DataError(f"{path}: need at least one feature column and a label column")
    col = label_column % width
    alphabet = list(label_alphabet) if label_alphabet is not None else []
    fixed = label_alphabet is not None
    X = np.empty((len(rows), width - 1))
    y = np.empty(len(rows), dtype=int)
    line0 = 2 if header else 1
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DataError(f"{path}: line {i + line0} has {len(r)} columns, expected {width}")
        label = r[col].strip()
        if label not in alphabet:
            if fixed:
                raise DataError(f"{path}: line {i + line0}: unknown label {label!r}")
            alphabet.append(label)
        y[i] = alphabet.index(label) + 1
        feats = r[:col] + r[col + 1:]
        for j, cell in enumerate(feats):
            try:
                X[i, j] = float(cell)
            except ValueError:
                k = j if j < col else j + 1
                raise DataError(f"{path}: line {i + line0}, column {k + 1}: non-numeric value {cell!r}") from None
            if not math.isfinite(X[i, j]):
                k = j if j < col else j + 1
                raise DataError(f"{path}: line {i + line0}, column {k + 1}: non-finite value {cell!r}")
    return Dataset(name, X, y, tuple(range(1, len(alphabet) + 1)), tuple(alphabet))


def save_csv(dataset: Dataset, path, header: Sequence[str] | None = None) -> None:
    """Write features then the label name (or number) as the last column."""
    names = dataset.label_names
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for x, lab in zip(dataset.X, dataset.y.tolist()):
            w.writerow([repr(float(v)) if not float(v).is_integer() else str(int(v)) for v in x]
                       + [names[lab - 1] if names else lab])


# -- manifests ------------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    """One manifest row. ``path`` is a CSV file or ``generator:<name>``."""

    name: str
    path: str
    label_column: int = -1
    header: bool = False
    base: Path = Path(".")

    def load(self, seed: int = 0) -> Dataset:
        if self.path.startswith("generator:"):
            ds = generate(self.path.split(":", 1)[1], seed=seed)
            return Dataset(self.name, ds.X, ds.y, ds.classes, ds.label_names)
        p = Path(self.path)
        if not p.is_absolute():
            p = self.base / p
        if not p.exists():
            raise FileNotFoundError(f"dataset {self.name!r}: file not found: {p}")
        return load_csv(p, self.label_column, self.header, name=self.name)


def load_manifest(path) -> list[ManifestEntry]:
    """Read a manifest CSV with columns ``name,path,label_column,header``.

    Relative paths are resolved against the manifest's directory.
    """
    path = Path(path)
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            try:
                entries.append(
                    ManifestEntry(
                        name=row["name"].strip(),
                        path=row["path"].strip(),
                        label_column=int(row.get("label_column") or -1),
                        header=(row.get("header") or "false").strip().lower() in {"1", "true", "yes"},
                        base=path.parent,
                    )
                )
            except (KeyError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}: line {lineno}: malformed manifest row ({exc})") from None
    return entries


# -- splitting and rescaling -------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    runs: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.runs < 1:
            raise ValueError(f"runs must be positive, got {self.runs}")


def split_indices(n: int, spec: SplitSpec, run_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Positions of the training and test patterns for one run."""
    if not 0 <= run_index < spec.runs:
        raise ValueError(f"run_index {run_index} outside 0..{spec.runs - 1}")
    n_train = math.floor(spec.train_fraction * n)
    if n_train == 0 or n_train == n:
        raise DataError(f"split of {n} patterns at fraction {spec.train_fraction} leaves an empty side")
    perm = np.array(stream(spec.seed, run_index).permutation(n), dtype=int)
    return perm[:n_train], perm[n_train:]


def split(dataset: Dataset, spec: SplitSpec, run_index: int) -> tuple[Dataset, Dataset]:
    """Random, unstratified train/test partition, reproducible from ``(seed, run_index)``."""
    tr, ts = split_indices(len(dataset), spec, run_index)
    return dataset.subset(tr), dataset.subset(ts)


def rescale(dataset: Dataset, t: float) -> Dataset:
    """Multiply every feature by ``t``."""
    if not math.isfinite(t):
        raise ValueError(f"rescaling factor must be finite, got {t}")
    return Dataset(dataset.name, dataset.X * t, dataset.y, dataset.classes, dataset.label_names, dataset.rows)


@dataclass(frozen=True)
class RescaleGrid:
    """Inclusive grid ``t_min + k * step`` for ``k = 0 .. K``."""

    t_min: float
    t_max: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.t_max < self.t_min:
            raise ValueError(f"t_max {self.t_max} is below t_min {self.t_min}")

    @property
    def values(self) -> list[float]:
        # the small slack keeps t_max on the grid despite rounding in the division
        count = math.floor((self.t_max - self.t_min) / self.step + 1e-9) + 1
        return [self.t_min + k * self.step for k in range(count)]


# -- synthetic families ---------------------------------------------------------------

# Gaussian family parameters. None of them are published, so these are
# fixed choices that follow the qualitative descriptions: balanced with a
# correlated feature block (I), unbalanced with uncorrelated features and
# unequal spreads (II), three unbalanced classes with fully correlated
# features and unequal spreads (III).
GAUSSIAN_I = dict(d=30, sizes=(200, 200), shift=0.35, block=10, rho=0.8, scale=1.0)
GAUSSIAN_II = dict(d=8, sizes=(100, 900), means=(0.0, 1.0), sigmas=(0.6, 1.5))
GAUSSIAN_III = dict(d=8, sizes=(50, 500, 1500), means=(0.0, 1.0, 2.0), sigmas=(0.5, 1.0, 1.5), rho=0.5)


def _equicorrelated(d: int, rho: float) -> np.ndarray:
    return (1.0 - rho) * np.eye(d) + rho * np.ones((d, d))


def _labelled(name, parts, label_names=()) -> Dataset:
    X = np.vstack(parts)
    y = np.concatenate([np.full(len(p), k + 1) for k, p in enumerate(parts)])
    return Dataset(name, X, y, tuple(range(1, len(parts) + 1)), label_names)


def gen_gaussian(family: str, seed: int = 0) -> Dataset:
    """Gaussian (I), (II) or (III); ``family`` is ``"I"``, ``"II"`` or ``"III"``."""
    fam = str(family).upper()
    rng = np.random.default_rng(seed)
    if fam == "I":
        p = GAUSSIAN_I
        cov = np.eye(p["d"])
        b = p["block"]
        cov[:b, :b] = _equicorrelated(b, p["rho"])
        cov *= p["scale"] ** 2
        means = (np.zeros(p["d"]), np.full(p["d"], p["shift"]))
        parts = [rng.multivariate_normal(m, cov, size=n) for m, n in zip(means, p["sizes"])]
    elif fam == "II":
        p = GAUSSIAN_II
        parts = [
            rng.normal(mu, sig, size=(n, p["d"]))
            for mu, sig, n in zip(p["means"], p["sigmas"], p["sizes"])
        ]
    elif fam == "III":
        p = GAUSSIAN_III
        base = _equicorrelated(p["d"], p["rho"])
        parts = [
            rng.multivariate_normal(np.full(p["d"], mu), sig**2 * base, size=n)
            for mu, sig, n in zip(p["means"], p["sigmas"], p["sizes"])
        ]
    else:
        raise ValueError(f"unknown Gaussian family {family!r}; choose I, II or III")
    return _labelled(f"gaussian-{fam.lower()}", parts)


def gen_moon(n_per_class: int = 100, noise: float = 0.1, seed: int = 0) -> Dataset:
    """Two interleaving half circles of radius 1 with isotropic Gaussian noise.

    Class 1 lies on the upper half circle centred at the origin, class 2 on
    the lower half circle centred at ``(1, 0.5)``.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be positive")
    rng = np.random.default_rng(seed)
    theta = np.linspace(0.0, math.pi, n_per_class)
    upper = np.column_stack([np.cos(theta), np.sin(theta)])
    lower = np.column_stack([1.0 - np.cos(theta), 0.5 - np.sin(theta)])
    if noise > 0:
        upper = upper + rng.normal(0.0, noise, size=upper.shape)
        lower = lower + rng.normal(0.0, noise, size=lower.shape)
    return _labelled("moon", [upper, lower])


BANANA_SIZES = (2376, 2924)


def gen_banana(n_total: int = 5300, seed: int = 0, spread: float = 1.0, radius: float = 5.0) -> Dataset:
    """Two curved, interlocking arcs of radius ``radius`` blurred by Gaussian noise.

    Class sizes keep the 2376:2924 proportion of the reference Banana data.
    """
    if n_total < 2:
        raise ValueError("n_total must be at least 2")
    n1 = round(n_total * BANANA_SIZES[0] / sum(BANANA_SIZES))
    n1 = min(max(n1, 1), n_total - 1)
    n2 = n_total - n1
    rng = np.random.default_rng(seed)
    a = 0.125 * math.pi + rng.random(n1) * 1.25 * math.pi
    b = 0.375 * math.pi - rng.random(n2) * 1.25 * math.pi
    first = radius * np.column_stack([np.sin(a), np.cos(a)]) + rng.normal(0.0, spread, size=(n1, 2))
    second = (
        radius * np.column_stack([np.sin(b), np.cos(b)])
        + rng.normal(0.0, spread, size=(n2, 2))
        - 0.75 * radius
    )
    return _labelled("banana", [first, second])


def gen_balance() -> Dataset:
    """The balance-scale data: every weight/distance combination in 1..5.

    Features are left weight, left distance, right weight, right distance;
    classes are B (balanced), L and R (tips left/right), numbered 1..3 in
    that order.
    """
    rows, labels = [], []
    for lw, ld, rw, rd in itertools.product(range(1, 6), repeat=4):
        left, right = lw * ld, rw * rd
        rows.append((lw, ld, rw, rd))
        labels.append(1 if left == right else (2 if left > right else 3))
    return Dataset("balance", np.array(rows, dtype=float), np.array(labels), (1, 2, 3), ("B", "L", "R"))


GENERATORS = {
    "moon": lambda seed: gen_moon(seed=seed),
    "banana": lambda seed: gen_banana(seed=seed),
    "gaussian-i": lambda seed: gen_gaussian("I", seed),
    "gaussian-ii": lambda seed: gen_gaussian("II", seed),
    "gaussian-iii": lambda seed: gen_gaussian("III", seed),
    "balance": lambda seed: gen_balance(),
}


def generate(name: str, seed: int = 0) -> Dataset:
    try:
        return GENERATORS[name.lower()](seed)
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; choose one of {', '.join(GENERATORS)}") from None
