"""Repeated-holdout comparison of NMC and QNMC, and the rescaling sweep."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

import numpy as np

from .classifier import fit_nmc, fit_qnmc, predict_nmc, predict_qnmc
from .datagen import Dataset, RescaleGrid, SplitSpec, rescale, split_indices
from .encoding import EncodingError, EncodingKind, encode_matrix
from .metrics import EvaluationReport, score, summarize_runs

log = logging.getLogger(__name__)

CLASSIFIERS = ("nmc", "qnmc")


@dataclass(frozen=True)
class ExperimentConfig:
    encoding: EncodingKind = EncodingKind.NORM_AUGMENTED
    split: SplitSpec = field(default_factory=SplitSpec)
    classifiers: tuple = CLASSIFIERS
    rescale: RescaleGrid | None = None

    def __post_init__(self):
        object.__setattr__(self, "encoding", EncodingKind.parse(self.encoding))
        chosen = tuple(c.lower() for c in self.classifiers)
        if not chosen:
            raise ValueError("select at least one classifier")
        bad = [c for c in chosen if c not in CLASSIFIERS]
        if bad:
            raise ValueError(f"unknown classifiers {bad}; choose from {CLASSIFIERS}")
        # fixed order keeps reports independent of how the selection was spelled
        object.__setattr__(self, "classifiers", tuple(c for c in CLASSIFIERS if c in chosen))


@dataclass(frozen=True)
class ExperimentResult:
    dataset: str
    encoding: EncodingKind
    t: float
    reports: dict  # classifier -> EvaluationReport
    predictions: dict  # classifier -> tuple of per-run label arrays
    test_rows: tuple  # per-run source rows of the test fold


def _encode(dataset: Dataset, kind: EncodingKind) -> np.ndarray:
    try:
        return encode_matrix(dataset.X, kind)
    except EncodingError as exc:
        m = re.match(r"row (\d+): (.*)", str(exc))
        if m:
            row = int(dataset.rows[int(m.group(1))])
            raise EncodingError(f"{dataset.name}: source row {row}: {m.group(2)}") from exc
        raise EncodingError(f"{dataset.name}: {exc}") from exc


def run_experiment(dataset: Dataset, config: ExperimentConfig = ExperimentConfig(), t: float = 1.0) -> ExperimentResult:
    """Split, train and score every selected classifier over ``config.split.runs`` runs.

    Both classifiers see the same partition in every run; NMC works on the
    raw features, QNMC on their encodings. ``t`` only labels the result; the
    caller rescales beforehand.
    """
    spec = config.split
    X, y = dataset.X, dataset.y
    states = _encode(dataset, config.encoding) if "qnmc" in config.classifiers else None
    scores = {c: [] for c in config.classifiers}
    preds = {c: [] for c in config.classifiers}
    test_rows = []
    for r in range(spec.runs):
        tr, ts = split_indices(len(dataset), spec, r)
        test_rows.append(dataset.rows[ts])
        for clf in config.classifiers:
            if clf == "nmc":
                model = fit_nmc(X[tr], y[tr], dataset.classes)
                pred = predict_nmc(model, X[ts])
            else:
                model = fit_qnmc(states[tr], y[tr], dataset.classes, config.encoding)
                pred = predict_qnmc(model, states[ts])
            preds[clf].append(pred)
            scores[clf].append(score(y[ts], pred, dataset.classes))
        log.debug("%s t=%g run %d done", dataset.name, t, r)
    reports = {c: summarize_runs(s) for c, s in scores.items()}
    for c, rep in reports.items():
        log.info("%s t=%g %s: E = %.3f +- %.3f", dataset.name, t, c, rep.mean.E, rep.std.E)
    return ExperimentResult(
        dataset.name,
        config.encoding,
        float(t),
        reports,
        {c: tuple(p) for c, p in preds.items()},
        tuple(test_rows),
    )


@dataclass(frozen=True)
class SweepResult:
    dataset: str
    points: tuple  # ExperimentResult per t, in grid order

    @property
    def ts(self) -> list[float]:
        return [p.t for p in self.points]

    def errors(self, classifier: str) -> tuple[np.ndarray, np.ndarray]:
        """Mean and standard deviation of E at every grid point."""
        reps = [p.reports[classifier] for p in self.points]
        return np.array([r.mean.E for r in reps]), np.array([r.std.E for r in reps])

    def labels_constant(self, classifier: str) -> bool:
        """True iff ``classifier`` predicted identical label sequences at every t."""
        if not self.points:
            return True
        first = self.points[0].predictions[classifier]
        return all(
            all(np.array_equal(a, b) for a, b in zip(first, p.predictions[classifier]))
            for p in self.points[1:]
        )


def run_sweep(dataset: Dataset, config: ExperimentConfig, grid: RescaleGrid | None = None) -> SweepResult:
    """Rerun the full protocol on ``t * dataset`` for every t of the grid.

    The whole dataset is rescaled before splitting, and split ``r`` depends
    only on ``(seed, r)``, so every t sees the same partitions.
    """
    grid = grid or config.rescale
    if grid is None:
        raise ValueError("a rescaling grid is required for a sweep")
    points = []
    for t in grid.values:
        points.append(run_experiment(rescale(dataset, t), config, t))
    return SweepResult(dataset.name, tuple(points))


def summary(result: ExperimentResult, classifier: str) -> EvaluationReport:
    return result.reports[classifier]
