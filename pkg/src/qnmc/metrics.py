"""One-vs-rest confusion counts and the derived statistical indices.

Undefined indices (zero denominators) are ``nan``. They are dropped from
weighted aggregates, and the remaining weights are renormalised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

INDEX_NAMES = ("E", "TPR", "TNR", "FPR", "FNR", "P", "K")


@dataclass(frozen=True)
class ConfusionCounts:
    classes: tuple
    tp: tuple
    tn: tuple
    fp: tuple
    fn: tuple
    test_size: int

    def counts(self, label) -> tuple[int, int, int, int]:
        """``(TP, TN, FP, FN)`` for one class."""
        i = self.classes.index(label)
        return self.tp[i], self.tn[i], self.fp[i], self.fn[i]

    def support(self, label) -> int:
        i = self.classes.index(label)
        return self.tp[i] + self.fn[i]


@dataclass(frozen=True)
class ClassIndices:
    E: float
    TPR: float
    TNR: float
    FPR: float
    FNR: float
    P: float
    K: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_values(cls, values) -> "ClassIndices":
        return cls(*(float(v) for v in values))

    def values(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in INDEX_NAMES], dtype=float)


def confusion(true_labels, predicted_labels, classes) -> ConfusionCounts:
    true_labels = list(true_labels)
    predicted_labels = list(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise ValueError(f"{len(true_labels)} true labels but {len(predicted_labels)} predictions")
    if not true_labels:
        raise ValueError("cannot score an empty test set")
    classes = tuple(sorted(classes))
    known = set(classes)
    for name, seq in (("true", true_labels), ("predicted", predicted_labels)):
        for i, lab in enumerate(seq):
            if lab not in known:
                raise ValueError(f"{name} label {lab!r} at position {i} is not in classes {classes}")
    t = np.array(true_labels, dtype=object)
    p = np.array(predicted_labels, dtype=object)
    tp, tn, fp, fn = [], [], [], []
    for c in classes:
        is_t = t == c
        is_p = p == c
        tp.append(int(np.sum(is_t & is_p)))
        tn.append(int(np.sum(~is_t & ~is_p)))
        fp.append(int(np.sum(~is_t & is_p)))
        fn.append(int(np.sum(is_t & ~is_p)))
    return ConfusionCounts(classes, tuple(tp), tuple(tn), tuple(fp), tuple(fn), len(t))


def _ratio(num: float, den: float) -> float:
    return num / den if den else math.nan


def class_indices(c: ConfusionCounts, label) -> ClassIndices:
    """Rates for one class.

    ``E`` here is ``1 - TP / n_test`` taken literally per class; the
    aggregate classification error is built differently, see :func:`aggregate`.

    >>> cc = ConfusionCounts((1, 2), (8, 7), (7, 8), (3, 2), (2, 3), 20)
    >>> class_indices(cc, 1).K
    0.5
    """
    tp, tn, fp, fn = c.counts(label)
    n = c.test_size
    tpr = _ratio(tp, tp + fn)
    tnr = _ratio(tn, tn + fp)
    fpr = 1.0 - tnr
    fnr = 1.0 - tpr
    pr_a = (tp + tn) / n
    pr_e = ((tp + fp) * (tp + fn) + (fp + tn) * (tn + fn)) / (n * n)
    kappa = _ratio(pr_a - pr_e, 1.0 - pr_e)
    return ClassIndices(
        E=1.0 - tp / n, TPR=tpr, TNR=tnr, FPR=fpr, FNR=fnr, P=_ratio(tp, tp + fp), K=kappa
    )


def _weighted(values: np.ndarray, weights: np.ndarray) -> float:
    ok = ~np.isnan(values) & (weights > 0)
    if not ok.any():
        return math.nan
    w = weights[ok]
    return float(np.sum(w * values[ok]) / np.sum(w))


def aggregate(per_class: Sequence[ClassIndices], test_class_sizes: Sequence[float]) -> ClassIndices:
    """Weighted mean of per-class indices, weights proportional to class test counts.

    The aggregate ``E`` is the overall misclassification rate, computed as
    ``1 - sum_l w_l TPR_l`` (which equals ``sum_l w_l FNR_l``).
    """
    if len(per_class) != len(test_class_sizes):
        raise ValueError(f"{len(per_class)} classes but {len(test_class_sizes)} sizes")
    if not per_class:
        raise ValueError("nothing to aggregate")
    w = np.asarray(test_class_sizes, dtype=float)
    if np.any(w < 0) or w.sum() <= 0:
        raise ValueError("class sizes must be non-negative with a positive total")
    table = np.vstack([ci.values() for ci in per_class])
    out = {name: _weighted(table[:, j], w) for j, name in enumerate(INDEX_NAMES)}
    out["E"] = 1.0 - out["TPR"]
    return ClassIndices(**out)


def misclassification_rate(true_labels, predicted_labels) -> float:
    t = np.asarray(list(true_labels), dtype=object)
    p = np.asarray(list(predicted_labels), dtype=object)
    return float(np.mean(t != p))


@dataclass(frozen=True)
class RunScore:
    counts: ConfusionCounts
    per_class: dict
    overall: ClassIndices


def score(true_labels, predicted_labels, classes) -> RunScore:
    """Confusion counts, per-class indices and their weighted aggregate for one run."""
    c = confusion(true_labels, predicted_labels, classes)
    per_class = {lab: class_indices(c, lab) for lab in c.classes}
    sizes = [c.support(lab) for lab in c.classes]
    return RunScore(c, per_class, aggregate(list(per_class.values()), sizes))


@dataclass(frozen=True)
class EvaluationReport:
    runs: tuple  # RunScore per run
    mean: ClassIndices
    std: ClassIndices
    per_class_mean: dict
    per_class_std: dict
    single_run: bool  # std is 0 by convention, not measured


def _mean_std(table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = np.full(table.shape[1], math.nan)
    std = np.zeros(table.shape[1])
    for j in range(table.shape[1]):
        col = table[:, j][~np.isnan(table[:, j])]
        if col.size:
            mean[j] = col.mean()
        if col.size > 1:
            std[j] = col.std(ddof=1)
    return mean, std


def summarize_runs(per_run: Sequence[RunScore]) -> EvaluationReport:
    """Sample mean and standard deviation (n - 1 denominator) of every index over runs."""
    per_run = tuple(per_run)
    if not per_run:
        raise ValueError("need at least one run")
    mean, std = _mean_std(np.vstack([r.overall.values() for r in per_run]))
    labels = sorted({lab for r in per_run for lab in r.per_class})
    pc_mean, pc_std = {}, {}
    for lab in labels:
        rows = [r.per_class[lab].values() for r in per_run if lab in r.per_class]
        m, s = _mean_std(np.vstack(rows))
        pc_mean[lab] = ClassIndices.from_values(m)
        pc_std[lab] = ClassIndices.from_values(s)
    return EvaluationReport(
        runs=per_run,
        mean=ClassIndices.from_values(mean),
        std=ClassIndices.from_values(std),
        per_class_mean=pc_mean,
        per_class_std=pc_std,
        single_run=len(per_run) == 1,
    )
