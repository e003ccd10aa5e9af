"""Text tables and CSV output for experiment and sweep results.

CSV schema, one row per (dataset, classifier, t, run)::

    dataset,classifier,encoding,run,t,E,TPR,TNR,FPR,FNR,P,K

Floats are written with ``repr`` so reading a file back gives the exact
in-memory values; undefined indices are written as ``nan``.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .experiment import ExperimentResult, SweepResult
from .metrics import INDEX_NAMES

CSV_COLUMNS = ("dataset", "classifier", "encoding", "run", "t") + INDEX_NAMES


@dataclass(frozen=True)
class CsvRow:
    dataset: str
    classifier: str
    encoding: str
    run: int
    t: float
    E: float
    TPR: float
    TNR: float
    FPR: float
    FNR: float
    P: float
    K: float

    def same_as(self, other: "CsvRow") -> bool:
        """Field-wise equality that treats two ``nan`` as equal."""
        for name in CSV_COLUMNS:
            a, b = getattr(self, name), getattr(other, name)
            if isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b):
                continue
            if a != b:
                return False
        return True


def _results(obj) -> list[ExperimentResult]:
    if isinstance(obj, ExperimentResult):
        return [obj]
    if isinstance(obj, SweepResult):
        return list(obj.points)
    out = []
    for item in obj:
        out.extend(_results(item))
    return out


def csv_rows(results) -> list[CsvRow]:
    rows = []
    for res in _results(results):
        for clf, rep in res.reports.items():
            for r, run in enumerate(rep.runs):
                ov = run.overall
                rows.append(
                    CsvRow(res.dataset, clf, res.encoding.value, r, res.t,
                           *(getattr(ov, n) for n in INDEX_NAMES))
                )
    return rows


def format_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in csv_rows(results):
        w.writerow([row.dataset, row.classifier, row.encoding, row.run, repr(row.t)]
                   + [repr(getattr(row, n)) for n in INDEX_NAMES])
    return buf.getvalue()


def read_csv(path) -> list[CsvRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            CsvRow(r["dataset"], r["classifier"], r["encoding"], int(r["run"]), float(r["t"]),
                   *(float(r[n]) for n in INDEX_NAMES))
            for r in reader
        ]


TABLE_INDICES = ("E", "TPR", "TNR", "P", "K")


def _pm(mean: float, std: float) -> str:
    if math.isnan(mean):
        return "n/a"
    return f"{mean:.3f} ± {std:.3f}"


def format_table(results) -> str:
    """Aligned table of mean ± std per (dataset, classifier[, t])."""
    results = _results(results)
    show_t = any(r.t != 1.0 for r in results)
    header = ["Dataset", "Classifier"] + (["t"] if show_t else []) + list(TABLE_INDICES)
    body = []
    for res in results:
        for clf, rep in res.reports.items():
            cells = [res.dataset, clf.upper()] + ([f"{res.t:g}"] if show_t else [])
            cells += [_pm(getattr(rep.mean, n), getattr(rep.std, n)) for n in TABLE_INDICES]
            body.append(cells)
    widths = [max(len(str(row[i])) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render(results, fmt: str) -> str:
    if fmt == "csv":
        return format_csv(results)
    if fmt == "table":
        return format_table(results)
    raise ValueError(f"unknown format {fmt!r}; choose table or csv")


def emit_report(results: Iterable, fmt: str, path=None) -> str:
    """Render ``results`` and write them to ``path`` atomically (or return the text only)."""
    text = render(results, fmt)
    if path is not None:
        path = Path(path)
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text
