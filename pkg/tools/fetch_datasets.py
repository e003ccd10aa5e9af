"""Populate data/ with the benchmark datasets used by the acceptance suite.

The UCI mirror is not always reachable, so the files are taken from Python
packages on PyPI that vendor them:

* ionosphere           Orange3 test fixtures (full precision UCI copy)
* breast-cancer-i/ii   pydataset's copy of MASS::biopsy
* pima, bands, banana, tic-tac-toe   keel_ds raw files
* balance              regenerated from its defining rule

Usage::

    python tools/fetch_datasets.py [--cache DIR] [--out data]
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import subprocess
import sys
import tarfile
import tempfile
import zipfile
from pathlib import Path

log = logging.getLogger("fetch_datasets")

PACKAGES = {
    "orange3": "orange3==3.39.0",
    "pydataset": "pydataset==0.2.0",
    "keel_ds": "keel_ds==0.2.5",
}


def _download(spec: str, dest: Path) -> Path:
    name = spec.split("==")[0]
    hits = [p for p in dest.iterdir() if p.name.lower().startswith(name.lower() + "-")]
    if not hits:
        log.info("downloading %s", spec)
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps",
             "-d", str(dest), spec],
            check=True,
            stdout=subprocess.DEVNULL,
        )
        hits = [p for p in dest.iterdir() if p.name.lower().startswith(name.lower() + "-")]
    archives = [p for p in hits if p.suffix in {".whl", ".gz"}]
    if not archives:
        raise FileNotFoundError(f"no archive for {spec} in {dest}")
    return archives[0]


def _member(archive: Path, suffix: str) -> str:
    if archive.suffix == ".whl":
        with zipfile.ZipFile(archive) as z:
            name = next(n for n in z.namelist() if n.endswith(suffix))
            return z.read(name).decode("utf-8")
    with tarfile.open(archive) as outer:
        for m in outer.getmembers():
            if m.name.endswith(suffix):
                return outer.extractfile(m).read().decode("utf-8")
            if m.name.endswith("resources.tar.gz"):
                inner = tarfile.open(fileobj=io.BytesIO(outer.extractfile(m).read()))
                for n in inner.getmembers():
                    if n.name.endswith(suffix):
                        return inner.extractfile(n).read().decode("utf-8")
    raise FileNotFoundError(f"{suffix} not found in {archive}")


def _write(path: Path, rows) -> int:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        n = 0
        for r in rows:
            w.writerow(r)
            n += 1
    log.info("wrote %s (%d rows)", path, n)
    return n


def ionosphere(text: str):
    lines = text.splitlines()[3:]
    for line in lines:
        cells = line.split("\t")
        if len(cells) == 35:
            yield [c.strip() for c in cells]


def biopsy(text: str, complete_only: bool, with_id: bool):
    reader = csv.DictReader(io.StringIO(text))
    for r in reader:
        values = [r[f"V{k}"] for k in range(1, 10)]
        if "NA" in values:
            if complete_only:
                continue
            # the only gaps are in V6, whose median is 1
            values = ["1" if v == "NA" else v for v in values]
        yield ([r["ID"]] if with_id else []) + values + [r["class"]]


def keel(text: str, coding: dict | None = None):
    for line in text.splitlines():
        cells = [c.strip() for c in line.split(",")]
        if len(cells) < 2:
            continue
        if coding:
            cells = [coding.get(c, c) for c in cells[:-1]] + cells[-1:]
        yield cells


def balance():
    from qnmc.datagen import gen_balance

    ds = gen_balance()
    for x, lab in zip(ds.X.astype(int).tolist(), ds.y.tolist()):
        yield [str(v) for v in x] + [ds.label_names[lab - 1]]


MANIFEST = [
    ("BreastCancer-I", "breast-cancer-i.csv"),
    ("BreastCancer-II", "breast-cancer-ii.csv"),
    ("Balance", "balance.csv"),
    ("Banana", "banana.csv"),
    ("Bands", "bands.csv"),
    ("Ionosphere", "ionosphere.csv"),
    ("Pima", "pima.csv"),
    ("TicTac", "tictac.csv"),
    ("Moon", "generator:moon"),
    ("Gaussian-I", "generator:gaussian-i"),
    ("Gaussian-II", "generator:gaussian-ii"),
    ("Gaussian-III", "generator:gaussian-iii"),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cache", type=Path, help="directory holding (or receiving) the downloaded archives")
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)

    args.out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        cache = args.cache or Path(tmp)
        cache.mkdir(parents=True, exist_ok=True)
        arch = {k: _download(v, cache) for k, v in PACKAGES.items()}

        _write(args.out / "ionosphere.csv", ionosphere(_member(arch["orange3"], "datasets/ionosphere.tab")))
        bio = _member(arch["pydataset"], "MASS/biopsy.csv")
        _write(args.out / "breast-cancer-i.csv", biopsy(bio, complete_only=True, with_id=True))
        _write(args.out / "breast-cancer-ii.csv", biopsy(bio, complete_only=False, with_id=False))
        for name, member, coding in [
            ("pima", "balanced/raw/pima.dat", None),
            ("bands", "balanced/raw/bands.dat", None),
            ("banana", "balanced/raw/banana.dat", None),
            ("tictac", "balanced/raw/tic-tac-toe.dat", {"b": "1", "o": "2", "x": "3"}),
        ]:
            _write(args.out / f"{name}.csv", keel(_member(arch["keel_ds"], member), coding))
    _write(args.out / "balance.csv", balance())
    _write(args.out / "manifest.csv",
           [("name", "path", "label_column", "header")] + [(n, p, -1, "false") for n, p in MANIFEST])
    return 0


if __name__ == "__main__":
    sys.exit(main())
