"""Command line runner for NMC/QNMC comparisons and rescaling sweeps."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .datagen import GENERATORS, DataError, RescaleGrid, SplitSpec, generate, load_csv, load_manifest
from .encoding import EncodingKind
from .experiment import CLASSIFIERS, ExperimentConfig, run_experiment, run_sweep
from .report import emit_report

log = logging.getLogger("qnmc")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qnmc",
        description="Compare the nearest mean classifier with its quantum-inspired counterpart.",
    )
    p.add_argument(
        "datasets",
        nargs="*",
        metavar="DATASET",
        help=f"CSV file, generator ({', '.join(GENERATORS)}) or, with --manifest, an entry name",
    )
    p.add_argument("--manifest", type=Path, help="run the datasets listed in this manifest CSV")
    p.add_argument("--encoding", default=EncodingKind.NORM_AUGMENTED.value,
                   choices=[k.value for k in EncodingKind])
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classifiers", default=",".join(CLASSIFIERS),
                   help="comma-separated subset of nmc,qnmc")
    p.add_argument("--rescale-min", type=float)
    p.add_argument("--rescale-max", type=float)
    p.add_argument("--rescale-step", type=float)
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out", type=Path, help="output file (default: standard output)")
    p.add_argument("--label-column", type=int, default=-1, help="label column of CSV inputs")
    p.add_argument("--header", action="store_true", help="CSV inputs start with a header line")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _grid(args) -> RescaleGrid | None:
    given = [args.rescale_min, args.rescale_max, args.rescale_step]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise ValueError("--rescale-min, --rescale-max and --rescale-step go together")
    return RescaleGrid(args.rescale_min, args.rescale_max, args.rescale_step)


def _datasets(args):
    if args.manifest is not None:
        entries = load_manifest(args.manifest)
        if args.datasets:
            by_name = {e.name: e for e in entries}
            missing = [n for n in args.datasets if n not in by_name]
            if missing:
                raise DataError(f"not in {args.manifest}: {', '.join(missing)}")
            entries = [by_name[n] for n in args.datasets]
        return [e.load(args.seed) for e in entries]
    if not args.datasets:
        raise ValueError("give at least one DATASET or --manifest")
    out = []
    for sel in args.datasets:
        if sel.lower() in GENERATORS and not Path(sel).exists():
            out.append(generate(sel, args.seed))
        else:
            out.append(load_csv(sel, args.label_column, args.header))
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        grid = _grid(args)
        config = ExperimentConfig(
            encoding=args.encoding,
            split=SplitSpec(args.train_frac, args.runs, args.seed),
            classifiers=tuple(c.strip() for c in args.classifiers.split(",") if c.strip()),
            rescale=grid,
        )
        results = []
        for ds in _datasets(args):
            log.info("dataset %s: %d patterns, d=%d, classes %s", ds.name, len(ds), ds.d, ds.class_counts)
            if grid is None:
                results.append(run_experiment(ds, config))
            else:
                results.append(run_sweep(ds, config, grid))
        text = emit_report(results, args.format, args.out)
    except (ValueError, OSError, RuntimeError) as exc:
        log.error("%s", exc)
        return 1
    if args.out is None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
