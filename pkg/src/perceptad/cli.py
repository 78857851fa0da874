"""Command-line entry point: ``perceptad <command> ...``.

Exit status is 0 whenever a command ran, whatever it detected; 1 signals an
input, model or I/O problem and 2 a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import baselines, evaluation, plotdata, stream
from . import model as pmodel
from .io import read_stream, read_table
from .preprocess import METRICS

log = logging.getLogger("perceptad")


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _format_rows(scores, flags, fmt: str) -> str:
    scores = np.asarray(scores, dtype=float).tolist()
    flags = np.asarray(flags, dtype=bool).tolist()
    if fmt == "json":
        rows = [{"index": i, "score": s, "flag": f} for i, (s, f) in enumerate(zip(scores, flags))]
        return json.dumps(rows) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "score", "flag"])
    for i, (s, f) in enumerate(zip(scores, flags)):
        w.writerow([i, repr(s), int(f)])
    return buf.getvalue()


def cmd_fit(args) -> int:
    table = read_table(args.input, args.label_column)
    m = pmodel.fit(table.X, acc=args.acc, metric=args.metric)
    pmodel.save(m, args.model)
    print(f"S={m.S} W={m.W} dim={m.dim} med={m.center.med} "
          f"scale_exponent={m.integerization.scale_exponent}")
    return 0


def cmd_predict(args) -> int:
    m = pmodel.load(args.model)
    table = read_table(args.input, args.label_column)
    if table.n_rows == 0:
        p = pmodel.Predictions(np.zeros(0))
    else:
        p = pmodel.predict(m, table.X)
    _emit(_format_rows(p.scores, p.flags, args.format), args.output)
    return 0


def cmd_stream(args) -> int:
    d = read_stream(args.input)
    L = args.window
    lines = []
    if args.train_windows is not None:
        if args.mode != "adjacent":
            raise ValueError("incremental ingest uses adjacent windows; drop --mode sliding")
        cut = args.train_windows * L
        det = stream.StreamDetector.from_windowing(stream.window_counts(d[:cut], L))
        alerts = det.ingest_stream(d[cut:], offset=cut)
        log.info("final state S=%d W=%d", det.S, det.W)
    else:
        S, W = stream.fit_stream(stream.window_counts(d, L))
        if args.mode == "sliding":
            alerts = stream.sliding_alerts(stream.window_counts(d, L, "sliding"), S, W)
        else:
            wins = stream.window_counts(d, L)
            alerts = []
            for i, n in enumerate(wins.window_sums.tolist()):
                a = stream.test_window(S, W, n, i, wins.span(i))
                if a is not None:
                    alerts.append(a)
    for a in alerts:
        lines.append(json.dumps(a.to_json()) + "\n")
    _emit("".join(lines), args.output)
    return 0


def cmd_baseline(args) -> int:
    table = read_table(args.input, args.label_column)
    if table.X.shape[1] != 1:
        raise ValueError(f"baselines need one numeric column, got {table.X.shape[1]}")
    det = baselines.BASELINES[args.method].fit(table.X[:, 0]).predict(table.X[:, 0])
    _emit(_format_rows(det.scores, det.flags, args.format), args.output)
    return 0


def cmd_bench(args) -> int:
    specs = evaluation.read_manifest(args.manifest)
    names = args.detectors.split(",")
    unknown = [n for n in names if n not in evaluation.DETECTORS]
    if unknown:
        raise ValueError(f"unknown detectors: {', '.join(unknown)}")
    detectors = {n: evaluation.DETECTORS[n] for n in names}
    reports = evaluation.run_benchmark(specs, detectors, args.time_budget, not args.no_warmup)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    evaluation.write_report_csv(reports, out / "report.csv")
    evaluation.write_report_json(reports, out / "report.json")
    for r in reports:
        print(f"{r.dataset:>16} {r.detector:>16}  P={r.precision:.3f} R={r.recall:.3f} "
              f"F1={r.f1:.3f} AUC={r.auc:.3f} t={r.runtime:.4f}s  {r.status}")
    return 0


def cmd_plotdata(args) -> int:
    table = read_table(args.input, args.label_column)
    if table.X.shape[1] != 1:
        raise ValueError(f"plot data needs one numeric column, got {table.X.shape[1]}")
    doc = plotdata.plot_data(table.X[:, 0], acc=args.acc, bins=args.bins)
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def _bins(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perceptad", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def table_args(sp):
        sp.add_argument("input", help="CSV file, or - for stdin")
        sp.add_argument("--label-column", help="column name or index to exclude as labels")

    def output_args(sp, formats=True):
        sp.add_argument("-o", "--output", help="write here instead of stdout")
        if formats:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("fit", help="fit a perception model and save it")
    table_args(sp)
    sp.add_argument("-m", "--model", required=True, help="model document to write")
    sp.add_argument("--acc", type=int, default=4, help="decimal places kept (default 4)")
    sp.add_argument("--metric", choices=METRICS, default="euclidean")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("predict", help="score rows with a saved model")
    table_args(sp)
    sp.add_argument("-m", "--model", required=True)
    output_args(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("stream", help="window a 0/1 stream and emit JSON-lines alerts")
    sp.add_argument("input", help="one 0/1 token per line, or - for stdin")
    sp.add_argument("-L", "--window", type=int, required=True, help="window length")
    sp.add_argument("--mode", choices=("adjacent", "sliding"), default="adjacent")
    sp.add_argument("--train-windows", type=int,
                    help="fit on this many leading windows, then ingest the rest one by one")
    output_args(sp, formats=False)
    sp.set_defaults(func=cmd_stream)

    sp = sub.add_parser("baseline", help="run a classical outlier rule")
    table_args(sp)
    sp.add_argument("--method", choices=sorted(baselines.BASELINES), required=True)
    output_args(sp)
    sp.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("bench", help="evaluate detectors over a dataset manifest")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--out-dir", default="bench-report")
    sp.add_argument("--detectors", default="perception",
                    help=f"comma-separated subset of {','.join(evaluation.DETECTORS)}")
    sp.add_argument("--time-budget", type=float, help="seconds per detector and dataset")
    sp.add_argument("--no-warmup", action="store_true")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("plotdata", help="histogram and detector thresholds as JSON")
    table_args(sp)
    sp.add_argument("--acc", type=int, default=4)
    sp.add_argument("--bins", type=_bins, default="auto")
    output_args(sp, formats=False)
    sp.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "acc", 1) < 1:
        log.error("--acc must be >= 1")
        return 1
    if getattr(args, "window", 1) < 1:
        log.error("--window must be >= 1")
        return 1
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
