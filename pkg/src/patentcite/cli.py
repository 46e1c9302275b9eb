"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import analytics, evaluation, synthgen
from .classifiers import (
    MODEL_TYPES,
    ForestConfig,
    LogisticConfig,
    ModelError,
    NBConfig,
    TreeConfig,
    deserialize_model,
    fit_model,
    predict,
    predict_proba,
    serialize_model,
)
from .dataset import (
    NULL_POLICIES,
    CleanConfig,
    DataError,
    load_dataset,
    parse_records,
    clean,
    write_dataset_csv,
    write_records_csv,
)

logger = logging.getLogger("patentcite")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common(p, top=False):
    default = 0 if top else argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    p.add_argument("--log-level", default="WARNING" if top else argparse.SUPPRESS,
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"])


def _cleaning(p):
    p.add_argument("--format", choices=["csv", "jsonl"], default=None,
                   help="input format (default: from file extension)")
    p.add_argument("--min-year", type=int, default=2010,
                   help="keep records published strictly after this year")
    p.add_argument("--sparse-threshold", type=float, default=0.5,
                   help="drop a source whose null fraction exceeds this")
    p.add_argument("--null-policy", choices=NULL_POLICIES, default="treat-as-zero")


def _hyper(p):
    g = p.add_argument_group("model hyperparameters")
    g.add_argument("--learning-rate", type=float, default=LogisticConfig.learning_rate)
    g.add_argument("--l2", type=float, default=LogisticConfig.l2)
    g.add_argument("--max-iters", type=int, default=LogisticConfig.max_iters)
    g.add_argument("--tolerance", type=float, default=LogisticConfig.tolerance)
    g.add_argument("--transform", choices=["none", "log1p"], default=LogisticConfig.transform)
    g.add_argument("--max-depth", type=int, default=12,
                   help="tree depth cap; a negative value means unlimited")
    g.add_argument("--min-samples-split", type=int, default=2)
    g.add_argument("--min-impurity-decrease", type=float, default=0.0)
    g.add_argument("--variance-floor", type=float, default=NBConfig.variance_floor)
    g.add_argument("--trees", type=int, default=ForestConfig.n_trees)
    g.add_argument("--features-per-split", type=int, default=None)
    g.add_argument("--no-bootstrap", action="store_true")
    g.add_argument("--jobs", type=int, default=1, help="threads for forest training")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patentcite",
                     description="Predict patent citations of articles from altmetric counts.")
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("ingest", help="parse and clean a raw record file")
    _common(p)
    _cleaning(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out", help="cleaned CSV")
    p.add_argument("--report-json", help="write the clean report as JSON")

    p = sub.add_parser("stats", help="correlation matrix, class balance, citation cohort")
    _common(p)
    _cleaning(p)
    p.add_argument("--data", required=True)
    p.add_argument("--threshold", type=int, default=100,
                   help="paper-citation threshold (strictly greater than)")
    p.add_argument("--heatmap", help="long-format correlation CSV output")
    p.add_argument("--log1p", action="store_true", help="correlate log(1+x) counts")

    p = sub.add_parser("train", help="fit one model and write a model file")
    _common(p)
    _cleaning(p)
    _hyper(p)
    p.add_argument("--data", required=True)
    p.add_argument("--model", choices=MODEL_TYPES, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="score a model file on a dataset")
    _common(p)
    _cleaning(p)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", help="metrics JSON")

    p = sub.add_parser("benchmark", help="fit and compare all four models")
    _common(p)
    _cleaning(p)
    _hyper(p)
    p.add_argument("--data", required=True)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--out", help="report CSV")

    p = sub.add_parser("predict", help="label records with a trained model")
    _common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="CSV with the model's feature columns, or -")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", help="predictions CSV")

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    _common(p)
    p.add_argument("--n", type=int, default=synthgen.SynthConfig.n_records)
    p.add_argument("--signal", type=float, default=synthgen.SynthConfig.signal_strength)
    p.add_argument("--positive-fraction", type=float,
                   default=synthgen.SynthConfig.positive_fraction)
    p.add_argument("--citation-link", type=float, default=synthgen.SynthConfig.citation_link)
    p.add_argument("--out", required=True)
    return parser


def _clean_config(args) -> CleanConfig:
    return CleanConfig(
        min_year_exclusive=args.min_year,
        sparse_null_fraction=args.sparse_threshold,
        null_count_policy=args.null_policy,
    )


def _model_configs(args) -> dict:
    depth = None if args.max_depth < 0 else args.max_depth
    return {
        "lr": LogisticConfig(args.learning_rate, args.l2, args.max_iters,
                             args.tolerance, args.transform),
        "dt": TreeConfig(depth, args.min_samples_split, args.min_impurity_decrease),
        "nb": NBConfig(args.variance_floor),
        "rf": ForestConfig(
            n_trees=args.trees,
            features_per_split=args.features_per_split,
            bootstrap=not args.no_bootstrap,
            seed=args.seed,
            max_depth=depth,
            min_samples_split=args.min_samples_split,
            min_impurity_decrease=args.min_impurity_decrease,
            n_jobs=args.jobs,
        ),
    }


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror}") from None


def cmd_ingest(args, out):
    records = parse_records(args.input, args.format)
    dataset, report = clean(records, _clean_config(args))
    print(report.to_text(), file=out)
    if args.out:
        write_dataset_csv(dataset, args.out)
    if args.report_json:
        _write_text(args.report_json, report.to_json() + "\n")


def cmd_stats(args, out):
    dataset, _ = load_dataset(args.data, args.format, _clean_config(args))
    matrix = analytics.correlation_matrix(dataset, log1p=args.log1p)
    pos, neg = analytics.class_balance(dataset)
    cohort = analytics.citation_threshold_analysis(dataset, args.threshold)
    kind = "log1p counts" if args.log1p else "raw counts"
    print(f"correlation matrix (Pearson, {kind})", file=out)
    print(matrix.to_text(), file=out)
    print(f"\nclass balance: {pos} cited by patents, {neg} not cited", file=out)
    print(cohort.to_text(), file=out)
    if args.heatmap:
        analytics.emit_heatmap_data(matrix, args.heatmap)


def cmd_train(args, out):
    dataset, _ = load_dataset(args.data, args.format, _clean_config(args))
    config = _model_configs(args)[args.model]
    model = fit_model(args.model, dataset, config)
    serialize_model(model, args.out)
    print(f"trained {args.model} on {len(dataset)} rows -> {args.out}", file=out)


def cmd_evaluate(args, out):
    model = deserialize_model(args.model)
    dataset, _ = load_dataset(args.data, args.format, _clean_config(args))
    m = evaluation.evaluate_model(model, dataset, args.threshold)
    print(f"model {model.model_type} on {len(dataset)} rows", file=out)
    for label, attr in evaluation.METRIC_ROWS:
        print(f"{label:<10}{getattr(m, attr):.4f}", file=out)
    if args.out:
        _write_text(args.out, json.dumps(
            {"model_type": model.model_type, "rows": len(dataset),
             "accuracy": m.accuracy, "precision": m.precision,
             "recall": m.recall, "f1": m.f1}, sort_keys=True) + "\n")


def cmd_benchmark(args, out):
    dataset, _ = load_dataset(args.data, args.format, _clean_config(args))
    table = evaluation.benchmark_all(
        dataset, _model_configs(args), args.test_fraction, args.seed, name=str(args.data)
    )
    print(evaluation.format_report(table, "text"), end="", file=out)
    if args.out:
        _write_text(args.out, evaluation.format_report(table, "csv"))


def _read_predict_rows(model, fh):
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        raise DataError("prediction input is empty")
    header = [h.strip() for h in header]
    missing = [f for f in model.feature_names if f not in header]
    if missing:
        raise ModelError(evaluation.schema_diff(
            model.feature_names, [h for h in header if h != "id"]))
    cols = [header.index(f) for f in model.feature_names]
    id_col = header.index("id") if "id" in header else None
    ids, rows = [], []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        values = []
        for c in cols:
            cell = row[c].strip()
            try:
                v = float(cell) if cell else 0.0
            except ValueError:
                raise DataError(f"line {line}: {header[c]}={cell!r} is not a number") from None
            if v < 0:
                raise DataError(f"line {line}: {header[c]}={cell} is negative")
            values.append(v)
        ids.append(row[id_col] if id_col is not None else str(len(ids) + 1))
        rows.append(values)
    return ids, np.array(rows, dtype=np.float64).reshape(len(rows), len(cols))


def cmd_predict(args, out):
    model = deserialize_model(args.model)
    if args.input == "-":
        ids, X = _read_predict_rows(model, sys.stdin)
    else:
        try:
            fh = open(args.input, newline="", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read {args.input}: {exc.strerror}") from None
        with fh:
            ids, X = _read_predict_rows(model, fh)
    lines = ["id,probability,label"]
    if len(X):
        proba = predict_proba(model, X)
        labels = predict(model, X, args.threshold)
        lines += [f"{i},{p:.6f},{y}" for i, p, y in zip(ids, proba, labels)]
    text = "\n".join(lines) + "\n"
    print(text, end="", file=out)
    if args.out:
        _write_text(args.out, text)


def cmd_synth(args, out):
    config = synthgen.SynthConfig(
        n_records=args.n,
        positive_fraction=args.positive_fraction,
        signal_strength=args.signal,
        citation_link=args.citation_link,
        seed=args.seed,
    )
    records = synthgen.generate_records(config)
    write_records_csv(records, args.out)
    pos = sum(1 for r in records if r.patent_citations)
    print(f"wrote {len(records)} records ({pos} cited by patents) -> {args.out}", file=out)


COMMANDS = {
    "ingest": cmd_ingest,
    "stats": cmd_stats,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "benchmark": cmd_benchmark,
    "predict": cmd_predict,
    "synth": cmd_synth,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args, out)
    except (DataError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # config validation failures are usage errors
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
