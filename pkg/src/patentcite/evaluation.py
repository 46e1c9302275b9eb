"""Hold-out evaluation and the four-model comparison table."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional

import numpy as np

from .classifiers import MODEL_TYPES, TrainedModel, fit_model, predict
from .classifiers.model import ModelError
from .dataset import DataError, Dataset

MODEL_COLUMNS = ("LR", "DT", "NB", "RF")
METRIC_ROWS = (("Accuracy", "accuracy"), ("F1-score", "f1"),
               ("Precision", "precision"), ("Recall", "recall"))


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ReportTable:
    metrics: dict                      # column name -> EvalMetrics
    test_fraction: Optional[float] = None
    seed: Optional[int] = None
    n_train: Optional[int] = None
    n_test: Optional[int] = None
    dataset: str = ""
    notes: tuple = field(default_factory=tuple)


def stratified_split(dataset: Dataset, test_fraction: float = 0.2, seed: int = 0):
    """Per-class seeded shuffle; ``round(class_count * test_fraction)`` rows
    of each class (half rounded up) go to the test side."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    test_rows = []
    for cls in (0, 1):
        rows = np.flatnonzero(dataset.labels == cls)
        n_test = math.floor(len(rows) * test_fraction + 0.5)
        if n_test < 1 or n_test > len(rows) - 1:
            raise DataError(
                f"class {cls} has {len(rows)} rows; cannot put at least one on each side"
            )
        test_rows.append(rng.permutation(rows)[:n_test])
    test_idx = np.sort(np.concatenate(test_rows))
    train_mask = np.ones(len(dataset), dtype=bool)
    train_mask[test_idx] = False
    return dataset.subset(np.flatnonzero(train_mask)), dataset.subset(test_idx)


def confusion(y_true, y_pred) -> ConfusionMatrix:
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError("y_true and y_pred must be 1-d and of equal length")
    if len(t) == 0:
        raise ValueError("cannot score an empty prediction set")
    if not (np.isin(t, (0, 1)).all() and np.isin(p, (0, 1)).all()):
        raise ValueError("labels must be 0 or 1")
    return ConfusionMatrix(
        tp=int(np.sum((t == 1) & (p == 1))),
        fp=int(np.sum((t == 0) & (p == 1))),
        fn=int(np.sum((t == 1) & (p == 0))),
        tn=int(np.sum((t == 0) & (p == 0))),
    )


def metrics(cm: ConfusionMatrix) -> EvalMetrics:
    """Positive-class metrics; any 0/0 ratio is reported as 0."""
    if cm.total <= 0:
        raise ValueError("confusion matrix is empty")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EvalMetrics(accuracy, precision, recall, f1)


def evaluate_model(model: TrainedModel, test: Dataset, threshold: float = 0.5) -> EvalMetrics:
    if len(test) == 0:
        raise DataError("test set is empty")
    if tuple(test.feature_names) != tuple(model.feature_names):
        raise ModelError(schema_diff(model.feature_names, test.feature_names))
    y_pred = predict(model, test.features, threshold)
    return metrics(confusion(test.labels, y_pred))


def schema_diff(expected, got) -> str:
    missing = [f for f in expected if f not in got]
    extra = [f for f in got if f not in expected]
    parts = ["feature schema mismatch"]
    if missing:
        parts.append("missing: " + ", ".join(missing))
    if extra:
        parts.append("unexpected: " + ", ".join(extra))
    if not missing and not extra:
        parts.append(f"order differs: expected {', '.join(expected)}")
    return "; ".join(parts)


def benchmark_all(dataset: Dataset, configs: Optional[dict] = None,
                  test_fraction: float = 0.2, seed: int = 0,
                  n_jobs: int = 1, name: str = "") -> ReportTable:
    """Fit all four model families on one shared stratified split and score
    each on the held-out part."""
    configs = configs or {}
    train, test = stratified_split(dataset, test_fraction, seed)

    def run(kind):
        return evaluate_model(fit_model(kind, train, configs.get(kind)), test)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            results = list(pool.map(run, MODEL_TYPES))
    else:
        results = [run(kind) for kind in MODEL_TYPES]
    return ReportTable(
        metrics=dict(zip(MODEL_COLUMNS, results)),
        test_fraction=test_fraction,
        seed=seed,
        n_train=len(train),
        n_test=len(test),
        dataset=name,
    )


def _pct(value: float) -> str:
    # Decimal(repr) keeps 0.945 as 0.945 rather than 0.94499999...
    return str((Decimal(repr(float(value))) * 100).quantize(Decimal("0.1"), ROUND_HALF_UP))


def _cells(table: ReportTable):
    rows = []
    for label, attr in METRIC_ROWS:
        cells = []
        for col in MODEL_COLUMNS:
            m = table.metrics.get(col)
            if m is None:
                cells.append("-")
                continue
            text = _pct(getattr(m, attr))
            cells.append(text + "%" if attr == "accuracy" else text)
        rows.append((label, cells))
    return rows


def _split_line(table: ReportTable) -> str:
    if table.test_fraction is None:
        return ""
    train_fraction = round(1 - table.test_fraction, 10)
    return (f"split: stratified hold-out, train {train_fraction:g} / test "
            f"{table.test_fraction:g}, seed {table.seed}, "
            f"n_train {table.n_train}, n_test {table.n_test}")


def format_report(table: ReportTable, style: str = "text") -> str:
    """Render the table with metrics as rows and LR, DT, NB, RF as columns.

    Accuracy is shown as a percentage, the other metrics on a 0-100 scale,
    all with one decimal.
    """
    rows = _cells(table)
    split = _split_line(table)
    if style == "csv":
        lines = ["metric," + ",".join(MODEL_COLUMNS)]
        lines += [label + "," + ",".join(cells) for label, cells in rows]
        if split:
            lines.append(f"# {split}")
        return "\n".join(lines) + "\n"
    if style != "text":
        raise ValueError(f"unknown report style {style!r}")

    width = 9
    lines = []
    if table.dataset:
        lines.append(f"dataset: {table.dataset}")
    if split:
        lines.append(split)
    lines.append("metrics: positive class = cited by patents (label 1)")
    lines.append(f"{'':<10}" + "".join(f"{c:>{width}}" for c in MODEL_COLUMNS))
    for label, cells in rows:
        lines.append(f"{label:<10}" + "".join(f"{c:>{width}}" for c in cells))
    lines.append("note: precision, recall and F1 are 0 when their denominator is 0")
    lines.extend(table.notes)
    return "\n".join(lines) + "\n"
