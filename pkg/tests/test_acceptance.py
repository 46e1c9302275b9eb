"""Exit criteria for the package, one test per criterion.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import hashlib
import io
import time

import numpy as np
import pytest

from helpers import make_dataset
from oracles import (
    central_difference,
    metrics_bruteforce,
    nb_bayes_rule,
    pearson_formula,
    stump_bruteforce,
)
from patentcite.analytics import citation_threshold_analysis, correlation_matrix
from patentcite.classifiers import (
    ForestConfig,
    TreeConfig,
    fit_model,
    fit_naive_bayes,
    fit_tree,
    logistic_loss_and_gradient,
    nb_posterior,
    predict,
)
from patentcite.cli import run
from patentcite.dataset import Dataset, fixture_path, load_dataset
from patentcite.evaluation import (
    ConfusionMatrix,
    EvalMetrics,
    ReportTable,
    benchmark_all,
    format_report,
    metrics,
)
from patentcite.synthgen import SynthConfig, generate

SEED = 2024


def test_ac1_metric_oracle():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    for _ in range(1000):
        tp, fp, fn, tn = (int(v) for v in rng.integers(0, 200, 4))
        if rng.random() < 0.1:
            tp = 0  # exercise the zero-denominator paths
        if tp + fp + fn + tn == 0:
            tn = 1
        m = metrics(ConfusionMatrix(tp, fp, fn, tn))
        exact = metrics_bruteforce(tp, fp, fn, tn)
        for got, want in zip((m.accuracy, m.precision, m.recall, m.f1), exact):
            assert abs(got - float(want)) <= 1e-12
        if m.precision + m.recall > 0:
            assert m.f1 == 2 * m.precision * m.recall / (m.precision + m.recall)
        else:
            assert m.f1 == 0.0
    assert time.perf_counter() - start < 1.0


def test_ac2_gradient_check():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 11))
        d = int(rng.integers(1, 6))
        X = rng.normal(scale=2.0, size=(n, d))
        y = rng.integers(0, 2, n)
        w = rng.normal(size=d)
        b = float(rng.normal())
        l2 = float(rng.uniform(0, 1))

        def loss(params):
            return logistic_loss_and_gradient(np.array(params[:d]), params[d], X, y, l2)[0]

        _, gw, gb = logistic_loss_and_gradient(w, b, X, y, l2)
        numeric = central_difference(loss, list(w) + [b], h=1e-5)
        for a, f in zip(list(gw) + [gb], numeric):
            worst = max(worst, abs(a - f) / max(abs(a), abs(f), 1e-6))
    assert worst < 1e-4
    assert time.perf_counter() - start < 5.0


def test_ac3_stump_oracle():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    for i in range(100):
        n = int(rng.integers(2, 21))
        d = int(rng.integers(1, 5))
        if i % 2:
            X = rng.integers(0, 4, size=(n, d)).astype(float)  # many ties
        else:
            X = np.round(rng.normal(size=(n, d)), 2)
        y = rng.integers(0, 2, n)
        tree = fit_tree(X, y, TreeConfig(max_depth=1))
        expected = stump_bruteforce(X.tolist(), y.tolist())
        if expected is None:
            assert tree.n_nodes == 1
        else:
            assert (int(tree.feature[0]), float(tree.threshold[0])) == expected[:2]
    assert time.perf_counter() - start < 5.0


def test_ac4_naive_bayes_oracle():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        n = int(rng.integers(4, 30))
        X = rng.poisson(rng.uniform(0.5, 20, 3), size=(n, 3)).astype(float)
        y = rng.integers(0, 2, n)
        y[:2] = (0, 1)
        model = fit_naive_bayes(X, y)
        for x in rng.poisson(8, size=(10, 3)).astype(float):
            want = nb_bayes_rule(model.class_priors.tolist(), model.means.tolist(),
                                 model.variances.tolist(), x.tolist())
            assert abs(nb_posterior(model, x) - want) <= 1e-9
            post = model.posteriors(x)[0]
            assert abs(post.sum() - 1.0) <= 1e-12


def test_ac5_forest_degeneracy():
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        n = int(rng.integers(10, 60))
        d = int(rng.integers(1, 6))
        X = rng.integers(0, 5, size=(n, d)).astype(float)
        y = rng.integers(0, 2, n)
        y[:2] = (0, 1)
        ds = make_dataset(X, y)
        tree = fit_model("dt", ds)
        forest = fit_model("rf", ds, ForestConfig(n_trees=1, bootstrap=False,
                                                  features_per_split=d, seed=int(rng.integers(1e6))))
        probe = np.vstack([X, rng.integers(-1, 7, size=(100, d)).astype(float)])
        assert (predict(tree, probe) == predict(forest, probe)).all()


def test_ac6_pipeline_benchmark():
    config = SynthConfig(n_records=5000, seed=SEED)
    start = time.perf_counter()
    table = benchmark_all(generate(config), test_fraction=0.2, seed=SEED)
    elapsed = time.perf_counter() - start
    print(format_report(table))
    assert elapsed < 30.0
    for name, m in table.metrics.items():
        assert m.accuracy > 0.80, name
        assert m.f1 > 0.80, name

    null = SynthConfig(n_records=5000, seed=SEED, signal_strength=0.0)
    p = null.positive_fraction
    baseline = max(p, 1 - p)
    table = benchmark_all(generate(null), test_fraction=0.2, seed=SEED)
    print(format_report(table))
    for name, m in table.metrics.items():
        assert abs(m.accuracy - baseline) <= 0.05, name


def test_ac7_analytics_oracle():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        X = rng.integers(0, 20, size=(3, 2)).astype(float)
        paper = rng.integers(0, 300, 3)
        patents = rng.integers(0, 5, 3)
        ds = Dataset(("a", "b"), X, (patents > 0).astype(int), paper, ("x", "y", "z"),
                     patent_citations=patents)
        cm = correlation_matrix(ds)
        cols = [X[:, 0].tolist(), X[:, 1].tolist(), paper.tolist(), patents.tolist()]
        v = cm.values
        assert (v == v.T).all()
        for i in range(4):
            if cm.labels[i] in cm.constant_columns:
                continue
            assert v[i, i] == 1.0
            for j in range(4):
                if j != i and cm.labels[j] not in cm.constant_columns:
                    assert abs(v[i, j] - pearson_formula(cols[i], cols[j])) <= 1e-9
        assert (np.abs(v) <= 1.0 + 1e-12).all()

    hand = make_dataset([[0.0]] * 3, [1, 0, 0], paper=[150, 90, 200])
    rep = citation_threshold_analysis(hand, 100)
    assert (rep.above_threshold, rep.above_and_patented, rep.fraction) == (2, 1, 0.5)
    corpus, _ = load_dataset(fixture_path())
    rep = citation_threshold_analysis(corpus, 100)
    assert (rep.above_threshold, rep.above_and_patented) == (5, 4)

    config = SynthConfig(seed=SEED)
    rep = citation_threshold_analysis(generate(config), config.citation_threshold)
    print(f"synthetic cohort: {rep.above_and_patented}/{rep.above_threshold} = {rep.fraction:.3f}")
    assert abs(rep.fraction - config.citation_link) <= 0.05


def _pipeline(workdir):
    steps = [
        ["synth", "--n", "1500", "--seed", "7", "--out", "d.csv"],
        ["ingest", "--input", str(fixture_path()), "--out", "fixture_clean.csv",
         "--report-json", "fixture_report.json"],
        ["stats", "--data", "d.csv", "--threshold", "100", "--heatmap", "heat.csv"],
        ["train", "--data", "d.csv", "--model", "rf", "--trees", "15", "--seed", "7",
         "--out", "rf.json"],
        ["train", "--data", "d.csv", "--model", "lr", "--out", "lr.json"],
        ["train", "--data", "d.csv", "--model", "dt", "--out", "dt.json"],
        ["train", "--data", "d.csv", "--model", "nb", "--out", "nb.json"],
        ["predict", "--model", "rf.json", "--input", "d.csv", "--out", "pred.csv"],
        ["evaluate", "--model", "lr.json", "--data", "d.csv", "--out", "eval.json"],
        ["benchmark", "--data", "d.csv", "--seed", "7", "--trees", "15", "--out", "report.csv"],
    ]
    stdout = []
    for argv in steps:
        argv = [a if not a.endswith((".csv", ".json")) or a.startswith("/")
                else str(workdir / a) for a in argv]
        out = io.StringIO()
        assert run(argv, out=out) == 0, argv
        stdout.append(out.getvalue().replace(str(workdir), "<dir>"))
    digests = {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
               for p in sorted(workdir.iterdir())}
    return digests, stdout


def test_ac8_cli_determinism(tmp_path):
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    a_dir.mkdir()
    b_dir.mkdir()
    a, out_a = _pipeline(a_dir)
    b, out_b = _pipeline(b_dir)
    assert len(a) == 11
    assert a == b
    assert out_a == out_b


REFERENCE_TABLE = {
    "LR": EvalMetrics(accuracy=0.897, precision=0.902, recall=0.904, f1=0.903),
    "DT": EvalMetrics(accuracy=0.926, precision=0.926, recall=0.934, f1=0.930),
    "NB": EvalMetrics(accuracy=0.905, precision=0.907, recall=0.901, f1=0.904),
    "RF": EvalMetrics(accuracy=0.939, precision=0.942, recall=0.948, f1=0.945),
}

EXPECTED_CELLS = [
    ["Accuracy", "89.7%", "92.6%", "90.5%", "93.9%"],
    ["F1-score", "90.3", "93.0", "90.4", "94.5"],
    ["Precision", "90.2", "92.6", "90.7", "94.2"],
    ["Recall", "90.4", "93.4", "90.1", "94.8"],
]


@pytest.mark.parametrize("style", ["text", "csv"])
def test_ac9_table_fidelity(style):
    out = format_report(ReportTable(REFERENCE_TABLE), style)
    if style == "csv":
        lines = out.splitlines()
        assert lines[0] == "metric,LR,DT,NB,RF"
        assert [line.split(",") for line in lines[1:5]] == EXPECTED_CELLS
    else:
        lines = [line.split() for line in out.splitlines()]
        header = next(i for i, cells in enumerate(lines) if cells == ["LR", "DT", "NB", "RF"])
        assert lines[header + 1: header + 5] == EXPECTED_CELLS
