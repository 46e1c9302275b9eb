import io
import json

import pytest

from patentcite.analytics import citation_threshold_analysis
from patentcite.cli import run
from patentcite.dataset import fixture_path, load_dataset


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "d.csv"
    assert call("synth", "--n", 600, "--seed", 7, "--out", path)[0] == 0
    return path


@pytest.fixture(scope="module")
def rf_model(corpus):
    path = corpus.parent / "rf.json"
    code, _ = call("train", "--data", corpus, "--model", "rf", "--trees", 8, "--out", path)
    assert code == 0
    return path


def test_synth_then_benchmark(corpus, tmp_path):
    code, text = call("benchmark", "--data", corpus, "--seed", 7, "--trees", 10,
                      "--out", tmp_path / "r.csv")
    assert code == 0
    assert "Accuracy" in text and "seed 7" in text
    assert (tmp_path / "r.csv").read_text().startswith("metric,LR,DT,NB,RF\n")


def test_global_seed_before_subcommand(corpus):
    a = call("--seed", 3, "benchmark", "--data", corpus, "--trees", 4)
    b = call("benchmark", "--data", corpus, "--trees", 4, "--seed", 3)
    assert a == b and "seed 3" in a[1]


def test_ingest_fixture(tmp_path):
    code, text = call("ingest", "--input", fixture_path(), "--out", tmp_path / "c.csv",
                      "--report-json", tmp_path / "r.json")
    assert code == 0
    assert "rows retained       14" in text
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["year_filtered"] == 3 and report["duplicates_removed"] == 2


def test_ingest_then_benchmark_smoke(tmp_path):
    assert call("ingest", "--input", fixture_path(), "--out", tmp_path / "c.csv")[0] == 0
    code, text = call("benchmark", "--data", tmp_path / "c.csv", "--trees", 5)
    assert code == 0 and "RF" in text


def test_stats_matches_analytics(corpus, tmp_path):
    code, text = call("stats", "--data", corpus, "--threshold", 100,
                      "--heatmap", tmp_path / "h.csv")
    assert code == 0
    dataset, _ = load_dataset(corpus)
    rep = citation_threshold_analysis(dataset, 100)
    assert f"papers with more than 100 citations: {rep.above_threshold}" in text
    assert f"of which cited by patents: {rep.above_and_patented}" in text
    assert len((tmp_path / "h.csv").read_text().splitlines()) == 100


def test_train_evaluate(corpus, rf_model, tmp_path):
    code, text = call("evaluate", "--model", rf_model, "--data", corpus,
                      "--out", tmp_path / "m.json")
    assert code == 0
    doc = json.loads((tmp_path / "m.json").read_text())
    assert doc["model_type"] == "rf" and 0.5 < doc["accuracy"] <= 1.0


def test_predict_file(corpus, rf_model, tmp_path):
    code, text = call("predict", "--model", rf_model, "--input", corpus,
                      "--out", tmp_path / "p.csv")
    assert code == 0
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "id,probability,label"
    assert len(lines) == 601
    rid, proba, label = lines[1].split(",")
    assert rid == "synth-000000" and label in ("0", "1")


def test_predict_stdin(rf_model, monkeypatch):
    row = "news,blogs,policy,twitter,facebook,wikipedia,googleplus,mendeley\n0,0,0,1,0,0,0,2\n"
    monkeypatch.setattr("sys.stdin", io.StringIO(row))
    code, text = call("predict", "--model", rf_model, "--input", "-")
    assert code == 0
    assert text.splitlines()[1].startswith("1,")


def test_predict_schema_mismatch(rf_model, tmp_path, capsys):
    bad = tmp_path / "row.csv"
    bad.write_text("id,news,blogs,tiktok\nx,1,2,3\n")
    code, _ = call("predict", "--model", rf_model, "--input", bad)
    assert code == 2
    err = capsys.readouterr().err
    assert "missing: policy" in err and "unexpected: tiktok" in err


def test_corrupt_model_is_data_error(tmp_path, corpus):
    path = tmp_path / "m.json"
    path.write_text('{"format_version": 1, "model_type": "svm"}')
    assert call("evaluate", "--model", path, "--data", corpus)[0] == 2


def test_missing_input_is_data_error(tmp_path):
    assert call("ingest", "--input", tmp_path / "nope.csv")[0] == 2


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["train", "--data", "x.csv"],
    ["benchmark", "--data", "x.csv", "--frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    assert call(*argv)[0] == 1
    assert "usage" in capsys.readouterr().err


def test_invalid_config_is_usage_error(tmp_path):
    assert call("synth", "--n", 3, "--out", tmp_path / "x.csv")[0] == 1
