import csv
import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from examstress.cli import main
from examstress.report import plot_x, plot_y

FAST = ["classifiers.rf.tree_counts=5,10", "classifiers.rf.max_depths=2,unlimited", "repetitions=2"]


def test_validate_ok(dataset_dir, capsys):
    assert main(["validate", f"dataset_root={dataset_dir}"]) == 0
    assert "30 sessions OK" in capsys.readouterr().out


def test_validate_missing_signal(dataset_dir, capsys):
    (dataset_dir / "S04" / "Final" / "HR.csv").unlink()
    assert main(["validate", f"dataset_root={dataset_dir}"]) == 1
    out = capsys.readouterr().out
    assert "S04" in out and "HR.csv" in out


def test_validate_missing_roster_row(dataset_dir, capsys):
    roster = dataset_dir / "roster.csv"
    lines = roster.read_text().splitlines()
    roster.write_text("\n".join(l for l in lines if not l.startswith("S02,midterm2")) + "\n")
    assert main(["validate", f"dataset_root={dataset_dir}"]) == 1
    assert "S02/Midterm2" in capsys.readouterr().out


def test_validate_bad_sensor_file(dataset_dir, capsys):
    path = dataset_dir / "S01" / "Midterm1" / "EDA.csv"
    path.write_text(path.read_text() + "oops\n")
    assert main(["validate", f"dataset_root={dataset_dir}"]) == 1
    assert "ParseError" in capsys.readouterr().out


def test_validate_with_exclusion(dataset_dir, capsys):
    assert main(["validate", f"dataset_root={dataset_dir}", "exclusions=S10"]) == 0
    assert "27 sessions OK" in capsys.readouterr().out


def test_features(dataset_dir, tmp_path):
    out = tmp_path / "out"
    args = ["features", f"dataset_root={dataset_dir}", "--out", str(out), "preprocess.norm_scope=per_session_signal"]
    assert main(args) == 0
    first = (out / "features.csv").read_bytes()
    rows = list(csv.DictReader(io.StringIO(first.decode())))
    assert len(rows) == 30
    assert all(abs(float(r["temp_mean"])) < 1e-9 for r in rows)
    assert main(args) == 0
    assert (out / "features.csv").read_bytes() == first


def test_evaluate_writes_artifacts(dataset_dir, tmp_path, capsys):
    out = tmp_path / "res"
    assert main(["evaluate", f"dataset_root={dataset_dir}", "--out", str(out), *FAST]) == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"results.md", "results.csv", "roc.svg"} | {f"roc_{n}.csv" for n in ("rf", "sgd", "svm", "knn")}
    results = {r["classifier"]: r for r in csv.DictReader(io.StringIO((out / "results.csv").read_text()))}
    assert set(results) == {"rf", "sgd", "svm", "knn"}
    assert "| ROC-AUC |" in (out / "results.md").read_text()
    assert "classifiers.rf.tree_counts = 5, 10" in (out / "results.md").read_text()

    root = ET.fromstring((out / "roc.svg").read_text())
    polylines = {p.get("data-classifier"): p.get("points") for p in root.iter("{http://www.w3.org/2000/svg}polyline")}
    for name in ("rf", "sgd", "svm", "knn"):
        rows = list(csv.DictReader(io.StringIO((out / f"roc_{name}.csv").read_text())))
        expected = [(plot_x(float(r["fpr"])), plot_y(float(r["tpr"]))) for r in rows]
        drawn = [tuple(map(float, xy.split(","))) for xy in polylines[name].split()]
        assert np.allclose(drawn, expected, atol=5e-4)


def test_evaluate_single_class_is_an_error(dataset_dir, tmp_path, capsys):
    assert main(["evaluate", f"dataset_root={dataset_dir}", "threshold=99.5", "--out", str(tmp_path / "r"), *FAST]) == 1
    assert "threshold" in capsys.readouterr().err
    assert not (tmp_path / "r").exists()


def test_evaluate_invalid_dataset_writes_nothing(dataset_dir, tmp_path):
    (dataset_dir / "S01" / "Final" / "TEMP.csv").unlink()
    assert main(["evaluate", f"dataset_root={dataset_dir}", "--out", str(tmp_path / "r"), *FAST]) == 1
    assert not (tmp_path / "r").exists()


def test_unknown_key_is_usage_error(capsys):
    assert main(["validate", "bogus=1"]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_synth(tmp_path):
    out = tmp_path / "syn"
    assert main(["synth", "--out", str(out), "synth.n_students=3", "synth.seed=1"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["S01", "S02", "S03", "roster.csv"]
    assert main(["validate", f"dataset_root={out}"]) == 0


def test_synth_refuses_to_overwrite(tmp_path):
    out = tmp_path / "syn"
    out.mkdir()
    (out / "keep.txt").write_text("x")
    assert main(["synth", "--out", str(out)]) == 1
    assert (out / "keep.txt").read_text() == "x"


def test_synth_needs_two_students(tmp_path):
    assert main(["synth", "--out", str(tmp_path / "s"), "synth.n_students=1"]) == 1


def test_synth_without_target(capsys):
    assert main(["synth"]) == 2


def test_config_file(dataset_dir, tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"dataset_root = {dataset_dir}\nexclusions = S01, S02\n")
    assert main(["validate", "--config", str(cfg)]) == 0
    assert "24 sessions OK" in capsys.readouterr().out
