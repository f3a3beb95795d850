import json

import pytest

from loadclust.cli import main


@pytest.fixture
def workspace(tmp_path):
    csv = tmp_path / "loads.csv"
    assert main(["fixture", "--out", str(csv), "--per-template", "8", "--seed", "2",
                 "--truth", str(tmp_path / "truth.json")]) == 0
    config = {"input_path": "loads.csv", "output_dir": "out",
              "mapping": {"time_column": "timestamp", "value_column": "value",
                          "label_column": "label"},
              "cluster": {"k": 4}}
    (tmp_path / "config.json").write_text(json.dumps(config))
    return tmp_path


def test_fixture_writes_truth(workspace):
    truth = json.loads((workspace / "truth.json").read_text())
    assert len(truth) == 32 and len(set(truth.values())) == 4


def test_validate_echoes_defaults(workspace, capsys):
    assert main(["validate", "--config", str(workspace / "config.json")]) == 0
    echo = json.loads(capsys.readouterr().out)
    assert echo["cluster"]["n_init"] == 10


def test_validate_exit_code(workspace, capsys):
    code = main(["validate", "--config", str(workspace / "config.json"),
                 "--override", "cluster.k=1", "--override", 'cluster.algorithm="kshape"'])
    assert code == 2
    err = capsys.readouterr().err
    assert "cluster.k" in err and "cluster.distance" in err


def test_run_and_trajectory(workspace, capsys):
    cfg = str(workspace / "config.json")
    assert main(["run", "--config", cfg]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["k"] == 4 and (workspace / "out" / "labels.json").exists()
    assert main(["run", "--config", cfg, "--output-dir", str(workspace / "out2"),
                 "--override", "cluster.k=3"]) == 0
    capsys.readouterr()
    assert main(["trajectory", "--runs", f"{workspace / 'out'},{workspace / 'out2'}",
                 "--out", str(workspace / "traj.json")]) == 0
    traj = json.loads(capsys.readouterr().out)
    assert len(traj["codes"]) == 32
    assert sum(traj["frequency"].values()) == 32
    assert json.loads((workspace / "traj.json").read_text()) == traj


def test_sweep(workspace, capsys):
    assert main(["sweep", "--config", str(workspace / "config.json"), "--k-min", "2",
                 "--k-max", "6"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["suggested_k"] == 4
    scores = json.loads((workspace / "out" / "scores.json").read_text())
    assert len(scores["per_k"]) == 5


def test_data_error_exit_code(workspace):
    (workspace / "loads.csv").write_text("label,timestamp,value\n")
    assert main(["run", "--config", str(workspace / "config.json")]) == 3


def test_numeric_error_exit_code(workspace):
    assert main(["run", "--config", str(workspace / "config.json"),
                 "--override", "cluster.k=100"]) == 4


def test_missing_config(tmp_path):
    assert main(["validate", "--config", str(tmp_path / "nope.json")]) == 2
