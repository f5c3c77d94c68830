import json

import pytest

from conftest import trio_scenario
from rsnc.cli import main
from rsnc.model import dump_scenario


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 4, "m": 4, "samples": 2, "sweep": [{"m": 3}, {"m": 4}]}))
    return path


def test_generate(tmp_path, config):
    out = tmp_path / "scen"
    assert main(["generate", "--config", str(config), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["scenario_0.json", "scenario_1.json"]


@pytest.mark.parametrize("algo", ["rsnc", "dsf", "sin1", "rlnc", "index"])
def test_run_trio(tmp_path, capsys, algo):
    path = tmp_path / "trio.json"
    dump_scenario(trio_scenario(), path)
    assert main(["run", "--scenario", str(path), "--algorithm", algo, "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    expected = {"rsnc": 3.0, "dsf": 2.0, "index": 2.0}
    if algo in expected:
        assert doc["summary"]["total_benefit"] == expected[algo]


def test_run_rsnc_schedule_json(tmp_path, capsys):
    path = tmp_path / "trio.json"
    dump_scenario(trio_scenario(), path)
    main(["run", "--scenario", str(path)])
    doc = json.loads(capsys.readouterr().out)
    assert [t["coded"] for t in doc["transmissions"]] == [["p1"], ["p2", "p3"]]
    assert doc["summary"]["miss_ratio"] == 0.0


def test_experiment_csv(tmp_path, config):
    out = tmp_path / "r.csv"
    assert main(["experiment", "--config", str(config), "--algorithms", "rsnc,dsf",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2 * 2
    assert lines[1].startswith("m=3,rsnc,0,")


def test_experiment_preset(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["experiment", "--preset", "benefit_classes", "--samples", "2",
                 "--algorithms", "rsnc", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 5 * 2


def test_pairwise_csv(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"n": 4, "m": 4, "B": 100.0, "rmax": 100.0, "samples": 3}))
    out = tmp_path / "p.csv"
    assert main(["pairwise", "--config", str(cfg), "--deadline", "20", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "sample,greedy_weight,exact_weight,ratio"


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert main(["experiment", "--config", str(bad)]) != 0
    assert "unknown config fields" in capsys.readouterr().err

    overlap = tmp_path / "o.json"
    doc = json.loads(json.dumps({
        "packet_size": 10, "packets": ["p1"],
        "destinations": [{"id": "d1", "max_rate": 1, "has": ["p1"],
                          "wants": [{"packet": "p1", "deadline": 5, "benefit": 1}]}]}))
    overlap.write_text(json.dumps(doc))
    assert main(["run", "--scenario", str(overlap)]) != 0
    assert "overlap at (d1,p1)" in capsys.readouterr().err

    assert main(["run", "--scenario", str(tmp_path / "missing.json")]) != 0
    assert main(["experiment", "--preset", "nope"]) != 0


def test_pairwise_oracle_too_large(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"B": 100.0, "rmax": 100.0, "samples": 1}))
    assert main(["pairwise", "--config", str(cfg), "--deadline", "35",
                 "--oracle", "enumerate"]) != 0
    assert "exhaustive-search limit" in capsys.readouterr().err
