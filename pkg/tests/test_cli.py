import csv
import json

import pytest

from dagcast import Network, scenario
from dagcast.cli import load_network, main
from dagcast.errors import StructuralError


def test_load_network_round_trip(tmp_path):
    for name in ("k4", "mesh10", "cycle4", "diamond"):
        path = tmp_path / f"{name}.json"
        path.write_text(scenario(name).to_json())
        assert load_network(str(path)) == scenario(name)


def test_load_network_missing_file():
    with pytest.raises(StructuralError, match="no such file"):
        load_network("/nonexistent/net.json")


def test_load_network_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(StructuralError, match="bad.json:1"):
        load_network(str(path))


def test_load_network_self_loop(tmp_path):
    path = tmp_path / "loop.json"
    path.write_text(json.dumps({"nodes": 2, "source": 0, "edges": [[0, 0, 1]]}))
    with pytest.raises(StructuralError, match="self-loop"):
        load_network(str(path))


def test_load_network_negative_capacity(tmp_path):
    path = tmp_path / "neg.json"
    path.write_text(json.dumps({"nodes": 2, "source": 0, "edges": [[0, 1, -1]]}))
    with pytest.raises(StructuralError, match="negative"):
        load_network(str(path))


def test_capacity_command(capsys):
    assert main(["capacity", "k4"]) == 0
    out = capsys.readouterr().out
    assert "lambda = 0.5" in out
    assert "edges" in out


def test_capacity_on_cyclic_prints_bound(capsys):
    assert main(["capacity", "cycle4"]) == 0
    assert "bound = 2" in capsys.readouterr().out


def test_treecount_command(capsys):
    assert main(["treecount", "mesh10"]) == 0
    assert capsys.readouterr().out.strip() == "362880"


def test_treepack_command(capsys):
    assert main(["treepack", "cycle4"]) == 0
    assert "disjoint arborescences: 2" in capsys.readouterr().out


def test_simulate_command(capsys):
    code = main(
        ["simulate", "k4", "--policy", "pi_star", "--lambda", "0.45",
         "--slots", "2000", "--seed", "1"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "throughput = " in out and "stable = True" in out


def test_simulate_reproducible_stdout(capsys):
    argv = ["simulate", "k4", "--policy", "pi_star", "--lambda", "0.3",
            "--slots", "1000", "--seed", "7"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_unknown_scenario_is_domain_error(capsys):
    assert main(["capacity", "missing_scenario_name"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["simulate", "k4"])  # --lambda is required
    assert info.value.code == 2


def test_sweep_command(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DAGCAST_THREADS", "1")
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "k4", "--policies", "pi_star", "--lambdas", "0.3",
         "--slots", "500", "--seeds", "1", "2", "--out", str(out)]
    )
    assert code == 0
    with open(out) as f:
        rows = list(csv.reader(f))
    assert rows[0][0] == "policy" and len(rows) == 3


def test_multiclass_curve_command(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code = main(
        ["multiclass-curve", "cycle4", "--kmax", "2", "--seeds", "1",
         "--out", str(out)]
    )
    assert code == 0
    with open(out) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["network", "K", "fraction"]
    assert len(rows) == 3


def test_trace_command(capsys):
    code = main(["trace", "k4", "--lambda", "0.45", "--slots", "5", "--seed", "1"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 5
    rec = json.loads(lines[0])
    assert set(rec) >= {"slot", "R", "X", "W", "activation", "transfers"}


def test_network_file_argument(tmp_path, capsys):
    path = tmp_path / "net.json"
    path.write_text(scenario("k4").to_json())
    assert main(["treecount", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "6"
