"""Secondary-component tests.

Fixture CSVs are produced by the simulator's command-line interface (the
only coupling point), then rendered; truncated or malformed inputs must
fail with a nonzero exit.
"""

import subprocess
import sys

import pytest

from plotgen import SchemaError, SweepTable, FractionTable, plot_delay, plot_fraction
from plotgen.cli import main_delay, main_fraction


@pytest.fixture(scope="session")
def sweep_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixtures") / "sweep.csv"
    subprocess.run(
        [
            "dagcast", "sweep", "k4",
            "--policies", "pi_star", "multiclass:2",
            "--lambdas", "0.2", "0.35", "0.45",
            "--slots", "2000", "--seeds", "1", "2",
            "--out", str(path),
        ],
        check=True,
        env={"PATH": _path(), "DAGCAST_THREADS": "2"},
    )
    return path


@pytest.fixture(scope="session")
def fraction_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixtures") / "curve.csv"
    subprocess.run(
        [
            "dagcast", "multiclass-curve", "cycle4",
            "--kmax", "3", "--seeds", "1", "2",
            "--out", str(path),
        ],
        check=True,
        env={"PATH": _path()},
    )
    return path


def _path():
    import os

    return os.environ.get("PATH", "")


def test_sweep_table_reads_fixture(sweep_csv):
    table = SweepTable.read(str(sweep_csv))
    assert table.policies() == ["multiclass:2", "pi_star"]
    series = table.delay_series("pi_star")
    assert [lam for lam, _, _ in series] == [0.2, 0.35, 0.45]


def test_plot_delay_on_fixture(sweep_csv, tmp_path):
    out = tmp_path / "delay.png"
    assert plot_delay(str(sweep_csv), str(out)) == str(out)
    assert out.stat().st_size > 0


def test_plot_delay_cli_exit_zero(sweep_csv, tmp_path):
    out = tmp_path / "delay.svg"
    assert main_delay([str(sweep_csv), str(out)]) == 0
    assert out.exists()


def test_plot_fraction_on_fixture(fraction_csv, tmp_path):
    table = FractionTable.read(str(fraction_csv))
    assert table.networks() == ["cycle4"]
    # the cycle4 curve reaches capacity by K = 2
    series = dict(table.series("cycle4"))
    assert series[2] == pytest.approx(1.0, abs=1e-6)
    out = tmp_path / "fraction.png"
    assert main_fraction([str(fraction_csv), str(out)]) == 0
    assert out.stat().st_size > 0


def test_truncated_sweep_csv_fails(sweep_csv, tmp_path):
    text = sweep_csv.read_text().splitlines()
    bad = tmp_path / "truncated.csv"
    # cut the last row in half
    bad.write_text("\n".join(text[:-1] + [text[-1][: len(text[-1]) // 2]]) + "\n")
    assert main_delay([str(bad), str(tmp_path / "x.png")]) != 0


def test_header_only_csv_fails(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text(
        "policy,lambda,horizon,seed,throughput,mean_delay,undelivered,"
        "instability_slope\n"
    )
    assert main_delay([str(bad), str(tmp_path / "x.png")]) != 0


def test_wrong_header_fails(tmp_path):
    bad = tmp_path / "wrong.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(SchemaError, match="header"):
        SweepTable.read(str(bad))
    assert main_fraction([str(bad), str(tmp_path / "x.png")]) != 0


def test_missing_file_fails(tmp_path):
    assert main_delay(["/no/such.csv", str(tmp_path / "x.png")]) == 1


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as info:
        main_delay(["only-one-arg"])
    assert info.value.code == 2


def test_schema_error_reports_row(tmp_path, sweep_csv):
    lines = sweep_csv.read_text().splitlines()
    lines[2] = lines[2].replace(lines[2].split(",")[4], "not-a-number", 1)
    bad = tmp_path / "badnum.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError, match=":3:"):
        SweepTable.read(str(bad))


def test_plot_output_is_deterministic(fraction_csv, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_fraction(str(fraction_csv), str(a))
    plot_fraction(str(fraction_csv), str(b))
    assert a.read_bytes() == b.read_bytes()
