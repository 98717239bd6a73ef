import csv
import math

import numpy as np
import pytest

from dagcast import make_network, scenario
from dagcast.errors import DomainError
from dagcast.sim import (
    CSV_HEADER,
    ArrivalProcess,
    multiclass_fraction_curve,
    parse_policy,
    run,
    sweep,
    write_sweep_csv,
)


def _mean_of_stream(proc, n, seed=1):
    stream = proc.stream(seed)
    return sum(next(stream) for _ in range(n)) / n


def test_arrival_validation():
    with pytest.raises(DomainError):
        ArrivalProcess("uniform", 1.0, 0)
    with pytest.raises(DomainError):
        ArrivalProcess("poisson", -0.5, 0)


def test_bernoulli_batch_mean_and_support():
    proc = ArrivalProcess("bernoulli-batch", 1.3, 9)
    stream = proc.stream(0)
    vals = {next(stream) for _ in range(500)}
    assert vals <= {0, 2}  # batch size ceil(1.3) = 2
    assert _mean_of_stream(proc, 40000) == pytest.approx(1.3, abs=0.05)


def test_poisson_mean():
    proc = ArrivalProcess("poisson", 2.0, 4)
    assert _mean_of_stream(proc, 40000) == pytest.approx(2.0, abs=0.05)


def test_zero_rate_stream():
    proc = ArrivalProcess("bernoulli-batch", 0.0, 0)
    stream = proc.stream(7)
    assert [next(stream) for _ in range(10)] == [0] * 10


def test_parse_policy():
    assert parse_policy("pi_star") == ("pi_star",)
    assert parse_policy("multiclass:4") == ("multiclass", 4)
    assert parse_policy("tree:5") == ("tree", 5)
    assert parse_policy("tree") == ("tree", 1)
    with pytest.raises(DomainError):
        parse_policy("gossip")
    with pytest.raises(DomainError):
        parse_policy("multiclass:0")


def test_one_hop_throughput():
    net = make_network(2, 0, [(0, 1, 1)])
    m = run(net, "pi_star", ArrivalProcess("bernoulli-batch", 0.5, 1), 10000, 1)
    assert m.throughput == pytest.approx(0.5, abs=0.02)
    assert all(d >= 1 for d in m.delays)
    assert m.throughput <= len(m.delays + [0]) and m.final_R[0] >= m.final_R[1]


def test_zero_arrivals_run():
    net = make_network(2, 0, [(0, 1, 1)])
    m = run(net, "pi_star", ArrivalProcess("bernoulli-batch", 0.0, 1), 500, 1)
    assert m.throughput == 0.0
    assert m.delays == [] and m.undelivered == 0
    assert math.isnan(m.mean_delay)


def test_run_determinism():
    net = scenario("k4")
    arr = ArrivalProcess("bernoulli-batch", 0.45, 2)
    m1 = run(net, "pi_star", arr, 2000, 2)
    m2 = run(net, "pi_star", arr, 2000, 2)
    assert m1.final_R == m2.final_R
    assert m1.delays == m2.delays
    assert m1.deficit_series == m2.deficit_series
    assert m1.instability_slope == m2.instability_slope


def test_pi_star_rejects_cyclic_topology():
    with pytest.raises(DomainError, match="multiclass"):
        run(
            scenario("cycle4"),
            "pi_star",
            ArrivalProcess("bernoulli-batch", 0.5, 0),
            10,
            0,
        )


def test_throughput_bounded_by_arrivals():
    net = scenario("k4")
    m = run(net, "pi_star", ArrivalProcess("bernoulli-batch", 0.4, 6), 5000, 6)
    total_arrivals = m.final_R[0]
    assert min(m.final_R) <= total_arrivals


def test_tree_policy_runs_and_delivers():
    from dagcast import max_disjoint_packing

    net = scenario("cycle4")
    trees = max_disjoint_packing(net).trees
    m = run(net, ("tree", trees), ArrivalProcess("bernoulli-batch", 1.0, 1), 5000, 1)
    assert m.throughput == pytest.approx(1.0, abs=0.05)
    assert m.mean_delay >= 1


def test_sweep_rows_and_order(tmp_path):
    net = scenario("k4")
    recs = sweep(net, ["pi_star"], [0.2, 0.3], 500, [1, 2])
    assert [(r.lam, r.seed) for r in recs] == [(0.2, 1), (0.2, 2), (0.3, 1), (0.3, 2)]
    out = tmp_path / "sweep.csv"
    write_sweep_csv(recs, out)
    with open(out) as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 5


def test_sweep_records_failures_without_aborting():
    # pi_star cannot run on the cyclic network: the cell fails, the row stays.
    recs = sweep(scenario("cycle4"), ["pi_star", "multiclass:2"], [0.5], 200, [1])
    assert len(recs) == 2
    assert recs[0].error != "" and math.isnan(recs[0].throughput)
    assert recs[1].error == "" and recs[1].throughput >= 0


def test_sweep_thread_cap(monkeypatch):
    monkeypatch.setenv("DAGCAST_THREADS", "1")
    recs = sweep(scenario("k4"), ["pi_star"], [0.3], 300, [1, 2])
    assert len(recs) == 2 and all(r.error == "" for r in recs)


def test_fraction_curve_cycle4():
    rows = multiclass_fraction_curve(scenario("cycle4"), [1, 2], [1, 2, 3])
    assert rows[0][0] == 1 and rows[1][0] == 2
    # single random class is strictly below capacity; fractions lie in (0,1]
    for _, frac in rows:
        assert 0 < frac <= 1 + 1e-9


def test_fraction_one_with_covering_class():
    # Wired two-node net: the only class covers the whole graph.
    net = make_network(2, 0, [(0, 1, 1)], "wired")
    rows = multiclass_fraction_curve(net, [1], [0])
    assert rows[0][1] == pytest.approx(1.0, abs=1e-9)


def test_fraction_monotone_in_k():
    # Class lists are prefix-stable in K, so the rate cannot drop.
    net = scenario("cycle4")
    rows = multiclass_fraction_curve(net, [1, 2, 3, 4], [1, 2])
    fracs = [f for _, f in rows]
    for a, b in zip(fracs, fracs[1:]):
        assert b >= a - 1e-9
