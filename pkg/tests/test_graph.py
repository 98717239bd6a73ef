import json

import pytest

from dagcast import (
    Activation,
    CycleReport,
    Network,
    ProperCut,
    TopologicalOrder,
    cut_value,
    enumerate_activations,
    is_dag,
    is_matching,
    make_network,
    min_in_degree,
    scenario,
    validate_topology,
)
from dagcast.errors import DomainError, ResourceLimitError, StructuralError
from dagcast.graph import WIRED


def test_network_rejects_self_loop():
    with pytest.raises(StructuralError, match="self-loop"):
        make_network(2, 0, [(1, 1, 1)])


def test_network_rejects_dangling_endpoint():
    with pytest.raises(StructuralError, match="dangling"):
        make_network(2, 0, [(0, 5, 1)])


def test_network_rejects_negative_capacity():
    with pytest.raises(StructuralError, match="negative capacity"):
        make_network(2, 0, [(0, 1, -1)])


def test_network_rejects_bad_source():
    with pytest.raises(StructuralError):
        make_network(3, 7, [(0, 1, 1)])


def test_json_round_trip_all_scenarios():
    for name in ("k4", "mesh10", "cycle4", "diamond"):
        net = scenario(name)
        assert Network.from_dict(json.loads(net.to_json())) == net


def test_topological_order_is_deterministic():
    net = scenario("k4")
    topo = validate_topology(net)
    assert isinstance(topo, TopologicalOrder)
    # r, then a (=2) before b (=1)? No: smallest ready id first, and edges
    # force a before b via (a, b).
    assert topo.order == (0, 2, 1, 3)


def test_cycle_report_on_cycle4():
    rep = validate_topology(scenario("cycle4"))
    assert isinstance(rep, CycleReport)
    assert rep.cycle == (1, 2, 3, 1)  # a -> b -> c -> a
    assert not is_dag(scenario("cycle4"))


def test_parallel_edges_allowed():
    net = make_network(2, 0, [(0, 1, 1), (0, 1, 1)])
    assert net.edge_count == 2
    assert is_dag(net)


def test_path_matchings():
    # r -> a -> b: the two edges share node a, so the only matchings are
    # the empty set and each singleton.
    net = make_network(3, 0, [(0, 1, 1), (1, 2, 1)])
    acts = enumerate_activations(net)
    assert [a.edge_ids for a in acts] == [(), (0,), (1,)]


def test_wired_activations_are_two():
    net = scenario("cycle4")
    acts = enumerate_activations(net)
    assert len(acts) == 2
    assert acts[0].edge_ids == ()
    assert acts[1].edge_ids == tuple(range(net.edge_count))


def test_k4_matching_count():
    # K4 has 6 edges, 3 perfect matchings, 6 singletons, plus the empty one:
    # 1 + 6 + 3 = 10 matchings.
    acts = enumerate_activations(scenario("k4"))
    assert len(acts) == 10
    for a in acts:
        assert is_matching(scenario("k4"), a)


def test_activation_cap_enforced():
    net = scenario("mesh10")  # 45 edges
    with pytest.raises(ResourceLimitError):
        enumerate_activations(net)
    acts = enumerate_activations(net, max_edges=64)
    assert len(acts) == 9496


def test_is_matching_detects_shared_node():
    net = scenario("k4")
    assert not is_matching(net, Activation.from_edges([0, 1], net.edge_count))


def test_proper_cut_requires_source():
    with pytest.raises(DomainError):
        ProperCut(frozenset({1}), source=0)


def test_cut_value_and_crossing_edges():
    net = scenario("k4")
    cut = ProperCut(frozenset({0}), 0)
    assert cut.crossing_edges(net) == [0, 1, 2]
    assert cut_value(net, [1.0] * 6, cut) == 3
    with pytest.raises(DomainError):
        cut_value(net, [2.0] * 6, cut)


def test_min_in_degree():
    # In k4, node a (=2) is fed only by r; b gets r and a; c gets all three.
    assert min_in_degree(scenario("k4")) == (1, 2)
    assert min_in_degree(scenario("cycle4")) == (2, 1)


def test_expand_unit_capacities():
    net = make_network(2, 0, [(0, 1, 3)])
    unit = net.expand_unit_capacities()
    assert unit.edge_count == 3
    assert all(c == 1 for c in unit.caps)
    with pytest.raises(DomainError):
        make_network(2, 0, [(0, 1, "1/2")]).expand_unit_capacities()


def test_wired_flag_round_trips():
    net = scenario("cycle4")
    assert net.interference == WIRED
    assert Network.from_dict(net.to_dict()).interference == WIRED
