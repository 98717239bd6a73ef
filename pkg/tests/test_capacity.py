import itertools

import numpy as np
import pytest

from dagcast import (
    cut_bound_oracle,
    lambda_dag,
    make_network,
    multiclass_capacity,
    proper_cuts,
    scenario,
    sparse_support,
)
from dagcast.errors import DomainError, ResourceLimitError
from dagcast.multiclass import ClassSpec


def test_lambda_dag_k4():
    res = lambda_dag(scenario("k4"))
    assert res.lam == pytest.approx(0.5, abs=1e-9)
    probs = [p for _, p in res.support]
    assert sum(probs) == pytest.approx(1.0)
    # beta must be reproduced by the support
    S = np.array([a.active for a, _ in res.support], dtype=float)
    assert np.asarray(probs) @ S == pytest.approx(res.beta)


def test_lambda_dag_single_edge():
    net = make_network(2, 0, [(0, 1, 3)])
    assert lambda_dag(net).lam == pytest.approx(3.0)


def test_lambda_dag_rejects_cycles():
    with pytest.raises(DomainError):
        lambda_dag(scenario("cycle4"))


def test_lambda_dag_wired_is_min_in_capacity():
    net = make_network(3, 0, [(0, 1, 2), (0, 2, 1), (1, 2, 1)], "wired")
    res = lambda_dag(net)
    assert res.lam == pytest.approx(2.0)
    assert list(res.beta) == [1.0] * 3


def test_proper_cut_count():
    # 2^(|V|-1) - 1 proper cuts on 4 nodes
    cuts = list(proper_cuts(scenario("k4")))
    assert len(cuts) == 7
    assert all(0 in U for U in cuts)


def test_cut_bound_matches_lambda_dag_on_k4():
    assert cut_bound_oracle(scenario("k4")) == pytest.approx(0.5, abs=1e-9)


def test_cut_bound_wired_cycle4():
    assert cut_bound_oracle(scenario("cycle4")) == 2


def test_cut_bound_node_limit():
    net = make_network(14, 0, [(i, i + 1, 1) for i in range(13)], "wired")
    with pytest.raises(ResourceLimitError):
        cut_bound_oracle(net)


def test_sparse_support_caps_size():
    net = scenario("k4")
    res = sparse_support(lambda_dag(net))
    assert len(res.support) <= net.edge_count + 1
    assert res.lam == pytest.approx(0.5)
    probs = np.array([p for _, p in res.support])
    S = np.array([a.active for a, _ in res.support], dtype=float)
    assert probs @ S == pytest.approx(res.beta)


def test_capacity_result_serialization():
    doc = lambda_dag(scenario("k4")).to_dict()
    assert set(doc) == {"lambda", "beta", "support"}
    assert doc["lambda"] == pytest.approx(0.5)
    for entry in doc["support"]:
        assert set(entry) == {"edges", "p"}


def test_multiclass_capacity_cycle4_two_classes():
    net = scenario("cycle4")
    c1 = ClassSpec.from_permutation(net, (0, 1, 2, 3))
    c2 = ClassSpec.from_permutation(net, (0, 3, 1, 2))
    res = multiclass_capacity(net, [set(c1.edge_ids), set(c2.edge_ids)])
    assert res.total == pytest.approx(2.0, abs=1e-9)


def test_multiclass_single_class_bounded_on_cycle4():
    net = scenario("cycle4")
    for perm in itertools.permutations((1, 2, 3)):
        spec = ClassSpec.from_permutation(net, (0, *perm))
        res = multiclass_capacity(net, [set(spec.edge_ids)])
        assert res.total <= 5 / 3 + 1e-9


def test_multiclass_capacity_rejects_cyclic_class():
    net = scenario("cycle4")
    with pytest.raises(DomainError, match="cycle"):
        multiclass_capacity(net, [set(range(net.edge_count))])


def test_multiclass_capacity_primary_regime():
    # On the k4 DAG, the single full class must recover lambda_dag.
    net = scenario("k4")
    res = multiclass_capacity(net, [set(range(net.edge_count))])
    assert res.total == pytest.approx(0.5, abs=1e-9)


def test_diamond_capacity_is_one():
    assert lambda_dag(scenario("diamond")).lam == pytest.approx(1.0, abs=1e-9)
