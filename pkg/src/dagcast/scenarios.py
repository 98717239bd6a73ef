"""Built-in example networks.

Node labelings are chosen so the deterministic tie rules of the policy
reproduce the intended hand-worked decisions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .graph import PRIMARY, WIRED, Network, make_network


@dataclass(frozen=True)
class Scenario:
    name: str
    net: Network
    notes: str


def _k4() -> Network:
    # Complete 4-node DAG, unit capacities, primary interference.
    # Labels: r=0, b=1, a=2, c=3; edge order (r,a),(r,b),(r,c),(a,b),(a,c),(b,c).
    # With ties broken toward the highest node index, node c's minimizer
    # resolves to a when a and b tie, matching the worked single-slot example.
    return make_network(
        4,
        0,
        [
            (0, 2, 1),  # r -> a
            (0, 1, 1),  # r -> b
            (0, 3, 1),  # r -> c
            (2, 1, 1),  # a -> b
            (2, 3, 1),  # a -> c
            (1, 3, 1),  # b -> c
        ],
        PRIMARY,
    )


def _mesh10() -> Network:
    # 10-node complete DAG: edge i -> j for i < j with capacity 9 - i
    # (1-based: link from i to j with capacity 10 - i), primary interference.
    edges = [(i, j, 9 - i) for i in range(10) for j in range(i + 1, 10)]
    return make_network(10, 0, edges, PRIMARY)


def _cycle4() -> Network:
    # Wired 4-node network whose relay nodes form the directed cycle
    # a -> b -> c -> a; unit capacities.  Broadcast capacity 2, two
    # edge-disjoint spanning arborescences, single-DAG rate strictly lower.
    return make_network(
        4,
        0,
        [
            (0, 1, 1),  # r -> a
            (0, 2, 1),  # r -> b
            (0, 3, 1),  # r -> c
            (1, 2, 1),  # a -> b
            (2, 3, 1),  # b -> c
            (3, 1, 1),  # c -> a
        ],
        WIRED,
    )


def _diamond() -> Network:
    # Experimental reconstruction of a diamond relay topology with
    # broadcast capacity 1 under primary interference: two node-disjoint
    # two-hop paths of capacity-2 links, time-shared half-and-half.
    return make_network(
        4,
        0,
        [
            (0, 1, 2),  # r -> a
            (0, 2, 2),  # r -> b
            (1, 3, 2),  # a -> c
            (2, 3, 2),  # b -> c
        ],
        PRIMARY,
    )


_REGISTRY = {
    "k4": Scenario(
        "k4",
        _k4(),
        "complete 4-node DAG, unit capacities, primary interference",
    ),
    "mesh10": Scenario(
        "mesh10",
        _mesh10(),
        "10-node complete DAG, capacity 9-i on edges out of node i, primary",
    ),
    "cycle4": Scenario(
        "cycle4",
        _cycle4(),
        "wired 4-node network with relay cycle a->b->c->a, unit capacities",
    ),
    "diamond": Scenario(
        "diamond",
        _diamond(),
        "experimental: diamond relay reconstruction, capacity 1 intended",
    ),
}


def scenario_names() -> list[str]:
    return sorted(_REGISTRY)


def scenario(name: str) -> Network:
    try:
        return _REGISTRY[name].net
    except KeyError:
        raise DomainError(
            f"unknown scenario {name!r}; registered: {', '.join(scenario_names())}"
        ) from None


def scenario_notes(name: str) -> str:
    if name not in _REGISTRY:
        raise DomainError(f"unknown scenario {name!r}")
    return _REGISTRY[name].notes
