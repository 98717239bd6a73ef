"""Directed multigraph model, DAG checks, cuts and activation enumeration.

A network is a directed multigraph with a designated source node and an
interference regime.  Under primary interference a set of links can be
activated together only if it forms a matching of the underlying undirected
multigraph; in a wired network every link can be active at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError, StructuralError

PRIMARY = "primary"
WIRED = "wired"

DEFAULT_ACTIVATION_CAP = 16


@dataclass(frozen=True)
class Network:
    """Directed multigraph with edge capacities and an interference regime.

    Edges are identified by their position in the `tails`/`heads`/`caps`
    sequences; parallel edges are allowed, self-loops are not.
    """

    node_count: int
    source: int
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    caps: tuple[Fraction, ...]
    interference: str = PRIMARY

    def __post_init__(self):
        if self.node_count <= 0:
            raise StructuralError("network needs at least one node")
        if not (0 <= self.source < self.node_count):
            raise StructuralError(f"source {self.source} is not a valid node id")
        if self.interference not in (PRIMARY, WIRED):
            raise StructuralError(f"unknown interference regime {self.interference!r}")
        if not (len(self.tails) == len(self.heads) == len(self.caps)):
            raise StructuralError("edge arrays have mismatched lengths")
        for e, (i, j, c) in enumerate(zip(self.tails, self.heads, self.caps)):
            if not (0 <= i < self.node_count) or not (0 <= j < self.node_count):
                raise StructuralError(f"edge {e} has a dangling endpoint ({i},{j})")
            if i == j:
                raise StructuralError(f"edge {e} is a self-loop at node {i}")
            if c < 0:
                raise StructuralError(f"edge {e} has negative capacity {c}")

    @property
    def edge_count(self) -> int:
        return len(self.tails)

    def edges(self):
        """Iterate (edge id, tail, head, capacity)."""
        for e in range(self.edge_count):
            yield e, self.tails[e], self.heads[e], self.caps[e]

    def in_edges(self, j: int) -> list[int]:
        return [e for e in range(self.edge_count) if self.heads[e] == j]

    def out_edges(self, i: int) -> list[int]:
        return [e for e in range(self.edge_count) if self.tails[e] == i]

    def expand_unit_capacities(self) -> "Network":
        """Replace each edge of integral capacity w by w parallel unit edges."""
        tails, heads = [], []
        for e, i, j, c in self.edges():
            if c != int(c):
                raise DomainError(f"edge {e} capacity {c} is not integral")
            for _ in range(int(c)):
                tails.append(i)
                heads.append(j)
        return Network(
            node_count=self.node_count,
            source=self.source,
            tails=tuple(tails),
            heads=tuple(heads),
            caps=(Fraction(1),) * len(tails),
            interference=self.interference,
        )

    # -- JSON network format -------------------------------------------------

    @staticmethod
    def from_dict(doc: dict) -> "Network":
        try:
            nodes = doc["nodes"]
            source = doc["source"]
            interference = doc.get("interference", PRIMARY)
            edges = doc["edges"]
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"network document missing field: {exc}") from exc
        tails, heads, caps = [], [], []
        for k, edge in enumerate(edges):
            if len(edge) != 3:
                raise StructuralError(f"edge {k} must be [tail, head, capacity]")
            tails.append(edge[0])
            heads.append(edge[1])
            caps.append(Fraction(edge[2]))
        return Network(nodes, source, tuple(tails), tuple(heads), tuple(caps), interference)

    def to_dict(self) -> dict:
        return {
            "nodes": self.node_count,
            "source": self.source,
            "interference": self.interference,
            "edges": [
                [i, j, (int(c) if c.denominator == 1 else float(c))]
                for _, i, j, c in self.edges()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def make_network(node_count, source, edge_list, interference=PRIMARY) -> Network:
    """Convenience constructor from (tail, head, capacity) triples."""
    tails = tuple(t for t, _, _ in edge_list)
    heads = tuple(h for _, h, _ in edge_list)
    caps = tuple(Fraction(c) for _, _, c in edge_list)
    return Network(node_count, source, tails, heads, caps, interference)


@dataclass(frozen=True)
class Activation:
    """Binary link-activation vector; `active[e]` is 1 if edge e is on."""

    active: tuple[int, ...]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, a in enumerate(self.active) if a)

    @staticmethod
    def from_edges(edge_ids, edge_count: int) -> "Activation":
        bits = [0] * edge_count
        for e in edge_ids:
            bits[e] = 1
        return Activation(tuple(bits))


@dataclass(frozen=True)
class TopologicalOrder:
    order: tuple[int, ...]


@dataclass(frozen=True)
class CycleReport:
    cycle: tuple[int, ...]  # node sequence, first node repeated at the end


@dataclass(frozen=True)
class ProperCut:
    """Node subset containing the source, strictly smaller than V."""

    members: frozenset
    source: int

    def __post_init__(self):
        if self.source not in self.members:
            raise DomainError("a proper cut must contain the source")

    def crossing_edges(self, net: Network) -> list[int]:
        if len(self.members) >= net.node_count:
            raise DomainError("a proper cut must be a strict subset of the nodes")
        return [
            e
            for e, i, j, _ in net.edges()
            if i in self.members and j not in self.members
        ]


def validate_topology(net: Network):
    """Topologically sort the network.

    Returns a TopologicalOrder if the graph is acyclic (smallest node id
    first among ready nodes, so the order is deterministic), otherwise a
    CycleReport carrying one directed cycle.
    """
    indeg = [0] * net.node_count
    for j in net.heads:
        indeg[j] += 1
    out = [[] for _ in range(net.node_count)]
    for e, i, j, _ in net.edges():
        out[i].append(j)
    import heapq

    ready = [v for v in range(net.node_count) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) == net.node_count:
        return TopologicalOrder(tuple(order))
    return CycleReport(_find_cycle(net))


def _find_cycle(net: Network) -> tuple[int, ...]:
    out = [[] for _ in range(net.node_count)]
    for e, i, j, _ in net.edges():
        out[i].append(j)
    color = [0] * net.node_count  # 0 unvisited, 1 on stack, 2 done
    stack: list[int] = []

    def dfs(v):
        color[v] = 1
        stack.append(v)
        for w in sorted(out[v]):
            if color[w] == 1:
                k = stack.index(w)
                return tuple(stack[k:]) + (w,)
            if color[w] == 0:
                found = dfs(w)
                if found:
                    return found
        color[v] = 2
        stack.pop()
        return None

    for v in range(net.node_count):
        if color[v] == 0:
            found = dfs(v)
            if found:
                return found
    raise StructuralError("no cycle found in a graph that failed topological sort")


def is_dag(net: Network) -> bool:
    return isinstance(validate_topology(net), TopologicalOrder)


def enumerate_activations(net: Network, max_edges: int = DEFAULT_ACTIVATION_CAP):
    """All feasible activation vectors, deterministically ordered.

    Primary interference: every matching of the underlying undirected
    multigraph, ordered lexicographically by the sorted edge-id tuples
    (the empty matching comes first).  Wired: just the empty and the
    all-ones vector; any time-share in the cube is a mix of those two
    per edge.
    """
    m = net.edge_count
    if net.interference == WIRED:
        return [Activation((0,) * m), Activation((1,) * m)]
    if m > max_edges:
        raise ResourceLimitError(
            f"{m} edges exceeds the activation enumeration cap of {max_edges}"
        )
    result = []

    def extend(start: int, chosen: list[int], used_nodes: set):
        result.append(Activation.from_edges(chosen, m))
        for e in range(start, m):
            i, j = net.tails[e], net.heads[e]
            if i in used_nodes or j in used_nodes:
                continue
            chosen.append(e)
            used_nodes.update((i, j))
            extend(e + 1, chosen, used_nodes)
            chosen.pop()
            used_nodes.difference_update((i, j))

    extend(0, [], set())
    return result


_ACTIVATION_CACHE: dict = {}


def activation_table(net: Network, max_edges: int = DEFAULT_ACTIVATION_CAP):
    """Cached (activations, 0/1 matrix, float capacities) for a network.

    The matrix row order matches the deterministic enumeration order, so a
    row argmax is the first maximizer among enumerated activations.
    """
    key = (net, max_edges)
    if key not in _ACTIVATION_CACHE:
        acts = enumerate_activations(net, max_edges=max_edges)
        S = np.array([a.active for a in acts], dtype=float)
        caps = np.array([float(c) for c in net.caps])
        _ACTIVATION_CACHE[key] = (tuple(acts), S, caps)
    return _ACTIVATION_CACHE[key]


def is_matching(net: Network, activation: Activation) -> bool:
    """Pairwise endpoint-disjointness check, directions ignored."""
    seen = set()
    for e in activation.edge_ids:
        for v in (net.tails[e], net.heads[e]):
            if v in seen:
                return False
            seen.add(v)
    return True


def cut_value(net: Network, beta: Sequence, cut: ProperCut):
    """Capacity-weighted time-share crossing the cut: sum of c_e * beta_e."""
    for e in range(net.edge_count):
        if not (0 <= beta[e] <= 1):
            raise DomainError(f"beta[{e}] = {beta[e]} outside [0, 1]")
    return sum(net.caps[e] * beta[e] for e in cut.crossing_edges(net))


@lru_cache(maxsize=128)
def edge_arrays(net: Network):
    """Cached (tails, heads, float capacities) as numpy arrays."""
    return (
        np.array(net.tails, dtype=np.intp),
        np.array(net.heads, dtype=np.intp),
        np.array([float(c) for c in net.caps]),
    )


@lru_cache(maxsize=128)
def in_edge_table(net: Network) -> tuple[tuple[int, ...], ...]:
    """Cached per-node tuples of incoming edge ids."""
    table = [[] for _ in range(net.node_count)]
    for e in range(net.edge_count):
        table[net.heads[e]].append(e)
    return tuple(tuple(t) for t in table)


def min_in_degree(net: Network) -> tuple[int, int]:
    """Minimum in-edge count over non-source nodes, with an argmin node.

    Parallel edges count with multiplicity.  Ties go to the lowest node id.
    """
    if net.node_count < 2:
        raise DomainError("min_in_degree needs at least two nodes")
    indeg = [0] * net.node_count
    for j in net.heads:
        indeg[j] += 1
    best = min(
        (v for v in range(net.node_count) if v != net.source),
        key=lambda v: (indeg[v], v),
    )
    return indeg[best], best
