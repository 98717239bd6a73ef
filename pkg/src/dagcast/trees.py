"""Spanning arborescences: enumeration, counting, packing and a tree policy.

An arborescence here is a spanning tree rooted at the network source with
every edge directed away from the root, stored as a set of edge ids.  The
packing search and the edge-exchange step operate on unit-capacity
multigraphs; integral capacities are expanded to parallel edges first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimitError
from .graph import (
    WIRED,
    Network,
    activation_table,
    enumerate_activations,
    min_in_degree,
)
from .lp import FEAS_TOL, solve_lp

PACKING_NODE_LIMIT = 8
PACKING_EDGE_LIMIT = 16


@dataclass(frozen=True)
class Arborescence:
    edge_ids: frozenset
    root: int

    def serialize(self) -> list[int]:
        return sorted(self.edge_ids)


@dataclass(frozen=True)
class TreePacking:
    trees: tuple[Arborescence, ...]

    def __post_init__(self):
        seen = set()
        for t in self.trees:
            if seen & t.edge_ids:
                raise DomainError("packing trees share an edge")
            seen |= t.edge_ids


def is_arborescence(net: Network, edge_ids, root=None) -> bool:
    """One in-edge per non-root node, no cycles, all nodes reachable."""
    root = net.source if root is None else root
    parent_edge = {}
    for e in edge_ids:
        j = net.heads[e]
        if j == root or j in parent_edge:
            return False
        parent_edge[j] = e
    if len(parent_edge) != net.node_count - 1:
        return False
    for v in range(net.node_count):
        if v == root:
            continue
        seen = set()
        u = v
        while u != root:
            if u in seen or u not in parent_edge:
                return False
            seen.add(u)
            u = net.tails[parent_edge[u]]
    return True


def _iter_arborescences(net: Network):
    """Yield arborescences in deterministic order (per-node in-edge choice,
    nodes ascending, in-edges by edge id, cycle-checked incrementally)."""
    root = net.source
    nodes = [v for v in range(net.node_count) if v != root]
    in_lists = [net.in_edges(v) for v in nodes]
    parent = {}

    def reaches_root(v):
        u = v
        while u != root:
            if u not in parent:
                return False
            u = parent[u]
            if u == v:
                return False
        return True

    def rec(idx):
        if idx == len(nodes):
            if all(reaches_root(v) for v in nodes):
                yield Arborescence(
                    frozenset(parent_edges.values()), root
                )
            return
        v = nodes[idx]
        for e in in_lists[idx]:
            i = net.tails[e]
            parent[v] = i
            parent_edges[v] = e
            # Reject as soon as the partial parent map closes a cycle.
            u, ok, seen = i, True, {v}
            while u in parent:
                if u in seen:
                    ok = False
                    break
                seen.add(u)
                u = parent[u]
            if ok:
                yield from rec(idx + 1)
            del parent[v]
            del parent_edges[v]

    parent_edges = {}
    yield from rec(0)


def enumerate_arborescences(net: Network, cap: int) -> list[Arborescence]:
    """All spanning arborescences rooted at the source, up to `cap`."""
    out = []
    for arb in _iter_arborescences(net):
        if len(out) >= cap:
            raise ResourceLimitError(
                f"more than {cap} arborescences", partial_count=len(out)
            )
        out.append(arb)
    return out


def first_arborescences(net: Network, k: int) -> list[Arborescence]:
    """The first k arborescences in enumeration order."""
    out = []
    for arb in _iter_arborescences(net):
        out.append(arb)
        if len(out) == k:
            break
    if len(out) < k:
        raise DomainError(f"network has only {len(out)} arborescences")
    return out


def fixed_arborescence(net: Network, rank: int) -> Arborescence:
    """Deterministic tree choice: node v takes its (rank mod d_in(v))-th
    in-edge; rank -1 takes the last.  Valid on DAGs where every non-source
    node has an in-edge."""
    edges = []
    for v in range(net.node_count):
        if v == net.source:
            continue
        ins = net.in_edges(v)
        if not ins:
            raise DomainError(f"node {v} has no in-edge")
        edges.append(ins[rank % len(ins)])
    arb = Arborescence(frozenset(edges), net.source)
    if not is_arborescence(net, arb.edge_ids):
        raise DomainError("in-edge choice does not form an arborescence")
    return arb


def count_arborescences(net: Network) -> int:
    """Exact count by the directed matrix-tree theorem.

    Determinant of the in-degree Laplacian with the root row and column
    removed, computed exactly with Bareiss elimination over the integers.
    """
    n = net.node_count
    idx = [v for v in range(n) if v != net.source]
    pos = {v: k for k, v in enumerate(idx)}
    m = len(idx)
    L = [[0] * m for _ in range(m)]
    for e, i, j, _ in net.edges():
        if j == net.source:
            continue
        L[pos[j]][pos[j]] += 1
        if i != net.source:
            L[pos[i]][pos[j]] -= 1
    return _int_det(L)


def _int_det(M) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    M = [row[:] for row in M]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def max_disjoint_packing(net: Network) -> TreePacking:
    """Maximum-cardinality edge-disjoint arborescence packing.

    Exhaustive backtracking: each (node, tree) slot is assigned a distinct
    in-edge; nodes are visited by ascending in-degree so infeasible branches
    fail fast.  Requires unit capacities.
    """
    if any(c != 1 for c in net.caps):
        raise DomainError(
            "packing requires unit capacities; expand_unit_capacities first"
        )
    if net.node_count > PACKING_NODE_LIMIT or net.edge_count > PACKING_EDGE_LIMIT:
        raise ResourceLimitError(
            f"packing search limited to {PACKING_NODE_LIMIT} nodes / "
            f"{PACKING_EDGE_LIMIT} edges"
        )
    if net.node_count < 2:
        raise DomainError("packing needs at least two nodes")
    k_max, _ = min_in_degree(net)
    for k in range(k_max, 0, -1):
        trees = _search_packing(net, k)
        if trees is not None:
            return TreePacking(tuple(trees))
    return TreePacking(())


def _search_packing(net: Network, k: int):
    root = net.source
    indeg = {v: len(net.in_edges(v)) for v in range(net.node_count) if v != root}
    nodes = sorted(indeg, key=lambda v: (indeg[v], v))
    in_lists = {v: net.in_edges(v) for v in nodes}
    slots = [(v, t) for v in nodes for t in range(k)]
    parent = [dict() for _ in range(k)]  # per-tree parent map
    chosen = [dict() for _ in range(k)]  # per-tree node -> edge id
    used = set()

    def acyclic_after(t, v, tail):
        # Adding parent[v] = tail creates a cycle iff v is an ancestor of tail.
        u = tail
        while True:
            if u == v:
                return False
            if u not in parent[t]:
                return True
            u = parent[t][u]

    def rec(s):
        if s == len(slots):
            return True
        v, t = slots[s]
        for e in in_lists[v]:
            if e in used:
                continue
            tail = net.tails[e]
            if not acyclic_after(t, v, tail):
                continue
            used.add(e)
            parent[t][v] = tail
            chosen[t][v] = e
            if rec(s + 1):
                return True
            used.discard(e)
            del parent[t][v]
            del chosen[t][v]
        return False

    if not rec(0):
        return None
    trees = []
    for t in range(k):
        arb = Arborescence(frozenset(chosen[t].values()), root)
        assert is_arborescence(net, arb.edge_ids)
        trees.append(arb)
    return trees


def exchange_packing_edges(
    net: Network, packing: TreePacking, a: int, b: int, c: int
) -> TreePacking:
    """Rearrange a packing so no single tree holds both (a,b) and (b,c).

    If some tree holds both, its (a,b) is swapped with the in-edge (d,b)
    of another tree, d not in {a, c}; both modified trees are re-verified.
    """
    if len(packing.trees) < 2:
        raise DomainError("edge exchange needs a packing of size at least 2")

    def has(tree, tail, head):
        return next(
            (
                e
                for e in tree.edge_ids
                if net.tails[e] == tail and net.heads[e] == head
            ),
            None,
        )

    offender = None
    for idx, tree in enumerate(packing.trees):
        e_ab = has(tree, a, b)
        e_bc = has(tree, b, c)
        if e_ab is not None and e_bc is not None:
            offender = (idx, e_ab)
            break
    if offender is None:
        return packing
    idx1, e_ab = offender
    for idx2, other in enumerate(packing.trees):
        if idx2 == idx1:
            continue
        e_db = next(
            (
                e
                for e in other.edge_ids
                if net.heads[e] == b and net.tails[e] not in (a, c)
            ),
            None,
        )
        if e_db is None:
            continue
        t1 = (packing.trees[idx1].edge_ids - {e_ab}) | {e_db}
        t2 = (other.edge_ids - {e_db}) | {e_ab}
        if not (is_arborescence(net, t1) and is_arborescence(net, t2)):
            continue
        trees = list(packing.trees)
        trees[idx1] = Arborescence(frozenset(t1), net.source)
        trees[idx2] = Arborescence(frozenset(t2), net.source)
        return TreePacking(tuple(trees))
    raise DomainError("no valid exchange partner tree found")


def tree_restricted_capacity(net: Network, trees, max_edges=None) -> float:
    """Best total rate over given trees under feasible link time-sharing.

    Maximize the sum of per-tree rates subject to the load on each edge
    (sum of rates of trees using it) staying within its activated capacity.
    """
    trees = list(trees)
    if not trees:
        return 0.0
    for tree in trees:
        if not is_arborescence(net, tree.edge_ids, tree.root):
            raise DomainError("input tree is not a spanning arborescence")
    K = len(trees)
    E = net.edge_count
    caps = np.array([float(c) for c in net.caps])
    if net.interference == WIRED:
        # beta = 1: per-edge load constraint sum_k 1[e in T_k] r_k <= c_e.
        A_ub, b_ub = [], []
        for e in range(E):
            row = np.zeros(K)
            for k, tree in enumerate(trees):
                if e in tree.edge_ids:
                    row[k] = 1.0
            if row.any():
                A_ub.append(row)
                b_ub.append(caps[e])
        res = solve_lp(np.ones(K), A_ub, b_ub)
        return float(res.value)
    kwargs = {} if max_edges is None else {"max_edges": max_edges}
    acts = enumerate_activations(net, **kwargs)
    S = np.array([act.active for act in acts], dtype=float)
    L = len(acts)
    # Columns: [r_1..r_K, p_1..p_L].
    A_ub, b_ub = [], []
    for e in range(E):
        row = np.zeros(K + L)
        hit = False
        for k, tree in enumerate(trees):
            if e in tree.edge_ids:
                row[k] = 1.0
                hit = True
        if hit:
            row[K:] = -caps[e] * S[:, e]
            A_ub.append(row)
            b_ub.append(0.0)
    A_eq = np.zeros((1, K + L))
    A_eq[0, K:] = 1.0
    c = np.zeros(K + L)
    c[:K] = 1.0
    res = solve_lp(c, A_ub, b_ub, A_eq, [1.0])
    return float(res.value)


@dataclass
class TreePolicyState:
    """Per-tree FIFO edge backlogs plus bookkeeping for delay metrics."""

    queues: list[dict]  # per tree: edge id -> deque of packet ids
    admitted: list[int]  # per tree packet counts
    arrival_slots: list[int] = field(default_factory=list)
    remaining_edges: dict = field(default_factory=dict)  # packet -> edges left
    received: np.ndarray = None  # per node distinct packets received
    delivery_slots: dict = field(default_factory=dict)
    next_packet: int = 1

    @staticmethod
    def fresh(net: Network, trees) -> "TreePolicyState":
        return TreePolicyState(
            queues=[{e: deque() for e in tree.edge_ids} for tree in trees],
            admitted=[0] * len(trees),
            received=np.zeros(net.node_count, dtype=np.int64),
        )

    def total_backlog(self) -> int:
        return sum(len(q) for qs in self.queues for q in qs.values())


def _tree_children(net: Network, tree: Arborescence):
    """Map node -> its outgoing tree edges."""
    children = {v: [] for v in range(net.node_count)}
    for e in tree.edge_ids:
        children[net.tails[e]].append(e)
    return children


def tree_policy_step(
    state: TreePolicyState,
    net: Network,
    trees,
    arrivals: int,
    slot: int,
    table=None,
):
    """One slot of the tree-balancing baseline policy.

    Arrivals join the tree with the smallest total backlog; edge weights sum
    the per-tree differential backlogs; the max-weight feasible activation
    is chosen; activated edges drain capacity shared across trees
    proportionally to their weights.
    """
    if not trees:
        raise DomainError("tree policy needs at least one tree")
    trees = list(trees)
    children = [_tree_children(net, tree) for tree in trees]

    # Differential backlog per (tree, edge), floored at zero.
    diff = [dict() for _ in trees]
    W = np.zeros(net.edge_count)
    for k, tree in enumerate(trees):
        for e in tree.edge_ids:
            down = sum(
                len(state.queues[k][e2]) for e2 in children[k][net.heads[e]]
            )
            d = max(0, len(state.queues[k][e]) - down)
            diff[k][e] = d
            W[e] += d

    if table is None:
        table = activation_table(net)
    acts, S, caps = table
    scores = S @ (caps * W)
    act = acts[int(np.argmax(scores))]

    # Drain activated edges: capacity split across trees by weight.
    for e in act.edge_ids:
        cap = int(net.caps[e])
        holders = [k for k in range(len(trees)) if e in trees[k].edge_ids]
        if not holders or cap == 0:
            continue
        weights = [diff[k][e] for k in holders]
        total = sum(weights)
        share = {}
        if total == 0:
            share = {k: 0 for k in holders}
            share[holders[0]] = cap
        else:
            rem = cap
            fracs = []
            for k, w in zip(holders, weights):
                q = cap * w // total
                share[k] = q
                rem -= q
                fracs.append((-(cap * w % total), k))
            for _, k in sorted(fracs):
                if rem <= 0:
                    break
                share[k] += 1
                rem -= 1
        for k in holders:
            take = min(share[k], len(state.queues[k][e]))
            for _ in range(take):
                p = state.queues[k][e].popleft()
                head = net.heads[e]
                state.received[head] += 1
                state.remaining_edges[p] -= 1
                if state.remaining_edges[p] == 0:
                    state.delivery_slots[p] = slot
                    del state.remaining_edges[p]
                for e2 in children[k][head]:
                    state.queues[k][e2].append(p)

    # Admit arrivals to the least-backlogged tree.
    for _ in range(arrivals):
        backlogs = [sum(len(q) for q in qs.values()) for qs in state.queues]
        k = int(np.argmin(backlogs))
        p = state.next_packet
        state.next_packet += 1
        state.arrival_slots.append(slot)
        state.admitted[k] += 1
        state.received[net.source] += 1
        state.remaining_edges[p] = len(trees[k].edge_ids)
        for e in children[k][net.source]:
            state.queues[k][e].append(p)
    return state, act
