"""Multiclass broadcast for arbitrary (possibly cyclic) topologies.

Each class is a source-first node permutation; keeping only the edges that
point forward in the permutation embeds a DAG.  Packets are admitted to
classes one by one, every class runs the DAG policy bookkeeping on its own
embedded DAG, and link weights are combined across classes by taking the
per-edge maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .graph import Activation, Network, in_edge_table
from .policy import PolicyState, SlotDecision, max_weight_activation
from .rng import SplitMix64


@dataclass(frozen=True)
class ClassSpec:
    """A source-first permutation and the edge set it embeds."""

    permutation: tuple[int, ...]
    edge_ids: tuple[int, ...]

    @staticmethod
    def from_permutation(net: Network, perm) -> "ClassSpec":
        perm = tuple(perm)
        if perm[0] != net.source:
            raise DomainError("class permutation must start at the source")
        if sorted(perm) != list(range(net.node_count)):
            raise DomainError("class permutation must cover all nodes")
        rank = {v: k for k, v in enumerate(perm)}
        edges = tuple(
            e
            for e, i, j, _ in net.edges()
            if rank[i] < rank[j]
        )
        return ClassSpec(perm, edges)

    def reachable(self, net: Network) -> frozenset:
        seen = {net.source}
        frontier = [net.source]
        while frontier:
            v = frontier.pop()
            for e in self.edge_ids:
                if net.tails[e] == v and net.heads[e] not in seen:
                    seen.add(net.heads[e])
                    frontier.append(net.heads[e])
        return frozenset(seen)


@dataclass
class MulticlassState:
    class_states: list[PolicyState]
    admitted: list[int]

    @staticmethod
    def fresh(net: Network, classes) -> "MulticlassState":
        return MulticlassState(
            class_states=[PolicyState.fresh(net) for _ in classes],
            admitted=[0] * len(classes),
        )


def make_classes(net: Network, K: int, seed: int) -> list[ClassSpec]:
    """K uniformly random source-first permutations from a seeded stream.

    Classes are drawn sequentially, so the list for K is a prefix of the
    list for K + 1 under the same seed.
    """
    if K < 1:
        raise DomainError("need at least one class")
    rng = SplitMix64(seed)
    others = [v for v in range(net.node_count) if v != net.source]
    classes = []
    for _ in range(K):
        perm = others[:]
        rng.shuffle(perm)
        classes.append(ClassSpec.from_permutation(net, (net.source, *perm)))
    return classes


@dataclass
class ClassView:
    """Per-class deficits restricted to the class's embedded DAG.

    Nodes without class in-edges are outside the class (their minimum
    deficit is treated as zero and they never pull class packets).
    """

    X: np.ndarray
    istar: dict
    K_sets: dict
    W_edge: dict  # global edge id -> weight
    active_nodes: frozenset


def class_view(state: PolicyState, spec: ClassSpec, net: Network) -> ClassView:
    R = state.R
    in_class = {}
    for e in spec.edge_ids:
        in_class.setdefault(net.heads[e], []).append(e)
    X = np.zeros(net.node_count, dtype=np.int64)
    istar = {}
    K_sets = {v: set() for v in range(net.node_count)}
    for j, ins in in_class.items():
        best = min(ins, key=lambda e: (R[net.tails[e]] - R[j], -net.tails[e]))
        q = int(R[net.tails[best]]) - int(R[j])
        if q < 0:
            raise DomainError(f"negative class deficit at node {j}")
        X[j] = q
        istar[j] = net.tails[best]
        K_sets[istar[j]].add(j)
    W_edge = {}
    for e in spec.edge_ids:
        j = net.heads[e]
        W_edge[e] = max(0, int(X[j]) - sum(int(X[k]) for k in K_sets[j]))
    return ClassView(X, istar, K_sets, W_edge, frozenset(in_class))


def admit_packet(state: MulticlassState, classes, net: Network) -> int:
    """Class index minimizing the summed minimum deficits of the nodes the
    source currently minimizes for; ties to the lowest class index."""
    if not classes:
        raise DomainError("no classes to admit into")
    best, best_cost = 0, None
    for l, spec in enumerate(classes):
        view = class_view(state.class_states[l], spec, net)
        cost = sum(int(view.X[j]) for j in view.K_sets[net.source])
        if best_cost is None or cost < best_cost:
            best, best_cost = l, cost
    return best


def combined_weights(state: MulticlassState, classes, net: Network):
    """Per-edge maximum weight across classes and the winning class index."""
    views = [class_view(state.class_states[k], spec, net) for k, spec in enumerate(classes)]
    W = np.zeros(net.edge_count)
    winner = [None] * net.edge_count
    for e in range(net.edge_count):
        for k, view in enumerate(views):
            if e in view.W_edge:
                w = view.W_edge[e]
                if winner[e] is None or w > W[e]:
                    W[e] = w
                    winner[e] = k
    return W, winner, views


def multiclass_step(
    state: MulticlassState,
    classes,
    net: Network,
    arrivals: int,
    slot: int,
    table=None,
) -> tuple[MulticlassState, SlotDecision]:
    """One slot of the multiclass policy.

    Weights come from the pre-admission snapshot (so a single class on a
    DAG reproduces the plain DAG policy exactly); arrivals are then admitted
    one by one; activated edges forward packets of their winning class under
    that class's pull rule.
    """
    W, winner, views = combined_weights(state, classes, net)

    for _ in range(arrivals):
        l = admit_packet(state, classes, net)
        cs = state.class_states[l]
        cs.R[net.source] += 1
        cs.arrival_slots.append(slot)
        state.admitted[l] += 1

    act = max_weight_activation(W, net, table)
    active = set(act.edge_ids)

    # Pull per (class, node): activated in-edges whose winner is that class.
    transfers = {}
    gains = [dict() for _ in classes]  # per class: node -> packet gain
    table_in = in_edge_table(net)
    for j in range(net.node_count):
        if j == net.source:
            continue
        by_class = {}
        for e in table_in[j]:
            if e in active and winner[e] is not None:
                by_class.setdefault(winner[e], []).append(e)
        for k, edges in by_class.items():
            view = views[k]
            incap = sum(int(net.caps[e]) for e in edges)
            pull = min(incap, int(view.X[j]))
            if pull <= 0:
                continue
            gains[k][j] = pull
            nxt = int(state.class_states[k].R[j]) + 1
            for e in edges:
                take = min(int(net.caps[e]), pull)
                if take > 0:
                    transfers[e] = (nxt, take)
                    nxt += take
                    pull -= take
    for k, g in enumerate(gains):
        cs = state.class_states[k]
        for j, inc in g.items():
            cs.R[j] += inc
        if g:
            spec = classes[k]
            reach = spec.reachable(net)
            if len(reach) == net.node_count:
                full = int(cs.R.min())
                while len(cs.delivery_slots) < full:
                    cs.delivery_slots.append(slot)
    return state, SlotDecision(act, transfers, arrivals)
