"""The max-weight broadcast policy for wireless DAGs.

State is the per-node count of distinct packets received; in-order delivery
makes a packet's identity equal to its index.  Each slot: per-edge deficits,
per-node minimum deficits and minimizer sets, link weights, a max-weight
feasible activation, then in-order pull forwarding with arrivals admitted
at the source at the end of the slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantViolation, StructuralError
from .graph import (
    Activation,
    Network,
    activation_table,
    edge_arrays,
    in_edge_table,
)

# Number of packets a node may still accept equals its smallest deficit
# toward any in-neighbor; the policy stabilizes exactly these quantities.


@dataclass
class PolicyState:
    """Distinct-packet counters plus per-packet arrival bookkeeping."""

    R: np.ndarray  # per-node distinct packets received
    arrival_slots: list[int] = field(default_factory=list)
    delivery_slots: list[int] = field(default_factory=list)  # slot packet p
    # reached every node; grown lazily as min_j R_j advances

    @staticmethod
    def fresh(net: Network) -> "PolicyState":
        return PolicyState(R=np.zeros(net.node_count, dtype=np.int64))


@dataclass
class DeficitView:
    """Per-slot derived quantities of the policy."""

    Q: np.ndarray  # per-edge deficit
    istar: dict  # non-source node -> chosen minimizer in-neighbor
    K: dict  # node -> set of nodes it minimizes for
    X: np.ndarray  # per-node minimum deficit (0 at the source)
    W: np.ndarray = None  # per-edge weight


@dataclass
class SlotDecision:
    activation: Activation
    transfers: dict  # edge id -> (first packet index, count)
    arrivals: int


def compute_deficits(state: PolicyState, net: Network) -> DeficitView:
    """Per-edge deficits R_tail - R_head; all must be nonnegative."""
    tails, heads, _ = edge_arrays(net)
    R = state.R
    Q = R[tails] - R[heads]
    if (Q < 0).any():
        e = int(np.argmin(Q))
        raise InvariantViolation(
            f"negative deficit {Q[e]} on edge {e}; forwarding bug"
        )
    return DeficitView(Q=Q, istar={}, K={}, X=np.zeros(net.node_count, dtype=np.int64))


def deficit_minimizers(view: DeficitView, net: Network) -> DeficitView:
    """Fill the minimizer choices, minimizer sets and minimum deficits.

    Ties among in-neighbors go to the highest node index, which makes every
    slot decision deterministic.
    """
    K = {v: set() for v in range(net.node_count)}
    istar = {}
    X = np.zeros(net.node_count, dtype=np.int64)
    table = in_edge_table(net)
    for j in range(net.node_count):
        if j == net.source:
            continue
        ins = table[j]
        if not ins:
            raise StructuralError(f"node {j} has no in-edges; not rooted")
        best = min(ins, key=lambda e: (view.Q[e], -net.tails[e]))
        istar[j] = net.tails[best]
        X[j] = view.Q[best]
        K[istar[j]].add(j)
    view.istar = istar
    view.K = K
    view.X = X
    return view


def compute_weights(view: DeficitView, net: Network) -> DeficitView:
    """Per-edge weight: (X_head - sum of X over the head's minimizer set)+."""
    w_node = np.zeros(net.node_count, dtype=np.int64)
    for j in range(net.node_count):
        if j == net.source:
            continue
        w_node[j] = max(0, view.X[j] - sum(view.X[k] for k in view.K[j]))
    _, heads, _ = edge_arrays(net)
    view.W = w_node[heads]
    # Edges into the source (impossible in a rooted DAG) carry no weight.
    for e in range(net.edge_count):
        if net.heads[e] == net.source:
            view.W[e] = 0
    return view


def max_weight_activation(W, net: Network, table=None) -> Activation:
    """Exhaustive scan for an activation maximizing sum of c_e * W_e.

    Ties resolve to the first maximizer in enumeration order, so the empty
    activation wins when all weights are zero.  `table` is a cached
    activation table; when omitted the default enumeration cap applies.
    """
    if table is None:
        table = activation_table(net)
    acts, S, caps = table
    scores = S @ (caps * np.asarray(W, dtype=float))
    return acts[int(np.argmax(scores))]


def apply_forwarding(
    state: PolicyState,
    net: Network,
    view: DeficitView,
    activation: Activation,
    arrivals: int,
    slot: int,
) -> tuple[PolicyState, SlotDecision]:
    """Pull packets over activated links, then admit arrivals at the source.

    Each non-source node gains min(activated in-capacity, X_j) packets,
    split across its activated in-edges in edge-id order with per-edge
    capacity respected, so the pulled ranges are disjoint and contiguous.
    """
    R = state.R
    transfers = {}
    gains = np.zeros(net.node_count, dtype=np.int64)
    active = set(activation.edge_ids)
    table = in_edge_table(net)
    for j in range(net.node_count):
        if j == net.source:
            continue
        ins = [e for e in table[j] if e in active]
        if not ins:
            continue
        incap = sum(int(net.caps[e]) for e in ins)
        pull = min(incap, int(view.X[j]))
        gains[j] = pull
        nxt = int(R[j]) + 1
        for e in ins:
            take = min(int(net.caps[e]), pull)
            if take > 0:
                if nxt + take - 1 > int(R[net.tails[e]]):
                    raise InvariantViolation(
                        f"edge {e} would forward packets its tail lacks"
                    )
                transfers[e] = (nxt, take)
                nxt += take
                pull -= take
    R = R + gains
    R[net.source] += arrivals
    new_state = PolicyState(
        R=R,
        arrival_slots=state.arrival_slots,
        delivery_slots=state.delivery_slots,
    )
    for _ in range(arrivals):
        new_state.arrival_slots.append(slot)
    # Packets that have now reached every node are recorded for delays.
    full = int(R.min())
    while len(new_state.delivery_slots) < full:
        new_state.delivery_slots.append(slot)
    tails, heads, _ = edge_arrays(net)
    if (new_state.R[tails] < new_state.R[heads]).any():
        raise InvariantViolation("negative deficit after forwarding")
    return new_state, SlotDecision(activation, transfers, arrivals)


def policy_step(
    state: PolicyState,
    net: Network,
    arrivals: int,
    slot: int,
    table=None,
) -> tuple[PolicyState, SlotDecision]:
    """One full slot: deficits, minimizers, weights, activation, forwarding."""
    view = compute_weights(deficit_minimizers(compute_deficits(state, net), net), net)
    act = max_weight_activation(view.W, net, table)
    return apply_forwarding(state, net, view, act, arrivals, slot)
