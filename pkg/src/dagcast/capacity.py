"""Broadcast-capacity computation.

The DAG capacity is the optimum of a small LP: maximize the common rate
lambda subject to lambda being covered by the capacity-weighted time share
entering every non-source node, with the time-share vector a convex
combination of feasible activations.  A brute-force variant with one
constraint per proper cut serves as an oracle for the cut-set bound and
also works on cyclic graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, ResourceLimitError
from .graph import (
    WIRED,
    Activation,
    Network,
    enumerate_activations,
    is_dag,
)
from .lp import FEAS_TOL, solve_lp

CUT_NODE_LIMIT = 12


@dataclass
class CapacityResult:
    """Capacity value, per-edge time shares and a distribution over activations."""

    lam: float
    beta: np.ndarray
    support: list[tuple[Activation, float]]

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "beta": [float(b) for b in self.beta],
            "support": [
                {"edges": list(act.edge_ids), "p": float(p)}
                for act, p in self.support
            ],
        }


@dataclass
class MulticlassCapacityResult:
    total: float
    per_class: list[tuple[float, np.ndarray]]  # (class rate, class edge shares)


def _in_capacity_columns(net: Network, activations, edge_subset=None):
    """Matrix M[v, l] = capacity entering node v under activation l."""
    caps = np.array([float(c) for c in net.caps])
    S = np.array([act.active for act in activations], dtype=float)  # L x E
    if edge_subset is not None:
        mask = np.zeros(net.edge_count)
        mask[list(edge_subset)] = 1.0
        caps = caps * mask
    M = np.zeros((net.node_count, len(activations)))
    for e in range(net.edge_count):
        M[net.heads[e]] += caps[e] * S[:, e]
    return M


def _beta_from_support(net: Network, activations, p):
    S = np.array([act.active for act in activations], dtype=float)
    return p @ S


def lambda_dag(net: Network, max_edges=None) -> CapacityResult:
    """Broadcast capacity of a DAG via the per-node cut LP."""
    if not is_dag(net):
        raise DomainError("lambda_dag requires an acyclic network")
    if net.interference == WIRED:
        # The cube's maximal point dominates: beta = 1 on every edge.
        lam = min(
            (
                float(sum(net.caps[e] for e in net.in_edges(v)))
                for v in range(net.node_count)
                if v != net.source
            ),
            default=0.0,
        )
        acts = enumerate_activations(net)
        return CapacityResult(lam, np.ones(net.edge_count), [(acts[1], 1.0)])

    kwargs = {} if max_edges is None else {"max_edges": max_edges}
    acts = enumerate_activations(net, **kwargs)
    L = len(acts)
    M = _in_capacity_columns(net, acts)
    nodes = [v for v in range(net.node_count) if v != net.source]
    # Columns: [lambda, p_1..p_L].
    A_ub = np.zeros((len(nodes), 1 + L))
    for row, v in enumerate(nodes):
        A_ub[row, 0] = 1.0
        A_ub[row, 1:] = -M[v]
    A_eq = np.ones((1, 1 + L))
    A_eq[0, 0] = 0.0
    c = np.zeros(1 + L)
    c[0] = 1.0
    res = solve_lp(c, A_ub, np.zeros(len(nodes)), A_eq, [1.0])
    p = res.x[1:]
    support = [(acts[l], float(p[l])) for l in range(L) if p[l] > FEAS_TOL]
    beta = _beta_from_support(net, acts, p)
    return CapacityResult(float(res.value), beta, support)


def proper_cuts(net: Network):
    """All node subsets containing the source, strictly inside V."""
    others = [v for v in range(net.node_count) if v != net.source]
    for size in range(len(others)):
        for extra in combinations(others, size):
            yield frozenset((net.source, *extra))


def cut_bound_oracle(net: Network, max_edges=None) -> float:
    """Cut-set upper bound: max over time shares of the minimum proper cut.

    Solved by brute force over all 2^(|V|-1) - 1 proper cuts, so it also
    applies to cyclic graphs.
    """
    if net.node_count > CUT_NODE_LIMIT:
        raise ResourceLimitError(
            f"cut enumeration limited to {CUT_NODE_LIMIT} nodes"
        )
    cut_edge_sets = [
        [e for e, i, j, _ in net.edges() if i in U and j not in U]
        for U in proper_cuts(net)
    ]
    if net.interference == WIRED:
        return min(
            float(sum(net.caps[e] for e in edges)) for edges in cut_edge_sets
        )
    kwargs = {} if max_edges is None else {"max_edges": max_edges}
    acts = enumerate_activations(net, **kwargs)
    L = len(acts)
    caps = np.array([float(c) for c in net.caps])
    S = np.array([act.active for act in acts], dtype=float)
    A_ub = np.zeros((len(cut_edge_sets), 1 + L))
    for row, edges in enumerate(cut_edge_sets):
        A_ub[row, 0] = 1.0
        for e in edges:
            A_ub[row, 1:] -= caps[e] * S[:, e]
    A_eq = np.ones((1, 1 + L))
    A_eq[0, 0] = 0.0
    c = np.zeros(1 + L)
    c[0] = 1.0
    res = solve_lp(c, A_ub, np.zeros(A_ub.shape[0]), A_eq, [1.0])
    return float(res.value)


def sparse_support(result: CapacityResult) -> CapacityResult:
    """Equivalent result whose support is a basic feasible solution.

    Restricting the probabilities to a basis of the linear system
    (support vectors reproduce beta, probabilities sum to one) caps the
    support size at |E| + 1.
    """
    if not result.support:
        raise DomainError("result has an empty support")
    acts = [act for act, _ in result.support]
    probs = np.array([p for _, p in result.support])
    if abs(probs.sum() - 1.0) > 1e-7 or (probs < -FEAS_TOL).any():
        raise DomainError("support probabilities are not a distribution")
    S = np.array([act.active for act in acts], dtype=float)  # L x E
    if np.abs(probs @ S - np.asarray(result.beta, dtype=float)).max() > 1e-7:
        raise DomainError("support does not reproduce the time-share vector")
    A_eq = np.vstack([S.T, np.ones(len(acts))])
    b_eq = np.concatenate([np.asarray(result.beta, dtype=float), [1.0]])
    res = solve_lp(np.zeros(len(acts)), None, None, A_eq, b_eq)
    p = res.x
    support = [
        (acts[l], float(p[l])) for l in range(len(acts)) if p[l] > FEAS_TOL
    ]
    return CapacityResult(result.lam, np.asarray(result.beta, dtype=float), support)


def _class_is_dag(net: Network, edge_set) -> bool:
    sub = Network(
        node_count=net.node_count,
        source=net.source,
        tails=tuple(net.tails[e] for e in edge_set),
        heads=tuple(net.heads[e] for e in edge_set),
        caps=tuple(net.caps[e] for e in edge_set),
        interference=net.interference,
    )
    return is_dag(sub)


def multiclass_capacity(net: Network, classes, max_edges=None) -> MulticlassCapacityResult:
    """Best total rate over per-class time shares whose sum is feasible.

    `classes` is a sequence of edge-id sets, each inducing a DAG.  Class k
    only loads its own edges; the summed per-edge shares must lie in the
    feasible activation region.
    """
    classes = [sorted(set(es)) for es in classes]
    if not classes:
        return MulticlassCapacityResult(0.0, [])
    for k, es in enumerate(classes):
        for e in es:
            if not (0 <= e < net.edge_count):
                raise DomainError(f"class {k} refers to unknown edge {e}")
        if not _class_is_dag(net, es):
            raise DomainError(f"class {k} edge set induces a cycle")

    K = len(classes)
    E = net.edge_count
    caps = np.array([float(c) for c in net.caps])
    # Column layout: [lambda_1..lambda_K | beta^k_e blocks | p_l (primary)].
    beta_cols = {}
    col = K
    for k, es in enumerate(classes):
        for e in es:
            beta_cols[(k, e)] = col
            col += 1
    if net.interference == WIRED:
        n_cols = col
        acts = None
    else:
        kwargs = {} if max_edges is None else {"max_edges": max_edges}
        acts = enumerate_activations(net, **kwargs)
        S = np.array([act.active for act in acts], dtype=float)
        n_cols = col + len(acts)

    nodes = [v for v in range(net.node_count) if v != net.source]
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for k, es in enumerate(classes):
        for v in nodes:
            row = np.zeros(n_cols)
            row[k] = 1.0
            for e in es:
                if net.heads[e] == v:
                    row[beta_cols[(k, e)]] = -caps[e]
            A_ub.append(row)
            b_ub.append(0.0)
    for e in range(E):
        row = np.zeros(n_cols)
        hit = False
        for k in range(K):
            if (k, e) in beta_cols:
                row[beta_cols[(k, e)]] = 1.0
                hit = True
        if net.interference == WIRED:
            if hit:
                A_ub.append(row)
                b_ub.append(1.0)
        else:
            row[col:] = -S[:, e]
            A_eq.append(row)
            b_eq.append(0.0)
    if net.interference != WIRED:
        row = np.zeros(n_cols)
        row[col:] = 1.0
        A_eq.append(row)
        b_eq.append(1.0)

    c = np.zeros(n_cols)
    c[:K] = 1.0
    res = solve_lp(c, A_ub, b_ub, A_eq or None, b_eq or None)
    per_class = []
    for k, es in enumerate(classes):
        beta_k = np.zeros(E)
        for e in es:
            beta_k[e] = res.x[beta_cols[(k, e)]]
        per_class.append((float(res.x[k]), beta_k))
    return MulticlassCapacityResult(float(res.value), per_class)
