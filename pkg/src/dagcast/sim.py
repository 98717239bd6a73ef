"""Slotted simulation harness.

Drives the broadcast policies for a fixed horizon under i.i.d. arrivals and
collects throughput, per-packet delay and stability metrics.  Sweeps run the
cross product of (policy, rate, seed) cells, optionally in parallel, and
emit CSV rows in deterministic order.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .capacity import cut_bound_oracle, multiclass_capacity
from .errors import DomainError, InvariantViolation
from .graph import (
    DEFAULT_ACTIVATION_CAP,
    Network,
    activation_table,
    edge_arrays,
    is_dag,
)
from .multiclass import MulticlassState, class_view, make_classes, multiclass_step
from .policy import (
    PolicyState,
    compute_deficits,
    compute_weights,
    deficit_minimizers,
    policy_step,
)
from .rng import SplitMix64
from .trees import TreePolicyState, fixed_arborescence, tree_policy_step

DEFICIT_SAMPLE_PERIOD = 100
INSTABILITY_SLOPE_THRESHOLD = 0.01


@dataclass(frozen=True)
class ArrivalProcess:
    """I.i.d. integer arrivals with mean `rate` packets per slot.

    bernoulli-batch: a batch of ceil(rate) packets with probability
    rate/ceil(rate), else nothing — integer arrivals with exact mean and
    bounded second moment.  poisson: standard Poisson counts.
    """

    kind: str = "bernoulli-batch"
    rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("bernoulli-batch", "poisson"):
            raise DomainError(f"unknown arrival process {self.kind!r}")
        if self.rate < 0:
            raise DomainError(f"arrival rate {self.rate} is negative")

    def stream(self, run_seed: int):
        rng = SplitMix64((self.seed << 32) ^ run_seed)
        if self.kind == "bernoulli-batch":
            if self.rate == 0:
                while True:
                    yield 0
            batch = math.ceil(self.rate)
            p = self.rate / batch
            while True:
                yield batch if rng.random() < p else 0
        else:
            L = math.exp(-self.rate)
            while True:
                k, acc = 0, 1.0
                while True:
                    acc *= rng.random()
                    if acc <= L:
                        break
                    k += 1
                yield k


@dataclass
class RunMetrics:
    horizon: int
    final_R: tuple
    throughput: float
    delays: list
    mean_delay: float
    undelivered: int
    deficit_series: list  # (slot, sum of minimum deficits), every 100 slots
    instability_slope: float

    @property
    def unstable(self) -> bool:
        return self.instability_slope > INSTABILITY_SLOPE_THRESHOLD


def parse_policy(spec: str):
    """'pi_star', 'multiclass:K', 'tree' (single spanning tree), 'tree:K'."""
    if spec == "pi_star":
        return ("pi_star",)
    if spec.startswith("multiclass"):
        _, _, arg = spec.partition(":")
        K = int(arg) if arg else 1
        if K < 1:
            raise DomainError("multiclass needs at least one class")
        return ("multiclass", K)
    if spec.startswith("tree"):
        _, _, arg = spec.partition(":")
        k = int(arg) if arg else 1
        if k < 1:
            raise DomainError("tree policy needs at least one tree")
        return ("tree", k)
    raise DomainError(f"unknown policy {spec!r}")


def _instability_slope(series) -> float:
    """Least-squares slope of the deficit-sum series over the last half."""
    tail = series[len(series) // 2 :]
    if len(tail) < 2:
        return 0.0
    x = np.array([s for s, _ in tail], dtype=float)
    y = np.array([v for _, v in tail], dtype=float)
    return float(np.polyfit(x, y, 1)[0])


def _metrics(T, final_R, throughput, arrival_slots, delivery_slots, series):
    delays = [
        delivery_slots[p] - arrival_slots[p] for p in range(len(delivery_slots))
    ]
    mean_delay = float(np.mean(delays)) if delays else float("nan")
    return RunMetrics(
        horizon=T,
        final_R=tuple(int(r) for r in final_R),
        throughput=throughput,
        delays=delays,
        mean_delay=mean_delay,
        undelivered=len(arrival_slots) - len(delivery_slots),
        deficit_series=series,
        instability_slope=_instability_slope(series),
    )


def _check_slot(net, R_before, view, decision, R_after, arrivals, scores=None):
    """Per-slot trace checks: the bound on next-slot minimum deficits, and
    contiguous in-order transfer ranges."""
    recv = np.zeros(net.node_count, dtype=np.int64)
    for e, (first, count) in decision.transfers.items():
        j = net.heads[e]
        if first != R_before[j] + recv[j] + 1:
            raise InvariantViolation(f"edge {e} transfer range not in order")
        recv[j] += count
    recv[net.source] = arrivals
    after = PolicyState(R=R_after)
    view2 = deficit_minimizers(compute_deficits(after, net), net)
    for j in range(net.node_count):
        if j == net.source:
            continue
        bound = max(0, int(view.X[j]) - int(recv[j])) + int(recv[view.istar[j]])
        if view2.X[j] > bound:
            raise InvariantViolation(
                f"minimum-deficit bound violated at node {j}: "
                f"{view2.X[j]} > {bound}"
            )


def run(
    net: Network,
    policy,
    arrivals: ArrivalProcess,
    T: int,
    seed: int,
    check_invariants: bool = False,
    trace=None,
    max_edges=None,
) -> RunMetrics:
    """Drive `policy` for T slots; deterministic given (net, policy, seeds).

    `policy` is a spec string (see parse_policy) or an already-parsed tuple.
    `trace`, if given, is called once per slot with a JSON-ready record.
    """
    if isinstance(policy, str):
        policy = parse_policy(policy)
    if max_edges is None:
        max_edges = max(DEFAULT_ACTIVATION_CAP, net.edge_count)
    table = activation_table(net, max_edges)
    stream = arrivals.stream(seed)
    series = []

    if policy[0] == "pi_star":
        if not is_dag(net):
            raise DomainError("pi_star requires an acyclic network; use multiclass")
        state = PolicyState.fresh(net)
        for t in range(T):
            A = next(stream)
            R_before = state.R.copy()
            view = None
            if check_invariants:
                view = compute_weights(
                    deficit_minimizers(compute_deficits(state, net), net), net
                )
            state, dec = policy_step(state, net, A, t, table)
            if check_invariants:
                _check_slot(net, R_before, view, dec, state.R, A)
                _check_weight_maximal(dec, view.W, table)
            if trace is not None:
                v = view or compute_weights(
                    deficit_minimizers(
                        compute_deficits(PolicyState(R=R_before), net), net
                    ),
                    net,
                )
                trace(_trace_record(t, R_before, v, dec, net))
            if t % DEFICIT_SAMPLE_PERIOD == 0:
                view2 = deficit_minimizers(
                    compute_deficits(state, net), net
                )
                series.append((t, int(view2.X.sum())))
        throughput = float(state.R.min()) / T
        return _metrics(
            T, state.R, throughput, state.arrival_slots, state.delivery_slots, series
        )

    if policy[0] == "multiclass":
        K = policy[1]
        # K may be a class count (random source-first permutations) or an
        # explicit list of ClassSpec instances.
        classes = make_classes(net, K, seed) if isinstance(K, int) else list(K)
        state = MulticlassState.fresh(net, classes)
        from .multiclass import combined_weights

        for t in range(T):
            A = next(stream)
            W = None
            if check_invariants:
                W, _, _ = combined_weights(state, classes, net)
            state, dec = multiclass_step(state, classes, net, A, t, table)
            if check_invariants:
                # class_view raises on negative per-class deficits; here we
                # re-verify that the chosen activation was maximum weight.
                _check_weight_maximal(dec, W, table)
            if t % DEFICIT_SAMPLE_PERIOD == 0:
                total = 0
                for k, spec in enumerate(classes):
                    cv = class_view(state.class_states[k], spec, net)
                    total += int(cv.X.sum())
                series.append((t, total))
        R_total = sum(cs.R for cs in state.class_states)
        arrival_slots = sorted(
            s for cs in state.class_states for s in cs.arrival_slots
        )
        delivery = []
        for cs in state.class_states:
            delivery.extend(
                (a, d)
                for a, d in zip(cs.arrival_slots, cs.delivery_slots)
            )
        delays = [d - a for a, d in delivery]
        mean_delay = float(np.mean(delays)) if delays else float("nan")
        return RunMetrics(
            horizon=T,
            final_R=tuple(int(r) for r in R_total),
            throughput=float(R_total.min()) / T,
            delays=delays,
            mean_delay=mean_delay,
            undelivered=len(arrival_slots) - len(delays),
            deficit_series=series,
            instability_slope=_instability_slope(series),
        )

    if policy[0] == "tree":
        k = policy[1]
        if isinstance(k, int):
            if k == 1:
                trees = [fixed_arborescence(net, -1)]
            else:
                trees = [fixed_arborescence(net, r) for r in range(k)]
        else:
            trees = list(k)
        state = TreePolicyState.fresh(net, trees)
        for t in range(T):
            A = next(stream)
            state, _ = tree_policy_step(state, net, trees, A, t, table)
            if t % DEFICIT_SAMPLE_PERIOD == 0:
                series.append((t, state.total_backlog()))
        if check_invariants:
            if int(state.received[net.source]) != len(state.arrival_slots):
                raise InvariantViolation("source reception count drifted")
            if len(state.delivery_slots) > len(state.arrival_slots):
                raise InvariantViolation("more deliveries than arrivals")
        # delivery_slots is keyed by 1-based packet id here.
        delays = [
            slot - state.arrival_slots[p - 1]
            for p, slot in sorted(state.delivery_slots.items())
        ]
        mean_delay = float(np.mean(delays)) if delays else float("nan")
        return RunMetrics(
            horizon=T,
            final_R=tuple(int(r) for r in state.received),
            throughput=float(min(state.received)) / T,
            delays=delays,
            mean_delay=mean_delay,
            undelivered=len(state.arrival_slots) - len(delays),
            deficit_series=series,
            instability_slope=_instability_slope(series),
        )

    raise DomainError(f"unknown policy kind {policy[0]!r}")


def _check_weight_maximal(decision, W, table):
    acts, S, caps = table
    scores = S @ (caps * np.asarray(W, dtype=float))
    chosen = float(
        np.dot(np.asarray(decision.activation.active, dtype=float), caps * W)
    )
    if chosen < scores.max() - 1e-9:
        raise InvariantViolation("chosen activation is not maximum weight")


def _trace_record(slot, R_before, view, decision, net):
    return {
        "slot": slot,
        "R": [int(r) for r in R_before],
        "X": [int(x) for x in view.X],
        "W": [int(w) for w in view.W] if view.W is not None else None,
        "activation": list(decision.activation.edge_ids),
        "transfers": {
            str(e): [int(first), int(count)]
            for e, (first, count) in sorted(decision.transfers.items())
        },
        "arrivals": decision.arrivals,
    }


# -- sweeps ------------------------------------------------------------------

CSV_HEADER = [
    "policy",
    "lambda",
    "horizon",
    "seed",
    "throughput",
    "mean_delay",
    "undelivered",
    "instability_slope",
]


@dataclass
class SweepRecord:
    policy: str
    lam: float
    horizon: int
    seed: int
    throughput: float = float("nan")
    mean_delay: float = float("nan")
    undelivered: int = -1
    instability_slope: float = float("nan")
    error: str = ""

    def row(self):
        return [
            self.policy,
            _fmt(self.lam),
            self.horizon,
            self.seed,
            _fmt(self.throughput),
            _fmt(self.mean_delay),
            self.undelivered,
            _fmt(self.instability_slope),
        ]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _sweep_cell(args):
    net, policy, lam, T, seed, kind = args
    rec = SweepRecord(policy=policy, lam=lam, horizon=T, seed=seed)
    try:
        m = run(net, policy, ArrivalProcess(kind, lam, seed), T, seed)
    except Exception as exc:  # recorded, not raised: one bad cell
        rec.error = f"{type(exc).__name__}: {exc}"  # must not kill the sweep
        return rec
    rec.throughput = m.throughput
    rec.mean_delay = m.mean_delay
    rec.undelivered = m.undelivered
    rec.instability_slope = m.instability_slope
    return rec


def _thread_cap() -> int:
    raw = os.environ.get("DAGCAST_THREADS", "")
    if raw.strip():
        return max(1, int(raw))
    return os.cpu_count() or 1


def sweep(net, policies, lambdas, T, seeds, kind="bernoulli-batch"):
    """Cross product of runs; rows in deterministic (policy, lambda, seed)
    input order.  Failed cells become rows with an error note instead of
    aborting the sweep.  DAGCAST_THREADS caps parallelism."""
    cells = [
        (net, policy, lam, T, seed, kind)
        for policy in policies
        for lam in lambdas
        for seed in seeds
    ]
    workers = min(_thread_cap(), len(cells)) or 1
    if workers == 1:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_cell, cells))


def write_sweep_csv(records, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())


def multiclass_fraction_curve(net, Ks, seeds, max_edges=None):
    """For each K: the mean over seeds of the achievable multiclass rate
    divided by the cut-set capacity bound.  Returns [(K, mean fraction)]."""
    star = cut_bound_oracle(net, max_edges=max_edges)
    if star <= 0:
        raise DomainError("network has zero broadcast capacity")
    out = []
    for K in Ks:
        fracs = []
        for seed in seeds:
            classes = make_classes(net, K, seed)
            cap = multiclass_capacity(
                net, [set(spec.edge_ids) for spec in classes], max_edges=max_edges
            )
            fracs.append(cap.total / star)
        out.append((K, float(np.mean(fracs))))
    return out


def write_fraction_csv(rows, path, network_name="net"):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["network", "K", "fraction"])
        for K, frac in rows:
            w.writerow([network_name, K, _fmt(frac)])
