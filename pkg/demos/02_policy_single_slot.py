"""One slot of the max-weight broadcast policy, step by step.

The network is the complete 4-node DAG with node labels r=0, b=1, a=2,
c=3 and packet counters R = (10, 3, 3, 2).  Each step of the policy is
printed: per-edge deficits, per-node minimum deficits with their
minimizer sets, link weights, the max-weight matching, and the in-order
pull forwarding plus one source arrival.
"""

import numpy as np

from dagcast import scenario
from dagcast.policy import (
    PolicyState,
    compute_deficits,
    compute_weights,
    deficit_minimizers,
    policy_step,
)

net = scenario("k4")
names = {0: "r", 1: "b", 2: "a", 3: "c"}
state = PolicyState(R=np.array([10, 3, 3, 2], dtype=np.int64))

view = compute_weights(
    deficit_minimizers(compute_deficits(state, net), net), net
)

print("deficits Q_ij = R_i - R_j:")
for e, i, j, _ in net.edges():
    print(f"  ({names[i]},{names[j]}): {view.Q[e]}")

print("\nminimum deficits and minimizers (ties to the highest node index):")
for j in range(1, 4):
    print(f"  X_{names[j]} = {view.X[j]}, minimizer = {names[view.istar[j]]}")
for v in range(4):
    if view.K[v]:
        print(f"  K_{names[v]} = {{{', '.join(names[u] for u in sorted(view.K[v]))}}}")

print("\nlink weights W_ij = (X_j - sum of X over K_j)^+:")
for e, i, j, _ in net.edges():
    print(f"  ({names[i]},{names[j]}): {view.W[e]}")

state, dec = policy_step(state, net, arrivals=1, slot=0)
active = [(names[net.tails[e]], names[net.heads[e]]) for e in dec.activation.edge_ids]
print(f"\nmax-weight matching: {active}")
for e, (first, count) in sorted(dec.transfers.items()):
    j = names[net.heads[e]]
    print(f"  node {j} pulls packet(s) {list(range(first, first + count))}")
print(f"\ncounters after the slot (one arrival): R = {list(state.R)}")
