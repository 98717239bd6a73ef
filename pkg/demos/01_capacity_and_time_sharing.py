"""Broadcast capacity of the complete 4-node DAG.

Under primary interference only a matching of links can be active in a
slot.  The capacity LP finds the best randomized time-sharing between
matchings so that every node's incoming capacity covers a common rate.
On this network that rate is 1/2: the source alone can push at most one
packet per slot, and it must split its attention between its three
out-neighbors while relays forward in parallel.
"""

from dagcast import cut_bound_oracle, lambda_dag, scenario, sparse_support

net = scenario("k4")
print(net.to_json())

res = lambda_dag(net)
print(f"\nbroadcast capacity lambda = {res.lam}")
print("per-edge time shares:", [round(float(b), 4) for b in res.beta])

print("\nactivation distribution:")
for act, p in res.support:
    edges = [(net.tails[e], net.heads[e]) for e in act.edge_ids]
    print(f"  p = {p:.4f}  activate {edges}")

# The brute-force cut oracle maximizes the minimum proper cut instead and
# must agree on any DAG.
print("\ncut-set bound:", cut_bound_oracle(net))

# A basic solution of the LP never needs more than |E| + 1 activations.
sparse = sparse_support(res)
print(f"sparse support: {len(sparse.support)} activations (<= {net.edge_count + 1})")
