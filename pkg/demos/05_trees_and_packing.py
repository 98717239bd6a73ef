"""Spanning arborescences: counting, packing, and why trees lose.

The 10-node mesh has 9! spanning arborescences (each node i > 0 freely
picks any predecessor).  On unit-capacity graphs the maximum number of
edge-disjoint arborescences equals the minimum in-degree.  Routing over
a fixed tree serializes transmissions along paths, so even generous tree
collections fall short of the dynamic policy.
"""

from dagcast import (
    count_arborescences,
    fixed_arborescence,
    max_disjoint_packing,
    min_in_degree,
    scenario,
    tree_restricted_capacity,
)
from dagcast.sim import ArrivalProcess, run

mesh = scenario("mesh10")
print("spanning arborescences of mesh10:", count_arborescences(mesh))

cyc = scenario("cycle4")
packing = max_disjoint_packing(cyc)
print(
    f"\ncycle4: min in-degree = {min_in_degree(cyc)[0]}, "
    f"disjoint arborescences found = {len(packing.trees)}"
)
for k, tree in enumerate(packing.trees):
    print(f"  tree {k}: {[(cyc.tails[e], cyc.heads[e]) for e in sorted(tree.edge_ids)]}")
print("rate restricted to these trees:", tree_restricted_capacity(cyc, packing.trees))

chain = fixed_arborescence(mesh, -1)  # the Hamiltonian chain 0 -> 1 -> ... -> 9
print("\nmesh10 single-chain tree:", chain.serialize())
m = run(mesh, "tree", ArrivalProcess("bernoulli-batch", 0.9, 1), 10_000, 1)
print(
    f"chain tree at lambda = 0.9: deficit slope = {m.instability_slope:+.3f} "
    f"packets/slot ({'UNSTABLE' if m.unstable else 'stable'})"
)
m = run(mesh, "pi_star", ArrivalProcess("bernoulli-batch", 0.9, 1), 10_000, 1)
print(
    f"dynamic policy at lambda = 0.9: deficit slope = {m.instability_slope:+.3f} "
    f"packets/slot, mean delay = {m.mean_delay:.1f}"
)
