"""Stability on both sides of capacity.

The k4 network has broadcast capacity 1/2.  Driving the policy at 90%
of capacity keeps the total minimum deficit bounded; at 110% the deficit
grows linearly and the instability detector fires.
"""

from dagcast.sim import ArrivalProcess, run

NET = "k4"
T = 20_000

for lam in (0.45, 0.55):
    from dagcast import scenario

    m = run(scenario(NET), "pi_star", ArrivalProcess("bernoulli-batch", lam, 1), T, 1)
    verdict = "UNSTABLE" if m.unstable else "stable"
    print(
        f"lambda = {lam}: throughput = {m.throughput:.4f}, "
        f"mean delay = {m.mean_delay:.1f} slots, "
        f"deficit slope = {m.instability_slope:+.4f} packets/slot -> {verdict}"
    )

print()
print("deficit-sum trajectory at lambda = 0.55 (every 2000 slots):")
m = run(scenario(NET), "pi_star", ArrivalProcess("bernoulli-batch", 0.55, 1), T, 1)
for slot, total in m.deficit_series[::20]:
    print(f"  t = {slot:6d}  sum X = {total}")
