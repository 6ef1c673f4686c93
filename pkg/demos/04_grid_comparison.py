"""
Sixteen-cell grid shootout
==========================

A 4x4 grid of dual-radio APs, seven narrow sub-GHz channels, fifty clients
drawn into two dense and two sparse corners. One seed, three policies. The
annealed sampler restructures associations and the channel plan jointly;
greedy stops at the first local optimum; interference minimization plus
nearest-AP association never looks at the utility at all.

Full multi-seed comparisons live in tests/test_acceptance.py; this demo
runs a single seed to stay quick.
"""
import numpy as np

from fairband import OptimizerPolicy, SystemState, builtin, minint_wifi_run, run

scenario = builtin("grid16-unweighted").reseeded(7)
net = scenario.to_network()
print(f"{net.n_clients} clients, {net.n_vaps} radios, {net.n_channels} channels")

dp = run(net, OptimizerPolicy(kind="dp-exact", iterations=60000, seed=1))
best = SystemState.from_configuration(net, dp.best_configuration, "server")
greedy = run(net, OptimizerPolicy(kind="greedy", iterations=60000, seed=1))
base = minint_wifi_run(net, seed=1)

rows = [
    ("sampler", best.energy(), best.weighted_throughput()),
    ("greedy", greedy.final_energy, greedy.final_weighted_throughput),
    ("minint-wifi", base.final_energy, base.final_weighted_throughput),
]
print("\npolicy        utility    weighted rate")
for tag, u, wr in rows:
    print(f"{tag:12s} {u:8.2f}    {wr:6.2f} Mb/s")

# how evenly does each policy spread the airtime? report the rate spread
print("\nper-client rate spread (min / median / max, Mb/s)")
for tag, rates in (
    ("sampler", best.rates()),
    ("greedy", np.array([greedy.rates[c] for c in net.client_ids])),
    ("minint-wifi", np.array([base.rates[c] for c in net.client_ids])),
):
    print(
        f"{tag:12s} {rates.min():6.3f} / {np.median(rates):6.3f} / {rates.max():6.3f}"
    )
