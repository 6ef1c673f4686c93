"""
Three cells on a line
=====================

Sixteen clients clustered around the middle of three mutually interfering
APs. With one channel the sampler discovers that every client should join
the middle AP, turning three colliding cells into one clean cell. With two
channels, minimizing interfering pairs picks the obvious reuse pattern,
but the utility-driven sampler finds a better one: it values the wide
high-frequency channel where the clients are and leaves a corner AP idle.
"""
from fairband import OptimizerPolicy, SystemState, builtin, minint_wifi_run, run


def describe(tag, u, wr):
    print(f"  {tag:12s} utility {u:8.3f}   weighted rate {wr:6.2f} Mb/s")


for name in ("line3-1ch", "line3-2ch"):
    net = builtin(name).to_network()
    print(f"\n{name}: {net.n_clients} clients, channels {list(net.channel_ids)}")

    dp = run(net, OptimizerPolicy(kind="dp-exact", iterations=10000, seed=0))
    best = SystemState.from_configuration(net, dp.best_configuration, "server")
    describe("sampler", best.energy(), best.weighted_throughput())

    greedy = run(net, OptimizerPolicy(kind="greedy", iterations=10000, seed=0))
    describe("greedy", greedy.final_energy, greedy.final_weighted_throughput)

    base = minint_wifi_run(net, seed=0)
    describe("minint-wifi", base.final_energy, base.final_weighted_throughput)

    cfg = dp.best_configuration
    members = {}
    for cid, vid in cfg.association.items():
        members.setdefault(vid, []).append(cid)
    print("  sampler's choice:")
    for vid in net.vap_ids:
        served = members.get(vid, [])
        label = f"{len(served)} clients" if served else "idle"
        print(f"    {vid} on {cfg.channel[vid]}: {label}")
