"""Reference policies that ignore the fairness objective.

The channel picker minimizes the number of same-channel interfering radio
pairs by steepest single-radio descent from random starts. The association
rule is the classic one: join the closest radio with a usable link, then
split airtime so every client of an AP gets equal throughput.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annealing import RunResult, TrajectoryPoint
from .fairness import (
    SCHEME_SERVER,
    Allocation,
    SystemState,
    throughput,
)
from .model import Network, ScenarioError


def interfering_pair_count(net: Network, chan: np.ndarray) -> int:
    """Number of unordered radio pairs that interfere on a shared channel."""
    chan = np.asarray(chan)
    idx = np.arange(net.n_vaps)
    adj = net.adjacency[idx[:, None], idx[None, :], chan[:, None]]
    same = adj & (chan[None, :] == chan[:, None])
    return int((same.sum() - net.n_vaps) // 2)


@dataclass
class MinIntResult:
    channels: np.ndarray
    cost: int
    restarts: int
    descent_costs: list[int]  # cost trace of the winning restart


def _descend(net: Network, chan: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Steepest descent over single-radio channel moves; ties to lowest
    (radio, channel)."""
    V, C = net.n_vaps, net.n_channels
    chan = chan.copy()
    off_diag = ~np.eye(V, dtype=bool)
    trace = [interfering_pair_count(net, chan)]
    while True:
        onehot = np.zeros((V, C), dtype=bool)
        onehot[np.arange(V), chan] = True
        # deg[n, c]: same-channel interferers radio n would have on channel c
        deg = (net.adjacency & onehot[None, :, :] & off_diag[:, :, None]).sum(axis=1)
        delta = deg - deg[np.arange(V), chan][:, None]
        best = int(np.argmin(delta))
        n, c = divmod(best, C)
        if delta[n, c] >= 0:
            break
        chan[n] = c
        trace.append(trace[-1] + int(delta[n, c]))
    return chan, trace[-1], trace


def minint_channel_selection(
    net: Network, restarts: int = 20, seed: int = 0
) -> MinIntResult:
    """Best channel map over several random-start descents.

    A single descent can stall in a local minimum of the pair count; a
    handful of restarts makes that vanishingly unlikely on small networks.
    Ties between restarts keep the earliest result.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    rng = np.random.default_rng(seed)
    best: MinIntResult | None = None
    for _ in range(restarts):
        start = rng.integers(0, net.n_channels, size=net.n_vaps)
        chan, cost, trace = _descend(net, start)
        if best is None or cost < best.cost:
            best = MinIntResult(chan, cost, restarts, trace)
        if best.cost == 0:
            break
    return best


def wifi_association(net: Network, chan: np.ndarray) -> np.ndarray:
    """Closest radio with a positive rate, ties to the lowest radio index."""
    I = net.n_clients
    rates_now = net.rates[:, np.arange(net.n_vaps), chan]
    assoc = np.empty(I, dtype=np.int64)
    for i in range(I):
        d = np.where(rates_now[i] > 0, net.distances[i], np.inf)
        if not np.isfinite(d).any():
            raise ScenarioError(
                f"client {net.client_ids[i]!r} has no usable radio under the "
                "selected channels"
            )
        assoc[i] = int(np.argmin(d))
    return assoc


def wifi_allocation(net: Network, assoc: np.ndarray, chan: np.ndarray) -> Allocation:
    """Equal-throughput airtime split per AP, closed-form access otherwise.

    phi_i is proportional to 1/B_i among the clients of each radio, so all
    of them see the same throughput whenever the radio wins a slot.
    """
    rates_now = net.rates[np.arange(net.n_clients), assoc, chan[assoc]]
    if not (rates_now > 0).all():
        raise ScenarioError("equal-throughput split needs positive rates")
    inv = 1.0 / rates_now
    phi = np.empty(net.n_clients)
    for n in range(net.n_vaps):
        members = assoc == n
        if members.any():
            phi[members] = inv[members] / inv[members].sum()
    state = SystemState(net, SCHEME_SERVER, assoc, chan)
    p = state.access_probabilities()
    schedule = {
        net.client_ids[i]: float(phi[i]) for i in range(net.n_clients)
    }
    access = {net.vap_ids[n]: float(p[n]) for n in range(net.n_vaps)}
    return Allocation(scheme=SCHEME_SERVER, schedule=schedule, access=access)


def minint_wifi_run(
    scenario_or_network, seed: int = 0, restarts: int = 20, run_id: str = "run0"
) -> RunResult:
    """The full baseline: interference-minimal channels, closest-AP
    association, equal-throughput scheduling. One-shot, no trajectory."""
    net = (
        scenario_or_network
        if isinstance(scenario_or_network, Network)
        else scenario_or_network.to_network()
    )
    picked = minint_channel_selection(net, restarts=restarts, seed=seed)
    assoc = wifi_association(net, picked.channels)
    alloc = wifi_allocation(net, assoc, picked.channels)
    config = net.configuration(assoc, picked.channels)
    report = throughput(net, config, alloc)
    point = TrajectoryPoint(
        0, None, report.energy, report.weighted_throughput, config.digest()
    )
    return RunResult(
        run_id=run_id,
        policy_kind="minint-wifi",
        scheme=SCHEME_SERVER,
        seed=seed,
        iterations=0,
        trajectory=[point],
        final_configuration=config,
        final_energy=report.energy,
        final_weighted_throughput=report.weighted_throughput,
        rates=dict(report.rates),
        schedule_phi=alloc.schedule,
        access_p=alloc.access,
        best_energy=report.energy,
        best_t=0,
        best_configuration=config,
    )
