"""Shared fixtures and instance builders for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from fairband import (
    AccessPoint,
    Channel,
    Client,
    Network,
    SystemState,
)


def rel(a: float, b: float) -> float:
    """Relative error with a floor of 1 on the scale."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


# weights from this palette keep aggregate sums exact in binary floating
# point, which lets incremental-vs-fresh comparisons demand bit equality
DYADIC_WEIGHTS = (0.5, 1.0, 1.5, 2.0, 2.5)

CHANNEL_PALETTE = (
    Channel("ch-2400", 2400.0, 22.0),
    Channel("ch-4000", 4000.0, 44.0),
    Channel("ch-16000", 16000.0, 50.0),
    Channel("ch-600", 600.0, 6.0),
)


def random_network(
    rng: np.random.Generator,
    n_aps: int = 3,
    n_clients: int = 6,
    n_channels: int = 2,
    box: float = 260.0,
    dyadic: bool = True,
    max_radios: int = 1,
) -> Network:
    """Random scenario whose clients all have a usable link on every channel.

    Clients are placed near a random AP (within the smallest max range over
    the palette channels) so any channel assignment keeps them connected,
    which keeps downstream random-configuration draws trivially feasible.
    """
    channels = list(CHANNEL_PALETTE[:n_channels])
    aps = []
    for k in range(n_aps):
        radios = int(rng.integers(1, max_radios + 1))
        aps.append(
            AccessPoint(
                f"ap{k}",
                (float(rng.uniform(0, box)), float(rng.uniform(0, box))),
                radio_count=radios,
            )
        )
    # stay within reach of the shortest-ranged channel in the palette
    from fairband import channel_profile

    reach = min(channel_profile(c).max_range_m for c in channels) * 0.95
    clients = []
    for i in range(n_clients):
        home = aps[int(rng.integers(n_aps))]
        angle = rng.uniform(0, 2 * np.pi)
        d = rng.uniform(0, reach)
        pos = (home.position[0] + d * np.cos(angle), home.position[1] + d * np.sin(angle))
        weight = float(rng.choice(DYADIC_WEIGHTS)) if dyadic else float(rng.uniform(0.4, 2.5))
        clients.append(Client(f"c{i}", (float(pos[0]), float(pos[1])), weight))
    return Network(channels, aps, clients)


def random_state(
    net: Network, rng: np.random.Generator, scheme: str = "server"
) -> SystemState:
    """Uniform random feasible configuration as a live state."""
    V, C = net.n_vaps, net.n_channels
    for _ in range(200):
        chan = rng.integers(0, C, size=V)
        rates_now = net.rates[:, np.arange(V), chan]
        if not (rates_now > 0).any(axis=1).all():
            continue
        assoc = np.empty(net.n_clients, dtype=np.int64)
        for i in range(net.n_clients):
            ok = np.flatnonzero(rates_now[i] > 0)
            assoc[i] = ok[rng.integers(len(ok))]
        return SystemState(net, scheme, assoc, chan)
    raise AssertionError("could not draw a feasible configuration")


@pytest.fixture
def rng():
    return np.random.default_rng(20240816)
