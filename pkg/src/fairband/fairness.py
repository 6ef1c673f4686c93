"""Fast-timescale allocation: scheduling, channel access and system energy.

For a fixed configuration (association + channels) the weighted
proportional-fairness objective sum_i w_i log r_i has closed-form optimal
allocations under both access schemes:

* server scheme: radio n transmits in a slot with probability p_n and, on
  success, serves client i with probability phi_{i,n}. Optimal values are
  phi = w_i / w^n and p_n = w^n / z^n.
* client scheme: each client contends directly with probability
  p_i = w_i / z^{n(i)}; there is no scheduling stage.

Plugging the optima back in collapses the objective to a function of the
per-AP aggregates (w^n, z^n) alone, which this module calls the energy of
the configuration. A transmission succeeds only when no other radio (or
client) in the same-channel interference set transmits in the slot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .model import Configuration, Network

SCHEME_SERVER = "server"
SCHEME_CLIENT = "client"
SCHEMES = (SCHEME_SERVER, SCHEME_CLIENT)


def _check_scheme(scheme: str):
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


@dataclass
class Allocation:
    """A concrete fast-timescale operating point.

    schedule maps client id to phi (server scheme only, None otherwise);
    access maps radio id to p_n under the server scheme and client id to
    p_i under the client scheme.
    """

    scheme: str
    schedule: dict[str, float] | None
    access: dict[str, float]


@dataclass
class ThroughputReport:
    """Per-client rates plus the two headline metrics for one allocation."""

    rates: dict[str, float]
    feasible: bool
    energy: float  # sum_i w_i log r_i; -inf when any r_i is zero
    weighted_throughput: float  # sum_i w_i r_i


def _f_term(w, z):
    """w log(w/z) + (z - w) log((z - w)/z) with 0 log 0 = 0.

    This is the access-probability part of the energy for one contention
    neighborhood: load w transmitting against total neighborhood load z.
    Zero-load entries contribute exactly nothing.
    """
    rest = np.maximum(np.asarray(z, dtype=float) - w, 0.0)
    return xlogy(w, w) + xlogy(rest, rest) - xlogy(z, z)


def optimal_schedule(network: Network, config: Configuration) -> dict[str, float]:
    """Weight-proportional scheduling phi_{i,n} = w_i / w^n per serving radio."""
    load: dict[str, float] = {}
    for cid in network.client_ids:
        load[config.association[cid]] = (
            load.get(config.association[cid], 0.0)
            + network.clients[network.client_index[cid]].weight
        )
    return {
        cid: network.clients[network.client_index[cid]].weight
        / load[config.association[cid]]
        for cid in network.client_ids
    }


def optimal_access(
    network: Network, config: Configuration, scheme: str = SCHEME_SERVER
) -> dict[str, float]:
    """Optimal slot-access probabilities.

    Server scheme: p_n = w^n / z^n per radio, with p_n = 0 for a clientless
    radio. Client scheme: p_i = w_i / z^{n(i)} per client.
    """
    _check_scheme(scheme)
    from .model import WeightAggregates

    agg = WeightAggregates(network, config)
    if scheme == SCHEME_SERVER:
        return {
            v: (agg.w[v] / agg.z[v] if agg.w[v] > 0 else 0.0) for v in network.vap_ids
        }
    return {
        cid: network.clients[network.client_index[cid]].weight
        / agg.z[config.association[cid]]
        for cid in network.client_ids
    }


def optimal_allocation(
    network: Network, config: Configuration, scheme: str = SCHEME_SERVER
) -> Allocation:
    _check_scheme(scheme)
    schedule = optimal_schedule(network, config) if scheme == SCHEME_SERVER else None
    return Allocation(scheme, schedule, optimal_access(network, config, scheme))


def _validate_allocation(network: Network, config: Configuration, alloc: Allocation):
    for key, p in alloc.access.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"access probability out of range for {key!r}: {p}")
    if alloc.scheme == SCHEME_SERVER:
        if alloc.schedule is None:
            raise ValueError("server scheme requires a schedule")
        sums: dict[str, float] = {}
        for cid in network.client_ids:
            phi = alloc.schedule[cid]
            if phi < 0:
                raise ValueError(f"schedule weight negative for {cid!r}")
            v = config.association[cid]
            sums[v] = sums.get(v, 0.0) + phi
        for v, s in sums.items():
            if abs(s - 1.0) > 1e-9:
                raise ValueError(f"schedule for {v!r} sums to {s}, expected 1")


def throughput(
    network: Network, config: Configuration, allocation: Allocation
) -> ThroughputReport:
    """Per-slot expected rates for an arbitrary allocation.

    A radio's transmission succeeds when no other same-channel radio in its
    interference set transmits; the p/(1-p) closed form is singular at p = 1,
    so the success probability is evaluated as p_n times the product of
    (1 - p_m) over the other interferers, which is finite everywhere.
    """
    _validate_allocation(network, config, allocation)
    chan = network.channel_array(config.channel)
    assoc = network.association_array(config.association)
    I, V = network.n_clients, network.n_vaps
    same_ch_adj = _same_channel_adjacency(network, chan)

    rates_now = network.rates[np.arange(I), assoc, chan[assoc]]
    if allocation.scheme == SCHEME_SERVER:
        p = np.array([allocation.access[v] for v in network.vap_ids], dtype=float)
        succ = np.empty(V)
        for n in range(V):
            others = same_ch_adj[n].copy()
            others[n] = False
            succ[n] = p[n] * np.prod(1.0 - p[others])
        phi = np.array([allocation.schedule[c] for c in network.client_ids], dtype=float)
        r = rates_now * phi * succ[assoc]
    else:
        p = np.array([allocation.access[c] for c in network.client_ids], dtype=float)
        cadj = same_ch_adj[assoc][:, assoc]
        r = np.empty(I)
        for i in range(I):
            others = cadj[i].copy()
            others[i] = False
            r[i] = rates_now[i] * p[i] * np.prod(1.0 - p[others])

    feasible = bool((r > 0).all())
    w = network.weights
    energy = float((w * np.log(r)).sum()) if feasible else -math.inf
    return ThroughputReport(
        rates={network.client_ids[i]: float(r[i]) for i in range(I)},
        feasible=feasible,
        energy=energy,
        weighted_throughput=float((w * r).sum()),
    )


def energy(network: Network, config: Configuration, scheme: str = SCHEME_SERVER) -> float:
    """Closed-form optimum of sum_i w_i log r_i for a configuration.

    Returns -inf when some client sits on a zero-rate link; callers that
    need a hard flag should use SystemState.feasible or a ThroughputReport.
    """
    state = SystemState.from_configuration(network, config, scheme)
    return state.energy()


def _same_channel_adjacency(network: Network, chan: np.ndarray) -> np.ndarray:
    V = network.n_vaps
    idx = np.arange(V)
    adj_cur = network.adjacency[idx[:, None], idx[None, :], chan[:, None]]
    return adj_cur & (chan[None, :] == chan[:, None])


class SystemState:
    """Mutable configuration with vectorized energy and candidate evaluation.

    Aggregates are rebuilt from scratch after every applied move, so they
    can never drift; candidate evaluation works incrementally on copies.
    All arrays are indexed in network order.
    """

    def __init__(self, network: Network, scheme: str, assoc: np.ndarray, chan: np.ndarray):
        _check_scheme(scheme)
        self.net = network
        self.scheme = scheme
        self.assoc = np.asarray(assoc, dtype=np.int64).copy()
        self.chan = np.asarray(chan, dtype=np.int64).copy()
        if self.assoc.shape != (network.n_clients,):
            raise ValueError("association array has the wrong shape")
        if self.chan.shape != (network.n_vaps,):
            raise ValueError("channel array has the wrong shape")
        self._refresh_channel_structure()
        self._refresh_loads()

    @classmethod
    def from_configuration(
        cls, network: Network, config: Configuration, scheme: str = SCHEME_SERVER
    ) -> "SystemState":
        return cls(
            network,
            scheme,
            network.association_array(config.association),
            network.channel_array(config.channel),
        )

    def to_configuration(self) -> Configuration:
        return self.net.configuration(self.assoc, self.chan)

    def copy(self) -> "SystemState":
        return SystemState(self.net, self.scheme, self.assoc, self.chan)

    # -- aggregate maintenance -------------------------------------------

    def _refresh_channel_structure(self):
        self.same_ch_adj = _same_channel_adjacency(self.net, self.chan)

    def _refresh_loads(self):
        net = self.net
        I = net.n_clients
        self.w_ap = np.bincount(self.assoc, weights=net.weights, minlength=net.n_vaps)
        self.z = (self.same_ch_adj * self.w_ap[None, :]).sum(axis=1)
        self._log_b_clients = net.log_rates[np.arange(I), self.assoc, self.chan[self.assoc]]
        self.feasible = bool(np.isfinite(self._log_b_clients).all())
        self.b_term = (
            float((net.weights * self._log_b_clients).sum()) if self.feasible else -math.inf
        )

    def apply_association(self, client: int, target_vap: int):
        self.assoc[client] = target_vap
        self._refresh_loads()

    def apply_channel(self, vap: int, target_channel: int):
        self.chan[vap] = target_channel
        self._refresh_channel_structure()
        self._refresh_loads()

    # -- energy -----------------------------------------------------------

    def energy(self) -> float:
        if not self.feasible:
            return -math.inf
        if self.scheme == SCHEME_SERVER:
            access = float(_f_term(self.w_ap, self.z).sum())
            sched = self.net.sum_w_log_w - float(xlogy(self.w_ap, self.w_ap).sum())
            return self.b_term + sched + access
        zs = self.z[self.assoc]
        return self.b_term + float(_f_term(self.net.weights, zs).sum())

    # -- candidate evaluation ----------------------------------------------

    def association_candidates(self, client: int) -> tuple[np.ndarray, np.ndarray]:
        """Exact energies of moving one client to each radio.

        Returns (values, feasible): values[b] is the full system energy with
        the client on radio b (-inf when that link has zero rate), so
        differences of entries are exact energy deltas.
        """
        net = self.net
        V = net.n_vaps
        a = int(self.assoc[client])
        wi = net.weights[client]

        w_minus = self.w_ap.copy()
        w_minus[a] -= wi
        w_minus[a] = max(w_minus[a], 0.0)
        z_minus = self.z - wi * self.same_ch_adj[a]
        b_minus = self.b_term - wi * self._log_b_clients[client]

        lb = net.log_rates[client, np.arange(V), self.chan]
        feasible = np.isfinite(lb)

        # candidate b's aggregates: row b of same_ch_adj marks the radios
        # whose neighborhood gains the client's weight
        Z = z_minus[None, :] + wi * self.same_ch_adj
        W = np.repeat(w_minus[None, :], V, axis=0)
        W[np.arange(V), np.arange(V)] += wi

        if self.scheme == SCHEME_SERVER:
            sched = net.sum_w_log_w - xlogy(W, W).sum(axis=1)
            access = _f_term(W, Z).sum(axis=1)
            values = b_minus + wi * np.where(feasible, lb, 0.0) + sched + access
        else:
            zs = Z[:, self.assoc]
            zs[:, client] = Z[np.arange(V), np.arange(V)]
            values = (
                b_minus
                + wi * np.where(feasible, lb, 0.0)
                + _f_term(net.weights[None, :], zs).sum(axis=1)
            )
        values = np.where(feasible, values, -np.inf)
        return values, feasible

    def association_scores_approx(self, client: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighborhood-local association scores.

        Server scheme: w_i log(B w_i / z^n) plus w_i times the log success
        probability of the candidate's same-channel neighbors, all under the
        post-move aggregates. Client scheme: the analogous local form for
        direct contention. Shared constants are dropped; only differences
        between candidates matter.
        """
        net = self.net
        V = net.n_vaps
        a = int(self.assoc[client])
        wi = net.weights[client]

        w_minus = self.w_ap.copy()
        w_minus[a] -= wi
        w_minus[a] = max(w_minus[a], 0.0)
        z_minus = self.z - wi * self.same_ch_adj[a]

        lb = net.log_rates[client, np.arange(V), self.chan]
        feasible = np.isfinite(lb)

        Z = z_minus[None, :] + wi * self.same_ch_adj
        W = np.repeat(w_minus[None, :], V, axis=0)
        W[np.arange(V), np.arange(V)] += wi
        z_at_target = Z[np.arange(V), np.arange(V)]

        if self.scheme == SCHEME_SERVER:
            offdiag = self.same_ch_adj & ~np.eye(V, dtype=bool)
            with np.errstate(divide="ignore", invalid="ignore"):
                idle = np.log(np.maximum(Z - W, 0.0)) - np.log(Z)
            neighbor_term = np.where(offdiag, idle, 0.0).sum(axis=1)
            scores = wi * (
                np.where(feasible, lb, 0.0)
                + math.log(wi)
                - np.log(z_at_target)
                + neighbor_term
            )
        else:
            zs = Z[:, self.assoc]
            include = self.same_ch_adj[self.assoc, :].T  # (V cand, I): n(j) near b
            include[:, client] = False
            with np.errstate(divide="ignore", invalid="ignore"):
                idle = np.log(np.maximum(zs - net.weights[None, :], 0.0)) - np.log(zs)
            neighbor_term = np.where(include, idle, 0.0).sum(axis=1)
            zb = np.maximum(z_at_target - wi, 0.0)  # candidate neighborhood without i
            crowd = zb * np.log(z_at_target) - xlogy(zb, zb)
            scores = (
                wi * (np.where(feasible, lb, 0.0) + math.log(wi) - np.log(z_at_target))
                + wi * neighbor_term
                - crowd
            )
        scores = np.where(feasible, scores, -np.inf)
        return scores, feasible

    def channel_candidates(self, vap: int) -> tuple[np.ndarray, np.ndarray]:
        """Exact energies of switching one radio to each channel.

        A channel is infeasible when any client of the radio would lose its
        link. A clientless radio can take any channel without changing the
        energy of anyone.
        """
        net = self.net
        V, C = net.n_vaps, net.n_channels
        members = np.nonzero(self.assoc == vap)[0]
        wm = net.weights[members]

        lb_members = net.log_rates[members, vap, :]  # (k, C)
        feasible = (
            np.isfinite(lb_members).all(axis=0)
            if members.size
            else np.ones(C, dtype=bool)
        )
        cand_b = (
            (wm[:, None] * np.where(np.isfinite(lb_members), lb_members, 0.0)).sum(axis=0)
            if members.size
            else np.zeros(C)
        )
        b_wo = self.b_term - (
            float((wm * self._log_b_clients[members]).sum()) if members.size else 0.0
        )

        load = self.w_ap[vap]
        z_base = self.z - load * self.same_ch_adj[vap]
        new_mask = net.adjacency[vap].T & (self.chan[None, :] == np.arange(C)[:, None])
        new_mask[:, vap] = False
        Z = z_base[None, :] + load * new_mask
        Z[:, vap] = load + (new_mask * self.w_ap[None, :]).sum(axis=1)

        if self.scheme == SCHEME_SERVER:
            sched = net.sum_w_log_w - float(xlogy(self.w_ap, self.w_ap).sum())
            access = _f_term(self.w_ap[None, :], Z).sum(axis=1)
            values = b_wo + cand_b + sched + access
        else:
            zs = Z[:, self.assoc]
            values = b_wo + cand_b + _f_term(net.weights[None, :], zs).sum(axis=1)
        values = np.where(feasible, values, -np.inf)
        return values, feasible

    # -- derived metrics ----------------------------------------------------

    def access_probabilities(self) -> np.ndarray:
        """Optimal p per radio (server) or per client (client scheme)."""
        if self.scheme == SCHEME_SERVER:
            return np.divide(
                self.w_ap, self.z, out=np.zeros_like(self.w_ap), where=self.z > 0
            )
        return self.net.weights / self.z[self.assoc]

    def rates(self) -> np.ndarray:
        """Per-client rates under the optimal allocation for this state."""
        net = self.net
        I, V = net.n_clients, net.n_vaps
        rates_now = net.rates[np.arange(I), self.assoc, self.chan[self.assoc]]
        if self.scheme == SCHEME_SERVER:
            p = self.access_probabilities()
            succ = np.empty(V)
            for n in range(V):
                others = self.same_ch_adj[n].copy()
                others[n] = False
                succ[n] = p[n] * np.prod(1.0 - p[others])
            phi = net.weights / self.w_ap[self.assoc]
            return rates_now * phi * succ[self.assoc]
        p = self.access_probabilities()
        cadj = self.same_ch_adj[self.assoc][:, self.assoc]
        r = np.empty(I)
        for i in range(I):
            others = cadj[i].copy()
            others[i] = False
            r[i] = rates_now[i] * p[i] * np.prod(1.0 - p[others])
        return r

    def weighted_throughput(self) -> float:
        return float((self.net.weights * self.rates()).sum())


def slot_monte_carlo(
    network: Network,
    config: Configuration,
    allocation: Allocation,
    slots: int,
    seed: int = 0,
) -> dict[str, float]:
    """Empirical per-client rates from simulated random-access slots.

    Each slot draws independent transmit decisions; a transmission succeeds
    only when nothing else in the same-channel interference set transmits.
    Under the server scheme a successful radio serves one client drawn from
    its schedule. Returns Mbps averaged over slots.
    """
    _validate_allocation(network, config, allocation)
    rng = np.random.default_rng(seed)
    chan = network.channel_array(config.channel)
    assoc = network.association_array(config.association)
    I, V = network.n_clients, network.n_vaps
    same_ch_adj = _same_channel_adjacency(network, chan)
    rates_now = network.rates[np.arange(I), assoc, chan[assoc]]
    batch = 200_000

    if allocation.scheme == SCHEME_SERVER:
        p = np.array([allocation.access[v] for v in network.vap_ids], dtype=float)
        others = same_ch_adj & ~np.eye(V, dtype=bool)
        successes = np.zeros(V, dtype=np.int64)
        done = 0
        while done < slots:
            n = min(batch, slots - done)
            tx = rng.random((n, V)) < p[None, :]
            clash = tx.astype(np.int64) @ others.T.astype(np.int64)
            successes += (tx & (clash == 0)).sum(axis=0)
            done += n
        counts = np.zeros(I, dtype=np.int64)
        for v in range(V):
            members = np.nonzero(assoc == v)[0]
            if members.size == 0 or successes[v] == 0:
                continue
            phi = np.array(
                [allocation.schedule[network.client_ids[i]] for i in members]
            )
            total = phi.sum()
            if total <= 0:
                continue
            counts[members] += rng.multinomial(successes[v], phi / total)
        r = rates_now * counts / slots
    else:
        p = np.array([allocation.access[c] for c in network.client_ids], dtype=float)
        cadj = same_ch_adj[assoc][:, assoc] & ~np.eye(I, dtype=bool)
        wins = np.zeros(I, dtype=np.int64)
        done = 0
        while done < slots:
            n = min(batch, slots - done)
            tx = rng.random((n, I)) < p[None, :]
            clash = tx.astype(np.int64) @ cadj.T.astype(np.int64)
            wins += (tx & (clash == 0)).sum(axis=0)
            done += n
        r = rates_now * wins / slots

    return {network.client_ids[i]: float(r[i]) for i in range(I)}
