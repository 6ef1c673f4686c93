"""Slow-timescale search over configurations by Gibbs sampling or greedy moves.

Each step selects one mover, either a client (association move) or a radio
(channel move), evaluates the energy of every feasible single move and
either samples a target from the softmax of those energies at the current
temperature or takes the argmax. With a temperature schedule that cools
slowly enough (the inverse-sqrt-log kind: T -> 0 while T log t -> infinity)
the sampled chain concentrates on globally optimal configurations.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .model import Configuration, Network, ScenarioError
from .fairness import SCHEME_SERVER, SystemState, _check_scheme, optimal_allocation

log = logging.getLogger(__name__)

POLICY_KINDS = ("dp-exact", "dp-approx", "greedy")
SELECTION_KINDS = ("round-robin", "random")


@dataclass(frozen=True)
class Schedule:
    """Temperature schedule T(t) for t = 1, 2, ...

    Kinds: invsqrtlog T0/sqrt(log(t+2)), invlog T0/log(t+2), geometric
    T0*ratio^(t-1), const T0. Only invsqrtlog satisfies both convergence
    conditions (T -> 0 and T log t -> infinity). A constant schedule may be
    zero, which turns sampling into deterministic argmax; every other kind
    requires a positive temperature.
    """

    kind: str = "invsqrtlog"
    t0: float = 1.0
    ratio: float = 0.999

    def __post_init__(self):
        if self.kind not in ("invsqrtlog", "invlog", "geometric", "const"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "const":
            if self.t0 < 0:
                raise ValueError("constant temperature must be >= 0")
        elif self.t0 <= 0:
            raise ValueError("t0 must be positive")
        if self.kind == "geometric" and not 0 < self.ratio < 1:
            raise ValueError("geometric ratio must lie in (0, 1)")

    def temperature(self, t: int) -> float:
        if self.kind == "invsqrtlog":
            return self.t0 / math.sqrt(math.log(t + 2))
        if self.kind == "invlog":
            return self.t0 / math.log(t + 2)
        if self.kind == "geometric":
            return self.t0 * self.ratio ** (t - 1)
        return self.t0

    def satisfies_convergence_conditions(self) -> bool:
        """True when T(t) -> 0 and T(t) log t -> infinity both hold."""
        return self.kind == "invsqrtlog"

    @classmethod
    def parse(cls, text: str, t0: float = 1.0) -> "Schedule":
        """Parse 'invsqrtlog', 'invlog', 'geometric:<ratio>' or 'const:<T>'."""
        if text in ("invsqrtlog", "invlog"):
            return cls(kind=text, t0=t0)
        if text.startswith("geometric:"):
            return cls(kind="geometric", t0=t0, ratio=float(text.split(":", 1)[1]))
        if text.startswith("const:"):
            return cls(kind="const", t0=float(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse schedule {text!r}")


@dataclass(frozen=True)
class OptimizerPolicy:
    """What to optimize and how to move through configuration space."""

    kind: str = "dp-exact"
    scheme: str = SCHEME_SERVER
    selection: str = "round-robin"
    schedule: Schedule = field(default_factory=Schedule)
    iterations: int = 20000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.selection not in SELECTION_KINDS:
            raise ValueError(f"unknown selection {self.selection!r}")
        _check_scheme(self.scheme)


@dataclass
class Candidate:
    target: str
    value: float  # energy (exact policies) or local score (approx policy)
    probability: float
    feasible: bool


@dataclass
class MoveProposal:
    """Record of one optimizer step. Candidate details are filled on request."""

    mover: str
    kind: str  # "association" | "channel"
    chosen: str | None
    changed: bool
    temperature: float | None
    candidates: list[Candidate] = field(default_factory=list)


def softmax_probabilities(
    values: np.ndarray, temperature: float, feasible: np.ndarray
) -> np.ndarray:
    """Move probabilities proportional to exp(value / T) over feasible entries.

    The max feasible value is subtracted before exponentiating, so adding
    any constant to all values changes nothing. Infeasible entries get
    probability exactly 0. At T = 0 the distribution degenerates to the
    first argmax, matching greedy tie-breaking.
    """
    values = np.asarray(values, dtype=float)
    feasible = np.asarray(feasible, dtype=bool) & np.isfinite(values)
    if not feasible.any():
        return np.zeros_like(values)
    probs = np.zeros_like(values)
    if temperature == 0.0:
        best = np.flatnonzero(feasible & (values >= values[feasible].max()))[0]
        probs[best] = 1.0
        return probs
    shifted = (values - values[feasible].max()) / temperature
    ex = np.zeros_like(values)
    ex[feasible] = np.exp(shifted[feasible])
    probs = ex / ex.sum()
    return probs


# -- single-move energy differences ---------------------------------------


def delta_u_association_exact(state: SystemState, client_id: str, target_vap: str) -> float:
    """Exact energy change of re-associating one client, under state.scheme.

    Computed incrementally from the aggregates of the affected neighborhoods;
    equals the from-scratch energy difference up to float rounding. -inf when
    the target link has zero rate.
    """
    i = state.net.client_index[client_id]
    b = state.net.vap_index[target_vap]
    values, feasible = state.association_candidates(i)
    if not feasible[b]:
        return -math.inf
    return float(values[b] - values[state.assoc[i]])


def delta_u_association_approx(state: SystemState, client_id: str, target_vap: str) -> float:
    """Neighborhood-local association score (shared constants dropped).

    Valid as a stand-in for the exact delta when every affected neighborhood
    load is much larger than the moving client's weight.
    """
    i = state.net.client_index[client_id]
    b = state.net.vap_index[target_vap]
    scores, feasible = state.association_scores_approx(i)
    if not feasible[b]:
        return -math.inf
    return float(scores[b])


def delta_u_channel_exact(state: SystemState, vap_id: str, channel_id: str) -> float:
    """Exact energy change of switching one radio's channel, under state.scheme."""
    n = state.net.vap_index[vap_id]
    c = state.net.channel_index[channel_id]
    values, feasible = state.channel_candidates(n)
    if not feasible[c]:
        return -math.inf
    return float(values[c] - values[state.chan[n]])


# -- steps ------------------------------------------------------------------


def _mover_count(net: Network) -> int:
    return net.n_clients + net.n_vaps


def _mover_at(net: Network, index: int) -> tuple[str, int]:
    """Movers in fixed order: clients by index, then radios by index."""
    if index < net.n_clients:
        return "association", index
    return "channel", index - net.n_clients


def _candidate_values(state: SystemState, kind: str, idx: int, policy_kind: str):
    if kind == "association":
        if policy_kind == "dp-approx":
            return state.association_scores_approx(idx)
        return state.association_candidates(idx)
    return state.channel_candidates(idx)


def _target_ids(net: Network, kind: str):
    return net.vap_ids if kind == "association" else net.channel_ids


def _current_index(state: SystemState, kind: str, idx: int) -> int:
    return int(state.assoc[idx]) if kind == "association" else int(state.chan[idx])


def _apply(state: SystemState, kind: str, idx: int, choice: int):
    if kind == "association":
        state.apply_association(idx, choice)
    else:
        state.apply_channel(idx, choice)


def _proposal(
    state, kind, idx, values, feasible, probs, choice, changed, temperature, record
) -> MoveProposal:
    net = state.net
    mover = net.client_ids[idx] if kind == "association" else net.vap_ids[idx]
    targets = _target_ids(net, kind)
    prop = MoveProposal(
        mover=mover,
        kind=kind,
        chosen=None if choice is None else targets[choice],
        changed=changed,
        temperature=temperature,
    )
    if record:
        prop.candidates = [
            Candidate(targets[k], float(values[k]), float(probs[k]), bool(feasible[k]))
            for k in range(len(targets))
        ]
    return prop


def gibbs_step(
    state: SystemState,
    t: int,
    policy: OptimizerPolicy,
    rng: np.random.Generator,
    record: bool = False,
) -> tuple[MoveProposal, float | None]:
    """One sampled move. Returns the proposal and, for exact policies, the
    energy of the new configuration (None for approx scores).

    The mover is chosen per the policy's selection order; its feasible
    candidates are sampled from the softmax at T(t). A mover with no
    feasible candidate leaves the state untouched.
    """
    net = state.net
    m = _mover_count(net)
    index = (t - 1) % m if policy.selection == "round-robin" else int(rng.integers(m))
    kind, idx = _mover_at(net, index)

    values, feasible = _candidate_values(state, kind, idx, policy.kind)
    temperature = policy.schedule.temperature(t)
    probs = softmax_probabilities(values, temperature, feasible)
    if probs.sum() == 0.0:
        log.warning("no feasible candidate for %s move of index %d", kind, idx)
        prop = _proposal(
            state, kind, idx, values, feasible, probs, None, False, temperature, record
        )
        return prop, None

    choice = int(rng.choice(len(probs), p=probs / probs.sum()))
    current = _current_index(state, kind, idx)
    changed = choice != current
    if changed:
        _apply(state, kind, idx, choice)
    new_u = float(values[choice]) if policy.kind != "dp-approx" else None
    prop = _proposal(
        state, kind, idx, values, feasible, probs, choice, changed, temperature, record
    )
    return prop, new_u


def greedy_step(
    state: SystemState, t: int, policy: OptimizerPolicy, record: bool = False
) -> tuple[MoveProposal, float | None]:
    """One argmax move; ties go to the lowest target index."""
    net = state.net
    m = _mover_count(net)
    index = (t - 1) % m
    kind, idx = _mover_at(net, index)

    values, feasible = state.association_candidates(idx) if kind == "association" \
        else state.channel_candidates(idx)
    if not feasible.any():
        prop = _proposal(
            state, kind, idx, values, feasible, np.zeros_like(values), None, False,
            None, record
        )
        return prop, None
    choice = int(np.argmax(np.where(feasible, values, -np.inf)))
    current = _current_index(state, kind, idx)
    changed = choice != current and values[choice] > values[current]
    if not changed:
        choice = current
    else:
        _apply(state, kind, idx, choice)
    probs = np.zeros_like(values)
    probs[choice] = 1.0
    prop = _proposal(
        state, kind, idx, values, feasible, probs, choice, changed, None, record
    )
    return prop, float(values[choice])


# -- initialization -----------------------------------------------------------


def initial_configuration(
    net: Network, rng: np.random.Generator, max_redraws: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Random channels, then closest-radio association.

    Each radio draws a uniform channel. Each client then associates with the
    closest radio offering a positive rate under the drawn channels, breaking
    distance ties uniformly at random (co-located radios of one AP are always
    tied). If some client is unreachable on every channel that is a scenario
    error; if the particular channel draw strands a client, the channels are
    redrawn.
    """
    I, V, C = net.n_clients, net.n_vaps, net.n_channels
    reachable_somewhere = (net.rates > 0).any(axis=(1, 2))
    if not reachable_somewhere.all():
        bad = net.client_ids[int(np.argmin(reachable_somewhere))]
        raise ScenarioError(f"client {bad!r} has no positive-rate AP on any channel")

    for _ in range(max_redraws):
        chan = rng.integers(0, C, size=V)
        rates_now = net.rates[:, np.arange(V), chan]  # (I, V)
        if not (rates_now > 0).any(axis=1).all():
            continue
        assoc = np.empty(I, dtype=np.int64)
        for i in range(I):
            ok = rates_now[i] > 0
            d = np.where(ok, net.distances[i], np.inf)
            best = d.min()
            ties = np.flatnonzero(d == best)
            assoc[i] = ties[rng.integers(len(ties))] if len(ties) > 1 else ties[0]
        return assoc, chan
    raise ScenarioError(
        "could not draw a channel assignment that keeps every client reachable"
    )


# -- full runs ---------------------------------------------------------------


@dataclass
class TrajectoryPoint:
    t: int
    temperature: float | None
    energy: float
    weighted_throughput: float
    config_hash: str


@dataclass
class RunResult:
    """Outcome of one optimizer run on one scenario draw."""

    run_id: str
    policy_kind: str
    scheme: str
    seed: int
    iterations: int
    trajectory: list[TrajectoryPoint]
    final_configuration: Configuration
    final_energy: float
    final_weighted_throughput: float
    rates: dict[str, float]
    schedule_phi: dict[str, float] | None
    access_p: dict[str, float]
    best_energy: float
    best_t: int
    best_configuration: Configuration
    noop_steps: int = 0


def _coerce_network(scenario_or_network) -> Network:
    if isinstance(scenario_or_network, Network):
        return scenario_or_network
    return scenario_or_network.to_network()


def run(
    scenario_or_network,
    policy: OptimizerPolicy,
    iterations: int | None = None,
    record_every: int | None = None,
    run_id: str = "run0",
) -> RunResult:
    """Run one optimizer policy from a fresh random initialization.

    Records (t, T, energy, weighted throughput, configuration hash) at the
    requested cadence plus the initial and final points, and tracks the best
    configuration seen anywhere along the trajectory. A greedy run stops
    early once a whole sweep of movers produces no change, which certifies
    a local optimum under single moves.
    """
    net = _coerce_network(scenario_or_network)
    iters = policy.iterations if iterations is None else iterations
    cadence = record_every if record_every else max(1, iters // 100)
    rng = np.random.default_rng(policy.seed)

    assoc, chan = initial_configuration(net, rng)
    state = SystemState(net, policy.scheme, assoc, chan)
    u = state.energy()
    best_u, best_t = u, 0
    best_snapshot = (state.assoc.copy(), state.chan.copy())
    trajectory = [
        TrajectoryPoint(0, None, u, state.weighted_throughput(),
                        state.to_configuration().digest())
    ]

    sweep = net.n_clients + net.n_vaps
    unchanged_streak = 0
    noops = 0
    last_t = 0
    for t in range(1, iters + 1):
        last_t = t
        if policy.kind == "greedy":
            prop, new_u = greedy_step(state, t, policy)
        else:
            prop, new_u = gibbs_step(state, t, policy, rng)
        if prop.chosen is None:
            noops += 1
        if new_u is None:
            new_u = state.energy()
        u = new_u
        unchanged_streak = 0 if prop.changed else unchanged_streak + 1
        if u > best_u + 1e-12:
            best_u, best_t = u, t
            best_snapshot = (state.assoc.copy(), state.chan.copy())
        if t % cadence == 0 or t == iters:
            trajectory.append(
                TrajectoryPoint(
                    t, prop.temperature, state.energy(), state.weighted_throughput(),
                    state.to_configuration().digest()
                )
            )
        if policy.kind == "greedy" and policy.selection == "round-robin" \
                and unchanged_streak >= sweep:
            if trajectory[-1].t != t:
                trajectory.append(
                    TrajectoryPoint(
                        t, None, state.energy(), state.weighted_throughput(),
                        state.to_configuration().digest()
                    )
                )
            break

    final_cfg = state.to_configuration()
    alloc = optimal_allocation(net, final_cfg, policy.scheme)
    rates = state.rates()
    best_state = SystemState(net, policy.scheme, best_snapshot[0], best_snapshot[1])
    return RunResult(
        run_id=run_id,
        policy_kind=policy.kind,
        scheme=policy.scheme,
        seed=policy.seed,
        iterations=last_t,
        trajectory=trajectory,
        final_configuration=final_cfg,
        final_energy=state.energy(),
        final_weighted_throughput=state.weighted_throughput(),
        rates={net.client_ids[i]: float(rates[i]) for i in range(net.n_clients)},
        schedule_phi=alloc.schedule,
        access_p=alloc.access,
        best_energy=best_state.energy(),
        best_t=best_t,
        best_configuration=best_state.to_configuration(),
        noop_steps=noops,
    )
