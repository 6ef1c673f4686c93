"""Deterministic simulation and optimization of joint channel selection,
client association and channel access for proportional fairness."""

from .annealing import (
    OptimizerPolicy,
    RunResult,
    Schedule,
    TrajectoryPoint,
    gibbs_step,
    greedy_step,
    initial_configuration,
    run,
    softmax_probabilities,
)
from .baselines import (
    MinIntResult,
    interfering_pair_count,
    minint_channel_selection,
    minint_wifi_run,
    wifi_allocation,
    wifi_association,
)
from .fairness import (
    SCHEME_CLIENT,
    SCHEME_SERVER,
    SCHEMES,
    Allocation,
    SystemState,
    ThroughputReport,
    energy,
    optimal_access,
    optimal_allocation,
    optimal_schedule,
    slot_monte_carlo,
    throughput,
)
from .model import (
    AccessPoint,
    Channel,
    Client,
    Configuration,
    InterferenceGraph,
    Network,
    ScenarioError,
    VirtualAP,
    WeightAggregates,
    build_interference_graph,
    client_interference_scope,
    expand_virtual_aps,
    feasible_aps,
    is_feasible,
)
from .oracle import (
    EnumerationResult,
    enumerate_optimum,
    numeric_allocation_optimum,
    oracle_energy,
)
from .radio import (
    ChannelProfile,
    RadioModel,
    RateTier,
    channel_profile,
    link_rate,
    range_scale,
)
from .scenarios import (
    BUILTIN_NAMES,
    ClientRegion,
    Scenario,
    builtin,
    load_scenario,
    save_result,
    save_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AccessPoint",
    "Allocation",
    "BUILTIN_NAMES",
    "Channel",
    "ChannelProfile",
    "Client",
    "ClientRegion",
    "Configuration",
    "EnumerationResult",
    "InterferenceGraph",
    "MinIntResult",
    "Network",
    "OptimizerPolicy",
    "RadioModel",
    "RateTier",
    "RunResult",
    "SCHEMES",
    "SCHEME_CLIENT",
    "SCHEME_SERVER",
    "Scenario",
    "ScenarioError",
    "Schedule",
    "SystemState",
    "ThroughputReport",
    "TrajectoryPoint",
    "VirtualAP",
    "WeightAggregates",
    "build_interference_graph",
    "builtin",
    "channel_profile",
    "client_interference_scope",
    "energy",
    "enumerate_optimum",
    "expand_virtual_aps",
    "feasible_aps",
    "gibbs_step",
    "greedy_step",
    "initial_configuration",
    "interfering_pair_count",
    "is_feasible",
    "link_rate",
    "load_scenario",
    "minint_channel_selection",
    "minint_wifi_run",
    "numeric_allocation_optimum",
    "optimal_access",
    "optimal_allocation",
    "optimal_schedule",
    "oracle_energy",
    "range_scale",
    "run",
    "save_result",
    "save_scenario",
    "slot_monte_carlo",
    "softmax_probabilities",
    "throughput",
    "wifi_allocation",
    "wifi_association",
]
