"""Packet-switched QKD network simulation and finite-key rate analysis.

Modules:
  topology   network description, shortest-path routing, built-in layouts
  netsim     discrete-event frame transport with storage routing protocols
  chanstats  per-pair channel statistics and the storage trade-off comparator
  keyrate    finite-key decoy-state BB84 key length engine
  optimizer  deterministic protocol-parameter maximization
  scenarios  batch sweep runner with published-figure presets
  cli        command-line entry point around the scenario runner
"""

__version__ = "0.1.0"

from .topology import (
    NetworkTopology,
    NodeSpec,
    LinkSpec,
    TopologyError,
    NoPathError,
    build_default_topology,
    build_star_topology,
    default_report_pairs,
    least_cost_path,
    load_topology,
    save_topology,
    topology_from_dict,
)
from .netsim import (
    RoutingProtocol,
    NO_STORAGE,
    STORAGE_UNLIMITED,
    storage_limited,
    SimConfig,
    SimRecord,
    DeliveredFrame,
    ConfigError,
    NegativeDelayError,
    NotDeliveredError,
    apply_router_delay,
    delay_effects,
    delivered_pulses,
    generate_traffic,
    md1_mean_wait,
    run,
)
from .chanstats import (
    INSERTION_LOSS_DB,
    PairStats,
    StorageComparison,
    NegativeStorageTimeError,
    NoDeliveredFramesError,
    apply_stl_postfilter,
    pair_stats,
    router_loss_db,
    storage_comparator,
    storage_histogram,
    write_pair_stats_csv,
)
from .keyrate import (
    SecurityParams,
    ProtocolParams,
    ChannelInput,
    KeyRateBreakdown,
    DegenerateIntensitiesError,
    ConstraintViolatedError,
    InsufficientStatisticsError,
    DomainError,
    binary_entropy,
    key_length,
    phase_error,
)
from .optimizer import (
    OptSettings,
    OptResult,
    NoFeasiblePointError,
    CostGuardError,
    brute_grid,
    optimize,
)
from .scenarios import (
    ScenarioConfig,
    ScenarioConfigError,
    ScenarioResult,
    ResultRow,
    UnknownPresetError,
    load_scenario_file,
    preset,
    run_scenario,
    scenario_from_dict,
)
