"""Batch scenario runner: traffic simulation -> channel statistics -> key rates.

A scenario fixes a topology and base traffic parameters, then sweeps any
subset of {protocol, mean_interarrival, initial_frame_length,
initial_guard_time, storage_attenuation_db_per_km, stl}.  Every sweep cell is
resolved to a simulation run (cached and reused when the cell only changes
post-processing knobs such as the storage attenuation or a post-hoc storage
time limit), per-pair channel statistics, and an optimized key rate.

Output is a CSV grid plus a JSON manifest that echoes the fully resolved
configuration; a run rebuilt from its manifest reproduces identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import chanstats, netsim, topology as topo
from .keyrate import ChannelInput, SecurityParams
from .optimizer import OptSettings, optimize

__all__ = [
    "SWEEPABLE_FIELDS",
    "PROTOCOL_CHOICES",
    "ScenarioConfigError",
    "UnknownPresetError",
    "ScenarioConfig",
    "ResultRow",
    "ScenarioResult",
    "run_scenario",
    "preset",
    "PRESET_NAMES",
    "write_rows_csv",
    "scenario_from_dict",
    "load_scenario_file",
]

SWEEPABLE_FIELDS = (
    "protocol",
    "mean_interarrival",
    "initial_frame_length",
    "initial_guard_time",
    "storage_attenuation_db_per_km",
    "stl",
)

# storage_post runs the unlimited-storage protocol and applies the cell's
# storage time limit as a receiver-side filter instead of en-route discard
PROTOCOL_CHOICES = (
    "no_storage",
    "storage_unlimited",
    "storage_limited",
    "storage_post",
)

REASON_NO_FRAMES = "no_frames_delivered"
REASON_NO_PAYLOAD = "no_payload_pulses"

_CSV_COLUMNS = (
    "scenario",
    "sender",
    "receiver",
    "routers_traversed",
    "protocol",
    "mean_interarrival_s",
    "initial_frame_length_s",
    "initial_guard_time_s",
    "storage_attenuation_db_per_km",
    "stl_s",
    "frames_generated",
    "frames_delivered",
    "frames_excluded_by_stl",
    "frames_discarded",
    "n_routed",
    "n_sent",
    "avg_eta_tot",
    "mean_router_loss_db",
    "rate_per_sent",
    "rate_per_routed",
    "ell",
    "reason",
    "q_x",
    "p_mu1",
    "p_mu2",
    "mu1",
    "mu2",
    "evaluations",
)


class ScenarioConfigError(ValueError):
    """Configuration rejected before any simulation starts."""


class UnknownPresetError(ScenarioConfigError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    """One named sweep over a fixed topology.

    frames_per_pair is the target frame count between each sender and each
    receiver; every sender generates n_receivers * frames_per_pair frames
    with uniformly random destinations, so realized per-pair counts
    fluctuate a little and are reported rather than forced.
    """

    name: str
    topology: topo.NetworkTopology
    frames_per_pair: int
    mean_interarrival: float
    initial_frame_length: float
    initial_guard_time: float = 0.0
    protocol: str = "no_storage"
    stl: float | None = None
    storage_attenuation_db_per_km: float = 0.16
    header_processing_time: float = 1.0e-4
    repetition_rate_hz: float = 1.0e9
    fiber_speed_km_per_s: float = 2.0e5
    queue_capacity: int | None = None
    header_processors: int | None = None
    averaging: str = "db"
    sweep: tuple[tuple[str, tuple], ...] = ()
    pairs: tuple[tuple[str, str], ...] | None = None
    security: SecurityParams = field(default_factory=SecurityParams)
    opt: OptSettings = field(default_factory=OptSettings)
    seed: int = 0
    output: str | None = None
    emit_storage_histograms: bool = False

    def __post_init__(self) -> None:
        if not self.name or any(c in self.name for c in "/\\ "):
            raise ScenarioConfigError("name must be non-empty without slashes or spaces")
        if self.frames_per_pair < 1:
            raise ScenarioConfigError("frames_per_pair must be >= 1")
        if self.protocol not in PROTOCOL_CHOICES:
            raise ScenarioConfigError(
                f"protocol must be one of {PROTOCOL_CHOICES}, got {self.protocol!r}"
            )
        if self.averaging not in ("db", "linear"):
            raise ScenarioConfigError("averaging must be 'db' or 'linear'")
        seen = set()
        for axis in self.sweep:
            if len(axis) != 2:
                raise ScenarioConfigError("each sweep axis must be (field, values)")
            name, values = axis
            if name not in SWEEPABLE_FIELDS:
                raise ScenarioConfigError(
                    f"sweep axis {name!r} is not one of {SWEEPABLE_FIELDS}"
                )
            if name in seen:
                raise ScenarioConfigError(f"duplicate sweep axis {name!r}")
            seen.add(name)
            if len(values) == 0:
                raise ScenarioConfigError(f"sweep axis {name!r} has no values")
            if name == "protocol":
                bad = [v for v in values if v not in PROTOCOL_CHOICES]
                if bad:
                    raise ScenarioConfigError(f"unknown protocol values {bad}")
            elif name == "stl":
                bad = [v for v in values if v is not None and not v > 0]
                if bad:
                    raise ScenarioConfigError("stl values must be positive or None")
            else:
                bad = [v for v in values if not isinstance(v, (int, float))]
                if bad:
                    raise ScenarioConfigError(f"axis {name!r} values must be numeric")
        node_ids = {n.id for n in self.topology.nodes}
        for pair in self.report_pairs():
            if pair[0] not in node_ids or pair[1] not in node_ids:
                raise ScenarioConfigError(f"pair {pair} references unknown nodes")

    def report_pairs(self) -> tuple[tuple[str, str], ...]:
        if self.pairs is not None:
            return tuple(tuple(p) for p in self.pairs)
        return tuple(topo.default_report_pairs(self.topology))

    def frames_per_sender(self) -> int:
        n_receivers = sum(
            1 for n in self.topology.nodes if n.kind == topo.RECEIVER
        )
        return self.frames_per_pair * n_receivers

    def cells(self) -> list[dict]:
        """Sweep coordinates in row-major axis order; one dict per cell."""
        coords = [{}]
        for name, values in self.sweep:
            coords = [dict(c, **{name: v}) for c in coords for v in values]
        return coords

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "topology": self.topology.to_dict(),
            "frames_per_pair": self.frames_per_pair,
            "mean_interarrival": self.mean_interarrival,
            "initial_frame_length": self.initial_frame_length,
            "initial_guard_time": self.initial_guard_time,
            "protocol": self.protocol,
            "stl": self.stl,
            "storage_attenuation_db_per_km": self.storage_attenuation_db_per_km,
            "header_processing_time": self.header_processing_time,
            "repetition_rate_hz": self.repetition_rate_hz,
            "fiber_speed_km_per_s": self.fiber_speed_km_per_s,
            "queue_capacity": self.queue_capacity,
            "header_processors": self.header_processors,
            "averaging": self.averaging,
            "sweep": [[name, list(values)] for name, values in self.sweep],
            "pairs": [list(p) for p in self.report_pairs()],
            "security": asdict(self.security),
            "opt": asdict(self.opt),
            "seed": self.seed,
            "output": self.output,
            "emit_storage_histograms": self.emit_storage_histograms,
        }
        return d


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> ScenarioConfig:
    """Build a config from its JSON form; inverse of ScenarioConfig.to_dict.

    The topology entry may be an inline node/link dict, {"file": path}
    (resolved against base_dir), or {"builtin": "default"}.
    """
    if not isinstance(data, dict):
        raise ScenarioConfigError("scenario entry must be an object")
    d = dict(data)
    try:
        t = d.pop("topology")
        if isinstance(t, dict) and "file" in t:
            path = Path(t["file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            network = topo.load_topology(path)
        elif isinstance(t, dict) and "builtin" in t:
            if t["builtin"] != "default":
                raise ScenarioConfigError(f"unknown builtin topology {t['builtin']!r}")
            network = topo.build_default_topology()
        elif isinstance(t, dict):
            network = topo.topology_from_dict(t)
        else:
            raise ScenarioConfigError("topology must be an object")
        sweep = tuple(
            (name, tuple(values)) for name, values in d.pop("sweep", [])
        )
        pairs = d.pop("pairs", None)
        if pairs is not None:
            pairs = tuple(tuple(p) for p in pairs)
        security = SecurityParams(**d.pop("security", {}))
        opt_d = d.pop("opt", {})
        if "bounds" in opt_d:
            opt_d["bounds"] = tuple(tuple(b) for b in opt_d["bounds"])
        opt = OptSettings(**opt_d)
        return ScenarioConfig(
            topology=network, sweep=sweep, pairs=pairs,
            security=security, opt=opt, **d,
        )
    except ScenarioConfigError:
        raise
    except (TypeError, ValueError, KeyError, topo.TopologyError) as exc:
        raise ScenarioConfigError(f"invalid scenario config: {exc}") from exc


def load_scenario_file(path) -> list[ScenarioConfig]:
    """Read one config file: a single scenario object or {"scenarios": [...]}."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioConfigError(f"cannot read config {path}: {exc}") from exc
    entries = data.get("scenarios", [data]) if isinstance(data, dict) else data
    if not isinstance(entries, list) or not entries:
        raise ScenarioConfigError("config must hold at least one scenario")
    return [scenario_from_dict(e, base_dir=path.parent) for e in entries]


@dataclass(frozen=True)
class ResultRow:
    """One (pair x sweep cell) outcome; rate 0 rows carry a reason code."""

    scenario: str
    sender: str
    receiver: str
    routers_traversed: int
    protocol: str
    mean_interarrival_s: float
    initial_frame_length_s: float
    initial_guard_time_s: float
    storage_attenuation_db_per_km: float
    stl_s: float | None
    frames_generated: int
    frames_delivered: int
    frames_excluded_by_stl: int
    frames_discarded: int
    n_routed: int
    n_sent: float
    avg_eta_tot: float
    mean_router_loss_db: float
    rate_per_sent: float
    rate_per_routed: float
    ell: int
    reason: str
    q_x: float | None
    p_mu1: float | None
    p_mu2: float | None
    mu1: float | None
    mu2: float | None
    evaluations: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    rows: list[ResultRow]
    cell_seeds: list[dict]
    failures: list[dict]
    csv_path: str | None = None
    manifest_path: str | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def write_rows_csv(rows, path) -> None:
    """Stable-column CSV with locale-independent 12 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for row in rows:
            d = row.to_dict()
            writer.writerow([_fmt(d[c]) for c in _CSV_COLUMNS])


def _derive_seed(master_seed: int, index: int) -> int:
    digest = hashlib.sha256(f"pktqkd:{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _des_protocol(protocol: str, stl) -> netsim.RoutingProtocol:
    if protocol == "no_storage":
        return netsim.NO_STORAGE
    if protocol in ("storage_unlimited", "storage_post"):
        return netsim.STORAGE_UNLIMITED
    if protocol == "storage_limited":
        if stl is None:
            raise ScenarioConfigError("storage_limited cells need a finite stl")
        return netsim.storage_limited(stl)
    raise ScenarioConfigError(f"unknown protocol {protocol!r}")


@dataclass(frozen=True)
class _Cell:
    index: int
    coords: dict
    protocol: str
    stl: float | None
    post_stl: float | None
    sim_key: tuple
    alpha_s: float


def _resolve_cells(config: ScenarioConfig) -> list[_Cell]:
    cells = []
    for idx, coords in enumerate(config.cells()):
        protocol = coords.get("protocol", config.protocol)
        stl = coords.get("stl", config.stl)
        alpha_s = coords.get(
            "storage_attenuation_db_per_km", config.storage_attenuation_db_per_km
        )
        des_protocol = _des_protocol(protocol, stl)
        post_stl = stl if protocol == "storage_post" else None
        sim_key = (
            des_protocol.kind,
            des_protocol.stl,
            coords.get("mean_interarrival", config.mean_interarrival),
            coords.get("initial_frame_length", config.initial_frame_length),
            coords.get("initial_guard_time", config.initial_guard_time),
        )
        cells.append(
            _Cell(
                index=idx, coords=coords, protocol=protocol, stl=stl,
                post_stl=post_stl, sim_key=sim_key, alpha_s=alpha_s,
            )
        )
    return cells


def _sim_config(config: ScenarioConfig, cell: _Cell, seed: int) -> netsim.SimConfig:
    kind, stl, interarrival, frame_length, guard_time = cell.sim_key
    return netsim.SimConfig(
        protocol=netsim.RoutingProtocol(kind, stl),
        frames_per_sender=config.frames_per_sender(),
        mean_interarrival=interarrival,
        initial_frame_length=frame_length,
        initial_guard_time=guard_time,
        header_processing_time=config.header_processing_time,
        repetition_rate_hz=config.repetition_rate_hz,
        fiber_speed_km_per_s=config.fiber_speed_km_per_s,
        storage_attenuation_db_per_km=cell.alpha_s,
        queue_capacity=config.queue_capacity,
        header_processors=config.header_processors,
        seed=seed,
    )


def _run_sim(args):
    sim_config, network = args
    return netsim.run(sim_config, network)


def _empty_pair_row(config, cell, record, pair, stats_config, n_routers) -> ResultRow:
    src, dst = pair
    generated = record.frames_generated(pair)
    n_sent = generated * stats_config.repetition_rate_hz * (
        stats_config.initial_frame_length - stats_config.initial_guard_time
    )
    discarded = sum(
        count for (s, d, _r), count in record.discards.items()
        if s == src and d == dst
    )
    excluded = sum(1 for f in record.excluded if f.src == src and f.dst == dst)
    return ResultRow(
        scenario=config.name, sender=src, receiver=dst,
        routers_traversed=n_routers,
        protocol=cell.protocol,
        mean_interarrival_s=cell.sim_key[2],
        initial_frame_length_s=cell.sim_key[3],
        initial_guard_time_s=cell.sim_key[4],
        storage_attenuation_db_per_km=cell.alpha_s,
        stl_s=cell.stl,
        frames_generated=generated, frames_delivered=0,
        frames_excluded_by_stl=excluded, frames_discarded=discarded,
        n_routed=0, n_sent=n_sent, avg_eta_tot=0.0, mean_router_loss_db=0.0,
        rate_per_sent=0.0, rate_per_routed=0.0, ell=0, reason=REASON_NO_FRAMES,
        q_x=None, p_mu1=None, p_mu2=None, mu1=None, mu2=None, evaluations=0,
    )


def run_scenario(config: ScenarioConfig, workers: int = 1,
                 emit: str = "both") -> ScenarioResult:
    """Execute every sweep cell and report one row per (pair, cell).

    Simulation runs are shared between cells that differ only in
    post-processing coordinates.  Cell failures after validation are recorded
    and skipped rather than aborting the run.  When config.output is set the
    row grid (emit csv/both) and a reloadable manifest (emit json/both) are
    written there.
    """
    if emit not in ("csv", "json", "both"):
        raise ScenarioConfigError("emit must be 'csv', 'json', or 'both'")
    cells = _resolve_cells(config)
    pairs = config.report_pairs()
    network = config.topology
    pair_routers = {
        p: topo.routers_on_path(
            network, network.equal_cost_paths(p[0], p[1])[0][0]
        )
        for p in pairs
    }

    sim_plan: dict[tuple, tuple[int, netsim.SimConfig]] = {}
    for cell in cells:
        if cell.sim_key not in sim_plan:
            seed = _derive_seed(config.seed, len(sim_plan))
            sim_plan[cell.sim_key] = (seed, _sim_config(config, cell, seed))

    keys = list(sim_plan)
    configs = [sim_plan[k][1] for k in keys]
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_sim, [(c, network) for c in configs]))
    else:
        records = [netsim.run(c, network) for c in configs]
    sim_records = dict(zip(keys, records))

    filtered_cache: dict[tuple, netsim.SimRecord] = {}
    rows: list[ResultRow] = []
    failures: list[dict] = []
    for cell in cells:
        record = sim_records[cell.sim_key]
        if cell.post_stl is not None:
            cache_key = (cell.sim_key, cell.post_stl)
            if cache_key not in filtered_cache:
                filtered_cache[cache_key] = chanstats.apply_stl_postfilter(
                    record, cell.post_stl
                )
            record = filtered_cache[cache_key]
        stats_config = replace(
            record.config, storage_attenuation_db_per_km=cell.alpha_s
        )
        for pair in pairs:
            try:
                rows.append(
                    _pair_row(config, cell, record, stats_config, pair,
                              pair_routers[pair])
                )
            except chanstats.NoDeliveredFramesError:
                rows.append(
                    _empty_pair_row(config, cell, record, pair, stats_config,
                                    pair_routers[pair])
                )
            except Exception as exc:   # cell-level fault isolation
                failures.append(
                    {"cell": cell.index, "pair": list(pair),
                     "coords": cell.coords, "error": f"{type(exc).__name__}: {exc}"}
                )

    cell_seeds = [
        {"sim_key": list(key), "seed": sim_plan[key][0]} for key in keys
    ]
    result = ScenarioResult(
        config=config, rows=rows, cell_seeds=cell_seeds, failures=failures
    )
    if config.output is not None:
        result = _emit(result, cells, sim_records, emit)
    return result


def _pair_row(config, cell, record, stats_config, pair, n_routers) -> ResultRow:
    stats = chanstats.pair_stats(
        record, config.topology, stats_config, pair, averaging=config.averaging
    )
    if stats.n_routed < 1:
        # frames arrived but every payload floored to zero pulses
        return _no_signal_row(config, cell, stats, REASON_NO_PAYLOAD)
    channel = ChannelInput(
        n_routed=stats.n_routed, n_sent=stats.n_sent, eta_tot=stats.avg_eta_tot
    )
    opt_result = optimize(channel, config.security, config.opt)
    b = opt_result.breakdown
    best = opt_result.best
    return ResultRow(
        scenario=config.name, sender=stats.sender, receiver=stats.receiver,
        routers_traversed=stats.routers_traversed,
        protocol=cell.protocol,
        mean_interarrival_s=cell.sim_key[2],
        initial_frame_length_s=cell.sim_key[3],
        initial_guard_time_s=cell.sim_key[4],
        storage_attenuation_db_per_km=cell.alpha_s,
        stl_s=cell.stl,
        frames_generated=stats.frames_generated,
        frames_delivered=stats.frames_delivered,
        frames_excluded_by_stl=stats.frames_excluded_by_stl,
        frames_discarded=sum(stats.frames_discarded.values()),
        n_routed=stats.n_routed, n_sent=stats.n_sent,
        avg_eta_tot=stats.avg_eta_tot,
        mean_router_loss_db=stats.mean_router_loss_db,
        rate_per_sent=b.rate_per_sent, rate_per_routed=b.rate_per_routed,
        ell=b.ell, reason=b.reason or "",
        q_x=best.q_x, p_mu1=best.p_mu1, p_mu2=best.p_mu2,
        mu1=best.mu1, mu2=best.mu2,
        evaluations=opt_result.evaluations,
    )


def _no_signal_row(config, cell, stats, reason) -> ResultRow:
    return ResultRow(
        scenario=config.name, sender=stats.sender, receiver=stats.receiver,
        routers_traversed=stats.routers_traversed,
        protocol=cell.protocol,
        mean_interarrival_s=cell.sim_key[2],
        initial_frame_length_s=cell.sim_key[3],
        initial_guard_time_s=cell.sim_key[4],
        storage_attenuation_db_per_km=cell.alpha_s,
        stl_s=cell.stl,
        frames_generated=stats.frames_generated,
        frames_delivered=stats.frames_delivered,
        frames_excluded_by_stl=stats.frames_excluded_by_stl,
        frames_discarded=sum(stats.frames_discarded.values()),
        n_routed=stats.n_routed, n_sent=stats.n_sent,
        avg_eta_tot=stats.avg_eta_tot,
        mean_router_loss_db=stats.mean_router_loss_db,
        rate_per_sent=0.0, rate_per_routed=0.0, ell=0, reason=reason,
        q_x=None, p_mu1=None, p_mu2=None, mu1=None, mu2=None, evaluations=0,
    )


def _versions() -> dict:
    import networkx
    import numpy
    import scipy

    from . import __version__

    return {
        "pktqkd": __version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "networkx": networkx.__version__,
    }


def _emit(result: ScenarioResult, cells, sim_records, emit: str) -> ScenarioResult:
    config = result.config
    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = manifest_path = None
    if emit in ("csv", "both"):
        csv_path = out_dir / f"{config.name}.csv"
        write_rows_csv(result.rows, csv_path)
        if config.emit_storage_histograms:
            _emit_histograms(result, cells, sim_records, out_dir)
    if emit in ("json", "both"):
        manifest = {
            "scenario": config.to_dict(),
            "seeds": {"master": config.seed, "cells": result.cell_seeds},
            "versions": _versions(),
            "row_count": len(result.rows),
            "failures": result.failures,
            "rows": [r.to_dict() for r in result.rows],
        }
        manifest_path = out_dir / f"{config.name}.manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return replace(
        result,
        csv_path=None if csv_path is None else str(csv_path),
        manifest_path=None if manifest_path is None else str(manifest_path),
    )


def _emit_histograms(result, cells, sim_records, out_dir: Path) -> None:
    for cell in cells:
        record = sim_records[cell.sim_key]
        if record.config.protocol.kind == "no_storage":
            continue
        for pair in result.config.report_pairs():
            try:
                edges, fractions = chanstats.storage_histogram(record, pair)
            except chanstats.NoDeliveredFramesError:
                continue
            name = f"{result.config.name}_hist_c{cell.index}_{pair[0]}_{pair[1]}.csv"
            with open(out_dir / name, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["bin_lo_s", "bin_hi_s", "fraction"])
                for i, frac in enumerate(fractions):
                    writer.writerow(
                        [_fmt(float(edges[i])), _fmt(float(edges[i + 1])), _fmt(float(frac))]
                    )


def _us(value_us: float) -> float:
    return value_us * 1e-6


PRESET_NAMES = ("fig4", "fig5", "fig6", "fig7", "fig8")

# (tag, mean_interarrival_us, frame_length_us, guard_time_us) for the four
# traffic settings shared by the storage sweeps
_STORAGE_VARIANTS = (
    ("long_g0", 30000.0, 2000.0, 0.0),
    ("long_g800", 30000.0, 2000.0, 800.0),
    ("short_g0", 3000.0, 200.0, 0.0),
    ("short_g80", 3000.0, 200.0, 80.0),
)

_ALPHA_AXIS = (0.001, 0.003, 0.01, 0.03, 0.05, 0.1, 0.16, 0.3)

_STL_AXIS_LONG = tuple(
    [_us(v) for v in (50, 100, 150, 200, 250, 300, 350, 400, 450, 500, 600, 800)]
    + [None]
)
_STL_AXIS_SHORT = tuple(
    [_us(v) for v in (25, 50, 75, 100, 125, 150, 200, 250, 300, 400)] + [None]
)


def _scaled_frames(frames_per_pair: int, scale: float) -> int:
    scaled = round(frames_per_pair * scale)
    if scaled < 1:
        raise ScenarioConfigError(f"scale {scale} leaves no frames to simulate")
    return scaled


def preset(name: str, scale: float = 1.0, seed: int = 0) -> list[ScenarioConfig]:
    """Published parameter grids as ready-to-run scenario variants.

    scale multiplies the per-pair frame targets so desk runs stay short while
    keeping every ratio; 1.0 reproduces the full published workloads.
    """
    if name not in PRESET_NAMES:
        raise UnknownPresetError(
            f"unknown preset {name!r}; choose from {PRESET_NAMES}"
        )
    if not scale > 0:
        raise ScenarioConfigError("scale must be positive")
    network = topo.build_default_topology()
    common = dict(topology=network, seed=seed)

    if name == "fig4":
        frames = _scaled_frames(18750, scale)
        return [
            ScenarioConfig(
                name="fig4_frame_length",
                frames_per_pair=frames,
                mean_interarrival=_us(30000), initial_frame_length=_us(2000),
                initial_guard_time=0.0, protocol="no_storage",
                sweep=(
                    ("initial_frame_length",
                     tuple(_us(v) for v in (200.0, 500.0, 1000.0, 2000.0, 4000.0))),
                    ("mean_interarrival",
                     tuple(_us(v) for v in (3000.0, 10000.0, 30000.0))),
                ),
                **common,
            ),
            ScenarioConfig(
                name="fig4_guard_time",
                frames_per_pair=frames,
                mean_interarrival=_us(30000), initial_frame_length=_us(2000),
                initial_guard_time=0.0, protocol="no_storage",
                sweep=(
                    ("initial_guard_time",
                     tuple(_us(v) for v in (0.0, 200.0, 800.0, 1600.0))),
                    ("mean_interarrival",
                     tuple(_us(v) for v in (3000.0, 10000.0, 30000.0))),
                ),
                **common,
            ),
        ]

    if name == "fig5":
        frames = _scaled_frames(37500, scale)
        return [
            ScenarioConfig(
                name=f"fig5_{tag}",
                frames_per_pair=frames,
                mean_interarrival=_us(interarrival),
                initial_frame_length=_us(frame_len),
                initial_guard_time=_us(guard),
                protocol="storage_unlimited",
                sweep=(
                    ("protocol", ("no_storage", "storage_unlimited")),
                    ("storage_attenuation_db_per_km", _ALPHA_AXIS),
                ),
                **common,
            )
            for tag, interarrival, frame_len, guard in _STORAGE_VARIANTS
        ]

    if name == "fig6":
        frames = _scaled_frames(37500, scale)
        return [
            ScenarioConfig(
                name=f"fig6_{tag}",
                frames_per_pair=frames,
                mean_interarrival=_us(interarrival),
                initial_frame_length=_us(frame_len),
                initial_guard_time=_us(guard),
                protocol="storage_post",
                storage_attenuation_db_per_km=0.16,
                sweep=(
                    ("stl",
                     _STL_AXIS_LONG if frame_len >= 1000 else _STL_AXIS_SHORT),
                ),
                **common,
            )
            for tag, interarrival, frame_len, guard in _STORAGE_VARIANTS
        ]

    if name == "fig7":
        frames = _scaled_frames(37500, scale)
        return [
            ScenarioConfig(
                name=f"fig7_{tag}",
                frames_per_pair=frames,
                mean_interarrival=_us(interarrival),
                initial_frame_length=_us(frame_len),
                initial_guard_time=_us(guard),
                protocol="storage_unlimited",
                storage_attenuation_db_per_km=0.16,
                emit_storage_histograms=True,
                **common,
            )
            for tag, interarrival, frame_len, guard in _STORAGE_VARIANTS
            if guard == 0.0
        ]

    frames = _scaled_frames(37500, scale)   # fig8
    stl_axis_2000 = tuple(
        _us(v) for v in (100, 160, 220, 280, 320, 360, 420, 500, 650, 800)
    )
    stl_axis_10000 = tuple(
        _us(v) for v in (200, 350, 500, 550, 700, 900, 1200, 1600, 2000)
    )
    protocols = ("storage_limited", "storage_post")
    return [
        ScenarioConfig(
            name="fig8_stl_sweep_f2000",
            frames_per_pair=frames,
            mean_interarrival=_us(15000), initial_frame_length=_us(2000),
            protocol="storage_limited", storage_attenuation_db_per_km=0.16,
            sweep=(("protocol", protocols), ("stl", stl_axis_2000)),
            **common,
        ),
        ScenarioConfig(
            name="fig8_rate_sweep_f2000",
            frames_per_pair=frames,
            mean_interarrival=_us(15000), initial_frame_length=_us(2000),
            protocol="storage_limited", stl=_us(320),
            storage_attenuation_db_per_km=0.16,
            sweep=(
                ("protocol", protocols),
                ("mean_interarrival",
                 tuple(_us(v) for v in (5000, 10000, 15000, 20000, 30000))),
            ),
            **common,
        ),
        ScenarioConfig(
            name="fig8_stl_sweep_f10000",
            frames_per_pair=frames,
            mean_interarrival=_us(50000), initial_frame_length=_us(10000),
            protocol="storage_limited", storage_attenuation_db_per_km=0.16,
            sweep=(("protocol", protocols), ("stl", stl_axis_10000)),
            **common,
        ),
        ScenarioConfig(
            name="fig8_rate_sweep_f10000",
            frames_per_pair=frames,
            mean_interarrival=_us(50000), initial_frame_length=_us(10000),
            protocol="storage_limited", stl=_us(550),
            storage_attenuation_db_per_km=0.16,
            sweep=(
                ("protocol", protocols),
                ("mean_interarrival",
                 tuple(_us(v) for v in (20000, 35000, 50000, 75000, 100000))),
            ),
            **common,
        ),
    ]
