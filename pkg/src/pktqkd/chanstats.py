"""Channel statistics derived from a simulation record.

Every router visit costs a fixed insertion loss plus, for stored frames, the
attenuation of the fiber delay line the payload sat in: the stored time maps
to a fiber length through the group velocity.  Pair-level transmittance
averages the per-frame router loss in the dB domain by default.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import netsim
from .netsim import SimConfig, SimRecord
from .topology import NetworkTopology

INSERTION_LOSS_DB = 4.0

STORAGE_FAVORABLE = "storage_favorable"
NO_STORAGE_FAVORABLE = "no_storage_favorable"
TIE = "tie"


class NegativeStorageTimeError(ValueError):
    pass


class NoDeliveredFramesError(RuntimeError):
    pass


def router_loss_db(t_s: float, fiber_speed_km_per_s: float,
                   storage_attenuation_db_per_km: float,
                   insertion_loss_db: float = INSERTION_LOSS_DB) -> float:
    """Loss of one router visit: delay-line attenuation plus insertion loss."""
    if t_s < 0:
        raise NegativeStorageTimeError(f"storage time must be >= 0, got {t_s}")
    return t_s * fiber_speed_km_per_s * storage_attenuation_db_per_km + insertion_loss_db


@dataclass(frozen=True)
class PairStats:
    sender: str
    receiver: str
    routers_traversed: int
    fiber_length_km: float
    fiber_db: float
    n_routed: int                  # delivered payload pulses (N)
    n_sent: float                  # generated payload pulses (N0)
    mean_router_loss_db: float
    avg_eta_tot: float
    frames_generated: int
    frames_delivered: int
    frames_excluded_by_stl: int
    frames_discarded: dict         # reason -> count


def pair_stats(record: SimRecord, topology: NetworkTopology, config: SimConfig,
               pair: Sequence[str], averaging: str = "db") -> PairStats:
    """Aggregate one sender/receiver pair's delivered frames into channel inputs."""
    if averaging not in ("db", "linear"):
        raise ValueError(f"averaging must be 'db' or 'linear', got {averaging!r}")
    src, dst = pair
    frames = [f for f in record.delivered if f.src == src and f.dst == dst]
    if not frames:
        raise NoDeliveredFramesError(f"no delivered frames for pair {src!r} -> {dst!r}")

    v_g = config.fiber_speed_km_per_s
    alpha_s = config.storage_attenuation_db_per_km
    router_db = [
        f.cum_storage * v_g * alpha_s + INSERTION_LOSS_DB * f.n_routers
        for f in frames
    ]
    mean_router_db = math.fsum(router_db) / len(frames)
    fiber_db = math.fsum(f.fiber_db for f in frames) / len(frames)
    if averaging == "db":
        avg_eta = 10.0 ** (-(fiber_db + mean_router_db) / 10.0)
    else:
        avg_eta = math.fsum(
            10.0 ** (-(f.fiber_db + r) / 10.0) for f, r in zip(frames, router_db)
        ) / len(frames)

    n_routed = sum(netsim.delivered_pulses(f, config) for f in frames)
    n_gen = record.frames_generated((src, dst))
    n_sent = n_gen * config.repetition_rate_hz * (
        config.initial_frame_length - config.initial_guard_time)

    discarded: dict = {}
    for (s, d, reason), count in record.discards.items():
        if s == src and d == dst:
            discarded[reason] = discarded.get(reason, 0) + count
    n_excluded = sum(1 for f in record.excluded if f.src == src and f.dst == dst)

    return PairStats(
        sender=src, receiver=dst,
        routers_traversed=frames[0].n_routers,
        fiber_length_km=frames[0].length_km,
        fiber_db=fiber_db,
        n_routed=n_routed, n_sent=n_sent,
        mean_router_loss_db=mean_router_db,
        avg_eta_tot=avg_eta,
        frames_generated=n_gen,
        frames_delivered=len(frames),
        frames_excluded_by_stl=n_excluded,
        frames_discarded=discarded,
    )


def apply_stl_postfilter(record: SimRecord, stl: float) -> SimRecord:
    """Reclassify delivered frames whose accumulated storage exceeds stl.

    Post-processing counterpart of the storage_limited protocol: the run must
    have been produced under storage_unlimited, and excluded frames drop out
    of every pair statistic while remaining counted as generated.
    """
    if record.config.protocol.kind != "storage_unlimited":
        raise ValueError("STL post-filtering applies to storage_unlimited records only")
    if stl < 0:
        raise ValueError("stl must be >= 0")
    kept = [f for f in record.delivered if f.cum_storage <= stl]
    dropped = [f for f in record.delivered if f.cum_storage > stl]
    return replace(record, delivered=kept, excluded=list(record.excluded) + dropped,
                   stl_postfilter=stl)


@dataclass(frozen=True)
class StorageComparison:
    eta_s: float
    transmitted_if_stored: float      # payload-duration equivalent: eta_s * t_q
    transmitted_if_discarded: float   # payload-duration equivalent: t_q - t_d
    verdict: str


def storage_comparator(t_q: float, t_d: float, storage_attenuation_db_per_km: float,
                       fiber_speed_km_per_s: float) -> StorageComparison:
    """Single-delay trade-off: buffer the whole payload (attenuated) or clip it.

    Storing passes the full payload t_q through a delay line of transmittance
    eta_s; discarding forwards an unattenuated payload shortened by t_d.
    """
    if t_q <= 0:
        raise ValueError("t_q must be > 0")
    if t_d < 0:
        raise NegativeStorageTimeError(f"t_d must be >= 0, got {t_d}")
    eta_s = 10.0 ** (-(t_d * fiber_speed_km_per_s * storage_attenuation_db_per_km) / 10.0)
    stored = eta_s * t_q
    clipped = max(0.0, t_q - t_d)
    if stored > clipped:
        verdict = STORAGE_FAVORABLE
    elif stored < clipped:
        verdict = NO_STORAGE_FAVORABLE
    else:
        verdict = TIE
    return StorageComparison(eta_s, stored, clipped, verdict)


def storage_histogram(record: SimRecord, pair: Sequence[str],
                      bin_width: float = 25e-6):
    """Histogram of accumulated storage times for one pair's delivered frames.

    Returns (edges, fractions); fractions are normalized by the pair's
    delivered frame count so histograms are comparable across traffic levels.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    src, dst = pair
    values = [f.cum_storage for f in record.delivered if f.src == src and f.dst == dst]
    if not values:
        raise NoDeliveredFramesError(f"no delivered frames for pair {src!r} -> {dst!r}")
    n_bins = max(1, int(math.ceil((max(values) + bin_width * 0.5) / bin_width)))
    edges = np.arange(n_bins + 1) * bin_width
    counts, _ = np.histogram(values, bins=edges)
    return edges, counts / len(values)


_CSV_COLUMNS = ["sender", "receiver", "routers_traversed", "fiber_length_km",
                "n_routed", "n_sent", "mean_router_loss_db", "avg_eta_tot",
                "frames_generated", "frames_delivered", "frames_excluded_by_stl",
                "frames_discarded"]


def write_pair_stats_csv(stats: Sequence[PairStats], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_CSV_COLUMNS)
        for st in stats:
            w.writerow([
                st.sender, st.receiver, st.routers_traversed,
                "%.12g" % st.fiber_length_km, st.n_routed, "%.12g" % st.n_sent,
                "%.12g" % st.mean_router_loss_db, "%.12g" % st.avg_eta_tot,
                st.frames_generated, st.frames_delivered, st.frames_excluded_by_stl,
                sum(st.frames_discarded.values()),
            ])
