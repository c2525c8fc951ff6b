"""Discrete-event simulation of hybrid frames crossing a switched optical network.

Frames carry a classical header plus a quantum payload of temporal length t_f
with a leading guard segment t_g.  At each router the header is processed
(d_proc) and the frame waits for the single FCFS forwarding server (d_queue).
What happens to the payload during that delay depends on the routing protocol:

* no_storage         - payload shrinks by the full delay; dies at zero length.
* storage_unlimited  - payload is buffered in a fiber delay line once the guard
                       is used up; only the guard segment shrinks.
* storage_limited    - as above, but a frame is discarded when its accumulated
                       storage time would exceed the configured limit.

The event queue is a heap ordered by (time, insertion sequence), so runs are
bit-for-bit reproducible for a given seed.
"""
from __future__ import annotations

import csv
import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .topology import NetworkTopology, least_cost_path, path_fiber_db, path_length_km, ROUTER, RECEIVER

IN_TRANSIT = "in_transit"
ARRIVED = "arrived"
DISCARDED = "discarded"

ZERO_LENGTH = "zero_length"
STORAGE_LIMIT = "storage_limit"
QUEUE_OVERFLOW = "queue_overflow"


class NegativeDelayError(ValueError):
    pass


class NotDeliveredError(ValueError):
    pass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RoutingProtocol:
    kind: str
    stl: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("no_storage", "storage_unlimited", "storage_limited"):
            raise ConfigError(f"unknown routing protocol {self.kind!r}")
        if self.kind == "storage_limited":
            if self.stl is None or self.stl < 0:
                raise ConfigError("storage_limited needs a non-negative storage time limit")
        elif self.stl is not None:
            raise ConfigError(f"{self.kind} takes no storage time limit")


NO_STORAGE = RoutingProtocol("no_storage")
STORAGE_UNLIMITED = RoutingProtocol("storage_unlimited")


def storage_limited(stl: float) -> RoutingProtocol:
    return RoutingProtocol("storage_limited", stl)


@dataclass(frozen=True)
class SimConfig:
    protocol: RoutingProtocol
    frames_per_sender: int
    mean_interarrival: float            # seconds, mean of the exponential idle gap
    initial_frame_length: float         # seconds (temporal frame length T_f at creation)
    initial_guard_time: float = 0.0     # seconds
    header_processing_time: float = 1.0e-4   # seconds (d_proc)
    repetition_rate_hz: float = 1.0e9
    fiber_speed_km_per_s: float = 2.0e5
    storage_attenuation_db_per_km: float = 0.16
    queue_capacity: Optional[int] = None      # None = unbounded
    header_processors: Optional[int] = None   # None = unbounded
    seed: int = 0

    def __post_init__(self):
        if self.frames_per_sender < 0:
            raise ConfigError("frames_per_sender must be >= 0")
        if self.mean_interarrival <= 0:
            raise ConfigError("mean_interarrival must be > 0")
        if self.initial_frame_length <= 0:
            raise ConfigError("initial_frame_length must be > 0")
        if not 0 <= self.initial_guard_time < self.initial_frame_length:
            raise ConfigError("initial_guard_time must lie in [0, initial_frame_length)")
        if self.header_processing_time < 0:
            raise ConfigError("header_processing_time must be >= 0")
        if self.repetition_rate_hz <= 0 or self.fiber_speed_km_per_s <= 0:
            raise ConfigError("rates and speeds must be > 0")
        if self.storage_attenuation_db_per_km < 0:
            raise ConfigError("storage_attenuation_db_per_km must be >= 0")
        if self.queue_capacity is not None and self.queue_capacity < 1:
            raise ConfigError("queue_capacity must be >= 1 or None")
        if self.header_processors is not None and self.header_processors < 1:
            raise ConfigError("header_processors must be >= 1 or None")


class Frame:
    """Mutable in-flight frame state; becomes a DeliveredFrame on arrival."""

    __slots__ = ("frame_id", "src", "dst", "path", "props", "fiber_db", "length_km",
                 "n_routers", "created_at", "t_f", "t_g", "cum_storage", "hop",
                 "per_hop_storage", "per_hop_queue", "status", "reason", "hop_arrival")

    def __init__(self, frame_id, src, dst, path, props, fiber_db, length_km,
                 n_routers, created_at, t_f, t_g):
        self.frame_id = frame_id
        self.src = src
        self.dst = dst
        self.path = path
        self.props = props
        self.fiber_db = fiber_db
        self.length_km = length_km
        self.n_routers = n_routers
        self.created_at = created_at
        self.t_f = t_f
        self.t_g = t_g
        self.cum_storage = 0.0
        self.hop = 1
        self.per_hop_storage = []
        self.per_hop_queue = []
        self.status = IN_TRANSIT
        self.reason = None
        self.hop_arrival = 0.0


@dataclass(frozen=True)
class DeliveredFrame:
    src: str
    dst: str
    created_at: float
    delivered_at: float
    t_f: float
    t_g: float
    cum_storage: float
    per_hop_storage: tuple
    per_hop_queue: tuple
    n_routers: int
    fiber_db: float
    length_km: float


@dataclass
class SimRecord:
    """Outcome of one run: delivered frame summaries plus discard tallies."""
    config: SimConfig
    generated: dict            # (src, dst) -> frame count
    delivered: list            # DeliveredFrame
    discards: dict             # (src, dst, reason) -> frame count
    router_waits: dict         # router id -> [frames served, total queue wait]
    excluded: list = field(default_factory=list)   # moved here by STL post-filtering
    stl_postfilter: Optional[float] = None

    def mean_queue_wait(self, router: str) -> float:
        n, total = self.router_waits[router]
        return total / n if n else 0.0

    def frames_generated(self, pair) -> int:
        return self.generated.get(tuple(pair), 0)


def delay_effects(t_f: float, t_g: float, cum_storage: float, delay: float,
                  protocol: RoutingProtocol):
    """Apply one router's delay to a frame's (t_f, t_g) under a routing protocol.

    Returns (t_f, t_g, storage_time, status, reason).  Guard time always
    absorbs the front of the delay; what the protocol decides is whether the
    un-guarded remainder is discarded from the payload or buffered.
    """
    if delay < 0:
        raise NegativeDelayError(f"delay must be >= 0, got {delay}")
    if protocol.kind == "no_storage":
        new_tf = t_f - delay
        new_tg = max(0.0, t_g - delay)
        if new_tf <= 0.0:
            return 0.0, 0.0, 0.0, DISCARDED, ZERO_LENGTH
        return new_tf, new_tg, 0.0, IN_TRANSIT, None
    t_s = max(0.0, delay - t_g)
    new_tf = t_f - min(t_g, delay)
    new_tg = max(0.0, t_g - delay)
    if protocol.kind == "storage_limited" and cum_storage + t_s > protocol.stl:
        return new_tf, new_tg, t_s, DISCARDED, STORAGE_LIMIT
    return new_tf, new_tg, t_s, IN_TRANSIT, None


def apply_router_delay(frame: Frame, delay: float, protocol: RoutingProtocol) -> Frame:
    """Pure form of delay_effects acting on a Frame (updates state in place)."""
    t_f, t_g, t_s, status, reason = delay_effects(frame.t_f, frame.t_g,
                                                  frame.cum_storage, delay, protocol)
    frame.t_f, frame.t_g = t_f, t_g
    frame.cum_storage += t_s
    frame.per_hop_storage.append(t_s)
    frame.status, frame.reason = status, reason
    return frame


def delivered_pulses(frame, config: SimConfig) -> int:
    """Payload pulses surviving to the receiver; floored once at delivery.

    Accepts an in-flight Frame (which must have arrived) or a DeliveredFrame.
    """
    if getattr(frame, "status", ARRIVED) != ARRIVED:
        raise NotDeliveredError("frame was not delivered")
    return int(math.floor(config.repetition_rate_hz * (frame.t_f - frame.t_g)))


def generate_traffic(config: SimConfig, topology: NetworkTopology,
                     rng: random.Random) -> Iterator[Frame]:
    """Yield every frame of the run with its creation time, destination and path.

    Senders emit one frame at a time: the next creation time is the previous
    frame's transmission completion plus an exponential idle gap.  Destinations
    are uniform over all receivers.  Each sender gets its own substream seeded
    from rng, so the draw order is independent of event interleaving.
    """
    receivers = topology.receivers
    if not receivers:
        raise ConfigError("topology has no receivers")
    lam = 1.0 / config.mean_interarrival
    frame_id = 0
    for src in topology.senders:
        sub = random.Random(rng.getrandbits(64))
        t = 0.0
        for _ in range(config.frames_per_sender):
            t += sub.expovariate(lam)
            dst = receivers[sub.randrange(len(receivers))]
            path = least_cost_path(topology, src, dst, sub)
            props = tuple(
                topology.link(a, b).length_km / config.fiber_speed_km_per_s
                for a, b in zip(path, path[1:])
            )
            yield Frame(
                frame_id, src, dst, path, props,
                fiber_db=path_fiber_db(topology, path),
                length_km=path_length_km(topology, path),
                n_routers=len(path) - 2,
                created_at=t,
                t_f=config.initial_frame_length,
                t_g=config.initial_guard_time,
            )
            frame_id += 1
            t += config.initial_frame_length   # sender transmits before idling again


class _RouterState:
    __slots__ = ("queue", "busy", "hdr_busy", "hdr_wait", "n_served", "wait_sum")

    def __init__(self):
        self.queue = deque()
        self.busy = False
        self.hdr_busy = 0
        self.hdr_wait = deque()
        self.n_served = 0
        self.wait_sum = 0.0


_ARRIVE = 0
_HEADER_DONE = 1
_SERVER_FREE = 2
_DELIVER = 3


def run(config: SimConfig, topology: NetworkTopology, trace_path=None) -> SimRecord:
    """Execute the full run and return its SimRecord.  Deterministic per seed."""
    rng = random.Random(f"netsim:{config.seed}")
    frames = list(generate_traffic(config, topology, rng))

    generated: dict = {}
    for f in frames:
        key = (f.src, f.dst)
        generated[key] = generated.get(key, 0) + 1

    delivered: list = []
    discards: dict = {}
    routers = {r: _RouterState() for r in topology.routers}
    d_proc = config.header_processing_time
    protocol = config.protocol
    cap = config.queue_capacity
    k_hdr = config.header_processors

    trace_file = open(trace_path, "w", newline="") if trace_path else None
    trace = csv.writer(trace_file) if trace_file else None
    if trace:
        trace.writerow(["frame_id", "src", "dst", "hop", "d_queue_s", "T_s_s",
                        "t_f_after_s", "status"])

    events: list = []
    seq = 0
    for f in frames:
        # sender holds the line for the full frame; the hop's arrival time is
        # transmission completion plus link propagation
        t_arrive = f.created_at + config.initial_frame_length + f.props[0]
        f.hop_arrival = t_arrive
        heapq.heappush(events, (t_arrive, seq, _ARRIVE, f, f.path[1]))
        seq += 1

    def tally_discard(f, reason):
        key = (f.src, f.dst, reason)
        discards[key] = discards.get(key, 0) + 1

    def dispatch(node, state, now):
        nonlocal seq
        while not state.busy and state.queue:
            f, join_t = state.queue.popleft()
            wait = now - join_t
            state.n_served += 1
            state.wait_sum += wait
            f.per_hop_queue.append(wait)
            delay = (join_t - f.hop_arrival) + wait    # = d_proc + d_queue when headers never wait
            t_f, t_g, t_s, status, reason = delay_effects(f.t_f, f.t_g, f.cum_storage,
                                                          delay, protocol)
            f.t_f, f.t_g = t_f, t_g
            f.cum_storage += t_s
            f.per_hop_storage.append(t_s)
            if trace:
                trace.writerow([f.frame_id, f.src, f.dst, node, "%.12g" % wait,
                                "%.12g" % t_s, "%.12g" % t_f,
                                status if reason is None else f"{status}:{reason}"])
            if status == DISCARDED:
                f.status, f.reason = status, reason
                tally_discard(f, reason)
                continue
            state.busy = True
            t_done = now + f.t_f
            heapq.heappush(events, (t_done, seq, _SERVER_FREE, node, None)); seq += 1
            nxt = f.path[f.hop + 1]
            t_next = t_done + f.props[f.hop]
            f.hop += 1
            f.hop_arrival = t_next
            code = _DELIVER if nxt == f.dst else _ARRIVE
            heapq.heappush(events, (t_next, seq, code, f, nxt)); seq += 1

    while events:
        now, _, code, a, b = heapq.heappop(events)
        if code == _ARRIVE:
            f, node = a, b
            state = routers[node]
            if k_hdr is not None and state.hdr_busy >= k_hdr:
                state.hdr_wait.append(f)
            else:
                state.hdr_busy += 1
                heapq.heappush(events, (now + d_proc, seq, _HEADER_DONE, f, node)); seq += 1
        elif code == _HEADER_DONE:
            f, node = a, b
            state = routers[node]
            state.hdr_busy -= 1
            if state.hdr_wait:
                f2 = state.hdr_wait.popleft()
                state.hdr_busy += 1
                heapq.heappush(events, (now + d_proc, seq, _HEADER_DONE, f2, node)); seq += 1
            if cap is not None and len(state.queue) >= cap:
                f.status, f.reason = DISCARDED, QUEUE_OVERFLOW
                tally_discard(f, QUEUE_OVERFLOW)
                if trace:
                    trace.writerow([f.frame_id, f.src, f.dst, node, "", "",
                                    "%.12g" % f.t_f, f"{DISCARDED}:{QUEUE_OVERFLOW}"])
            else:
                state.queue.append((f, now))
                dispatch(node, state, now)
        elif code == _SERVER_FREE:
            node = a
            state = routers[node]
            state.busy = False
            dispatch(node, state, now)
        else:  # _DELIVER
            f = a
            f.status = ARRIVED
            delivered_at = now + d_proc     # receiver-side header read; payload untouched
            delivered.append(DeliveredFrame(
                f.src, f.dst, f.created_at, delivered_at, f.t_f, f.t_g,
                f.cum_storage, tuple(f.per_hop_storage), tuple(f.per_hop_queue),
                f.n_routers, f.fiber_db, f.length_km))
            if trace:
                trace.writerow([f.frame_id, f.src, f.dst, f.dst, "", "",
                                "%.12g" % f.t_f, ARRIVED])

    if trace_file:
        trace_file.close()

    n_disc = sum(discards.values())
    if len(delivered) + n_disc != sum(generated.values()):
        raise RuntimeError("frame conservation violated")   # internal consistency guard

    return SimRecord(
        config=config,
        generated=generated,
        delivered=delivered,
        discards=discards,
        router_waits={r: [st.n_served, st.wait_sum] for r, st in routers.items()},
    )


def md1_mean_wait(arrival_rate: float, service_time: float) -> float:
    """Mean FCFS queue wait of an M/D/1 server: rho*s / (2*(1-rho))."""
    rho = arrival_rate * service_time
    if not 0 <= rho < 1:
        raise ValueError(f"utilisation {rho:.3f} outside [0, 1)")
    return rho * service_time / (2.0 * (1.0 - rho))
