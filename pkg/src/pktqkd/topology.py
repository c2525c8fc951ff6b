"""Optical network topology: nodes, fiber links, and least-cost path selection.

Users (senders/receivers) hang off routers by a single access fiber; routers
form the switched core.  Path costs are total fiber length and ties between
equal-cost paths are broken uniformly at random per frame.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

SENDER = "sender"
RECEIVER = "receiver"
ROUTER = "router"
_KINDS = (SENDER, RECEIVER, ROUTER)


class TopologyError(ValueError):
    """Structural problem in a topology definition."""


class NoPathError(LookupError):
    """No route exists between the requested endpoints."""


@dataclass(frozen=True)
class NodeSpec:
    id: str
    kind: str
    attached_router: Optional[str] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise TopologyError(f"node {self.id!r}: unknown kind {self.kind!r}")
        if self.kind == ROUTER and self.attached_router is not None:
            raise TopologyError(f"router {self.id!r} cannot have an attached_router")


@dataclass(frozen=True)
class LinkSpec:
    a: str
    b: str
    length_km: float
    attenuation_db_per_km: float

    def __post_init__(self):
        if self.a == self.b:
            raise TopologyError(f"link {self.a!r}-{self.b!r} is a self-loop")
        if self.length_km <= 0:
            raise TopologyError(f"link {self.a!r}-{self.b!r}: length must be positive")
        if self.attenuation_db_per_km < 0:
            raise TopologyError(f"link {self.a!r}-{self.b!r}: attenuation must be >= 0")


class NetworkTopology:
    """Immutable node/link collection with cached least-cost path enumeration."""

    def __init__(self, nodes: Iterable[NodeSpec], links: Iterable[LinkSpec]):
        self.nodes = tuple(nodes)
        self.links = tuple(links)
        self._by_id = {n.id: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise TopologyError("duplicate node ids")
        self._link_by_ends = {}
        for ln in self.links:
            for end in (ln.a, ln.b):
                if end not in self._by_id:
                    raise TopologyError(f"link references unknown node {end!r}")
            key = frozenset((ln.a, ln.b))
            if key in self._link_by_ends:
                raise TopologyError(f"parallel link {ln.a!r}-{ln.b!r}")
            self._link_by_ends[key] = ln

        self.senders = tuple(sorted(n.id for n in self.nodes if n.kind == SENDER))
        self.receivers = tuple(sorted(n.id for n in self.nodes if n.kind == RECEIVER))
        self.routers = tuple(sorted(n.id for n in self.nodes if n.kind == ROUTER))
        self._validate_users()

        g = nx.Graph()
        g.add_nodes_from(self._by_id)
        for ln in self.links:
            g.add_edge(ln.a, ln.b, length_km=ln.length_km)
        if len(g) and not nx.is_connected(g):
            raise TopologyError("topology is not connected")
        self._graph = g
        self._path_cache: dict = {}

    def _validate_users(self):
        for n in self.nodes:
            if n.kind == ROUTER:
                continue
            if n.attached_router is None:
                raise TopologyError(f"user {n.id!r} lacks an attached_router")
            att = self._by_id.get(n.attached_router)
            if att is None or att.kind != ROUTER:
                raise TopologyError(f"user {n.id!r}: attached_router {n.attached_router!r} is not a router")
            incident = [ln for key, ln in self._link_by_ends.items() if n.id in key]
            if len(incident) != 1 or frozenset((n.id, n.attached_router)) not in self._link_by_ends:
                raise TopologyError(f"user {n.id!r} must have exactly one link, to its attached router")

    def node(self, node_id: str) -> NodeSpec:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise TopologyError(f"unknown node {node_id!r}") from None

    def link(self, a: str, b: str) -> LinkSpec:
        try:
            return self._link_by_ends[frozenset((a, b))]
        except KeyError:
            raise TopologyError(f"no link {a!r}-{b!r}") from None

    def equal_cost_paths(self, src: str, dst: str) -> tuple[tuple[tuple[str, ...], ...], float]:
        """All least-cost paths src->dst (canonically ordered) and their shared cost in km."""
        key = (src, dst)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        self.node(src), self.node(dst)
        try:
            paths = sorted(tuple(p) for p in nx.all_shortest_paths(self._graph, src, dst, weight="length_km"))
        except nx.NetworkXNoPath:
            raise NoPathError(f"no path {src!r} -> {dst!r}") from None
        cost = path_length_km(self, paths[0])
        self._path_cache[key] = (tuple(paths), cost)
        return self._path_cache[key]

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            d = {"id": n.id, "kind": n.kind}
            if n.attached_router is not None:
                d["attached_router"] = n.attached_router
            nodes.append(d)
        links = [
            {"a": ln.a, "b": ln.b, "length_km": ln.length_km,
             "attenuation_db_per_km": ln.attenuation_db_per_km}
            for ln in self.links
        ]
        return {"nodes": nodes, "links": links}

    def __eq__(self, other):
        return isinstance(other, NetworkTopology) and self.nodes == other.nodes and self.links == other.links


def least_cost_path(topology: NetworkTopology, src: str, dst: str,
                    rng: random.Random) -> tuple[str, ...]:
    """Pick a least-total-length path; equal-cost ties are broken uniformly by rng."""
    if src == dst:
        raise ValueError("src and dst must differ")
    paths, _ = topology.equal_cost_paths(src, dst)
    if len(paths) == 1:
        return paths[0]
    return paths[rng.randrange(len(paths))]


def path_length_km(topology: NetworkTopology, path: Sequence[str]) -> float:
    return sum(topology.link(a, b).length_km for a, b in zip(path, path[1:]))


def path_fiber_db(topology: NetworkTopology, path: Sequence[str]) -> float:
    """Total fiber attenuation in dB along a node path."""
    return sum(
        topology.link(a, b).length_km * topology.link(a, b).attenuation_db_per_km
        for a, b in zip(path, path[1:])
    )


def routers_on_path(topology: NetworkTopology, path: Sequence[str]) -> int:
    return sum(1 for n in path if topology.node(n).kind == ROUTER)


def build_default_topology(user_link_km: float = 5.0,
                           router_link_km: float = 20.0,
                           attenuation_db_per_km: float = 0.2) -> NetworkTopology:
    """Four-router switched core with two senders and two receivers per router.

    The core is a ring in which R2 and R3 sit on opposite corners, so user
    pairs exist at one, two, and three traversed routers, and the three-router
    pairs see two equal-cost routes.
    """
    nodes = [NodeSpec(f"R{i}", ROUTER) for i in (1, 2, 3, 4)]
    links = []
    for a, b in (("R1", "R2"), ("R2", "R4"), ("R4", "R3"), ("R3", "R1")):
        links.append(LinkSpec(a, b, router_link_km, attenuation_db_per_km))
    for i in (1, 2, 3, 4):
        for prefix, kind in (("A", SENDER), ("B", RECEIVER)):
            for j in (1, 2):
                uid = f"{prefix}{i}{j}"
                nodes.append(NodeSpec(uid, kind, attached_router=f"R{i}"))
                links.append(LinkSpec(uid, f"R{i}", user_link_km, attenuation_db_per_km))
    return NetworkTopology(nodes, links)


def build_star_topology(n_senders: int, n_receivers: int,
                        user_link_km: float = 5.0,
                        attenuation_db_per_km: float = 0.2) -> NetworkTopology:
    """Single router with n_senders senders and n_receivers receivers attached."""
    nodes = [NodeSpec("R1", ROUTER)]
    links = []
    for prefix, kind, count in (("A", SENDER, n_senders), ("B", RECEIVER, n_receivers)):
        for j in range(1, count + 1):
            uid = f"{prefix}{j}"
            nodes.append(NodeSpec(uid, kind, attached_router="R1"))
            links.append(LinkSpec(uid, "R1", user_link_km, attenuation_db_per_km))
    return NetworkTopology(nodes, links)


def default_report_pairs(topology: NetworkTopology) -> list[tuple[str, str]]:
    """One sender/receiver pair per distinct router separation, lowest name first."""
    best: dict[int, tuple[str, str]] = {}
    for s in topology.senders:
        for r in topology.receivers:
            sep = routers_on_path(topology, topology.equal_cost_paths(s, r)[0][0])
            if sep not in best:
                best[sep] = (s, r)
    return [best[k] for k in sorted(best)]


def topology_from_dict(data: dict) -> NetworkTopology:
    if not isinstance(data, dict) or "nodes" not in data or "links" not in data:
        raise TopologyError("topology document must contain 'nodes' and 'links'")
    nodes = []
    for nd in data["nodes"]:
        try:
            nodes.append(NodeSpec(str(nd["id"]), str(nd["kind"]).lower(),
                                  nd.get("attached_router")))
        except (TypeError, KeyError) as exc:
            raise TopologyError(f"bad node entry {nd!r}: {exc}") from None
    links = []
    for ld in data["links"]:
        try:
            links.append(LinkSpec(str(ld["a"]), str(ld["b"]),
                                  float(ld["length_km"]), float(ld["attenuation_db_per_km"])))
        except (TypeError, KeyError, ValueError) as exc:
            raise TopologyError(f"bad link entry {ld!r}: {exc}") from None
    return NetworkTopology(nodes, links)


def load_topology(path) -> NetworkTopology:
    with open(path) as fh:
        return topology_from_dict(json.load(fh))


def save_topology(topology: NetworkTopology, path) -> None:
    with open(path, "w") as fh:
        json.dump(topology.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
