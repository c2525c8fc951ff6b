import random

import networkx as nx
import pytest
from scipy import stats

from pktqkd import topology as topo


def test_default_topology_shape():
    net = topo.build_default_topology()
    assert len(net.routers) == 4
    assert len(net.senders) == 8
    assert len(net.receivers) == 8
    # ring adjacency
    for a, b in [("R1", "R2"), ("R2", "R4"), ("R4", "R3"), ("R3", "R1")]:
        assert net.link(a, b).length_km == 20.0
    with pytest.raises(topo.TopologyError):
        net.link("R1", "R4")


@pytest.mark.parametrize(
    "src,dst,n_routers,length_km",
    [
        ("A31", "B32", 1, 10.0),   # same router
        ("A42", "B22", 2, 30.0),   # adjacent routers
        ("A22", "B31", 3, 50.0),   # opposite corners of the ring
    ],
)
def test_published_pair_separations(src, dst, n_routers, length_km):
    net = topo.build_default_topology()
    paths, cost = net.equal_cost_paths(src, dst)
    assert cost == length_km
    assert topo.routers_on_path(net, paths[0]) == n_routers
    assert topo.path_fiber_db(net, paths[0]) == pytest.approx(0.2 * length_km)


def test_opposite_corner_pair_has_two_equal_cost_paths():
    net = topo.build_default_topology()
    paths, _ = net.equal_cost_paths("A22", "B31")
    assert len(paths) == 2
    middles = {p[1:-1] for p in paths}
    assert middles == {("R2", "R1", "R3"), ("R2", "R4", "R3")}


def test_tie_break_is_uniform():
    net = topo.build_default_topology()
    rng = random.Random(987)
    counts = {}
    n = 10_000
    for _ in range(n):
        path = topo.least_cost_path(net, "A22", "B31", rng)
        counts[path] = counts.get(path, 0) + 1
    assert len(counts) == 2
    _, p_value = stats.chisquare(list(counts.values()))
    assert p_value > 0.01


def test_least_cost_matches_exhaustive_simple_paths():
    net = topo.build_default_topology()
    g = nx.Graph()
    for ln in net.links:
        g.add_edge(ln.a, ln.b, w=ln.length_km)
    rng = random.Random(5)
    for src in net.senders[:4]:
        for dst in net.receivers[:4]:
            _, cost = net.equal_cost_paths(src, dst)
            best = min(
                sum(g[u][v]["w"] for u, v in zip(p, p[1:]))
                for p in nx.all_simple_paths(g, src, dst)
            )
            assert cost == pytest.approx(best)
            path = topo.least_cost_path(net, src, dst, rng)
            assert sum(g[u][v]["w"] for u, v in zip(path, path[1:])) == pytest.approx(best)


def test_same_node_query_rejected():
    net = topo.build_default_topology()
    with pytest.raises(ValueError):
        topo.least_cost_path(net, "A11", "A11", random.Random(0))


def test_json_round_trip(tmp_path):
    net = topo.build_default_topology()
    path = tmp_path / "net.json"
    topo.save_topology(net, path)
    loaded = topo.load_topology(path)
    assert loaded == net
    assert loaded.to_dict() == net.to_dict()


def test_star_topology():
    net = topo.build_star_topology(3, 2)
    assert net.routers == ("R1",)
    assert len(net.senders) == 3 and len(net.receivers) == 2
    paths, _ = net.equal_cost_paths("A1", "B2")
    assert topo.routers_on_path(net, paths[0]) == 1


def test_default_report_pairs_cover_all_separations():
    net = topo.build_default_topology()
    pairs = topo.default_report_pairs(net)
    seps = [
        topo.routers_on_path(net, net.equal_cost_paths(s, d)[0][0])
        for s, d in pairs
    ]
    assert seps == [1, 2, 3]


def _nodes(*specs):
    return [topo.NodeSpec(*s) for s in specs]


def test_validation_duplicate_ids():
    with pytest.raises(topo.TopologyError):
        topo.NetworkTopology(
            _nodes(("R1", topo.ROUTER), ("R1", topo.ROUTER)), []
        )


def test_validation_unknown_link_endpoint():
    with pytest.raises(topo.TopologyError):
        topo.NetworkTopology(
            _nodes(("R1", topo.ROUTER)),
            [topo.LinkSpec("R1", "ghost", 1.0, 0.2)],
        )


def test_validation_parallel_links():
    with pytest.raises(topo.TopologyError):
        topo.NetworkTopology(
            _nodes(("R1", topo.ROUTER), ("R2", topo.ROUTER)),
            [topo.LinkSpec("R1", "R2", 1.0, 0.2), topo.LinkSpec("R2", "R1", 2.0, 0.2)],
        )


def test_validation_user_needs_single_link_to_attached_router():
    nodes = _nodes(
        ("R1", topo.ROUTER), ("R2", topo.ROUTER), ("A1", topo.SENDER, "R1")
    )
    with pytest.raises(topo.TopologyError):
        topo.NetworkTopology(
            nodes,
            [
                topo.LinkSpec("R1", "R2", 1.0, 0.2),
                topo.LinkSpec("A1", "R2", 1.0, 0.2),   # wrong router
            ],
        )


def test_validation_disconnected():
    nodes = _nodes(("R1", topo.ROUTER), ("R2", topo.ROUTER))
    with pytest.raises(topo.TopologyError):
        topo.NetworkTopology(nodes, [])


def test_link_spec_validation():
    with pytest.raises(topo.TopologyError):
        topo.LinkSpec("a", "a", 1.0, 0.2)
    with pytest.raises(topo.TopologyError):
        topo.LinkSpec("a", "b", -1.0, 0.2)
