"""Tour of the network model: nodes, routing, and loss budgets.

Builds the default four-router mesh, lists the standard report pairs, and
shows how path choice feeds the fiber loss budget.  Finishes with a JSON
round trip, the same format the scenario runner accepts inline.
"""

import json
import tempfile

from pktqkd.topology import (
    build_default_topology,
    default_report_pairs,
    load_topology,
    path_fiber_db,
    path_length_km,
    routers_on_path,
    save_topology,
)

net = build_default_topology()
senders = [n.id for n in net.nodes if n.kind == "sender"]
receivers = [n.id for n in net.nodes if n.kind == "receiver"]
print(f"default mesh: {len(senders)} senders, {len(receivers)} receivers, "
      f"{sum(1 for n in net.nodes if n.kind == 'router')} routers")

print("\nstandard report pairs (one per router separation):")
for src, dst in default_report_pairs(net):
    paths, cost_km = net.equal_cost_paths(src, dst)
    path = paths[0]
    print(f"  {src} -> {dst}: {routers_on_path(net, path)} routers, "
          f"{cost_km:.0f} km fiber, "
          f"{path_fiber_db(net, path):.1f} dB fiber loss, "
          f"{len(paths)} equal-cost path(s)")

# ties are real in a mesh: the simulator picks uniformly per frame
src, dst = "A21", "B31"
paths, _ = net.equal_cost_paths(src, dst)
print(f"\n{src} -> {dst} has {len(paths)} shortest paths:")
for p in paths:
    print("  " + " -> ".join(p))

with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    save_topology(net, fh.name)
    clone = load_topology(fh.name)
print(f"\nJSON round trip preserves the network: "
      f"{json.dumps(clone.to_dict()) == json.dumps(net.to_dict())}")
