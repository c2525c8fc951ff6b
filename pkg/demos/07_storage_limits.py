"""Storage time limits: discard en route or filter afterwards.

With a lossy delay line, unbounded storage hurts: frames that buffered too
long carry badly attenuated payloads.  A storage time limit (STL) caps the
damage either by discarding frames at the router that would exceed it, or
by keeping the transport unlimited and excluding long-stored frames in
post-processing.  This sweeps both flavors on one reduced scenario.
"""

from collections import defaultdict

from pktqkd.scenarios import ScenarioConfig, run_scenario
from pktqkd.topology import build_default_topology

US = 1e-6
STLS = (150, 250, 350, 500, None)

base = dict(
    topology=build_default_topology(),
    frames_per_pair=600,
    mean_interarrival=15000 * US,
    initial_frame_length=2000 * US,
    storage_attenuation_db_per_km=0.16,
    seed=5,
)

rate = defaultdict(dict)
kept = defaultdict(dict)
for protocol in ("storage_limited", "storage_post"):
    # the en-route flavor needs a finite cap; 1 s is unreachable in practice
    axis = tuple(
        (1.0 if protocol == "storage_limited" else None) if v is None
        else v * US for v in STLS)
    config = ScenarioConfig(
        name=f"demo_stl_{protocol}", protocol=protocol,
        sweep=(("stl", axis),),
        **base,
    )
    for r in run_scenario(config).rows:
        stl = (None if r.stl_s is None or r.stl_s >= 1.0
               else round(r.stl_s / US))
        rate[(r.routers_traversed, protocol)][stl] = r.rate_per_sent
        total = r.frames_delivered + r.frames_excluded_by_stl + r.frames_discarded
        kept[(r.routers_traversed, protocol)][stl] = (
            r.frames_delivered / total if total else 0.0)

hdr = "".join(f"{str(s):>10}" for s in STLS)
for protocol in ("storage_limited", "storage_post"):
    print(f"\n{protocol}: rate per sent pulse (frames kept), STL in us")
    print("  pair" + hdr)
    for n in (1, 2, 3):
        row = "".join(
            f"  {rate[(n, protocol)][s]:.1e}" for s in STLS)
        frac = "".join(
            f"    ({kept[(n, protocol)][s]:.2f})" for s in STLS)
        print(f"  {n}r  " + row)
        print("      " + frac)

print("\nan intermediate limit beats both extremes: too strict discards most "
      "frames,\nno limit at all admits payloads too attenuated to distill "
      "(zero rate at this\nstorage loss). The en-route flavor also beats the "
      "post filter: dropping\nover-limit frames at the router unloads the "
      "queues downstream, so the\nsurviving frames store less and keep more "
      "of their pulses.")
