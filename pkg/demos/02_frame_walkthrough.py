"""What one router delay does to a frame, then a full traced simulation.

First applies a single 350 us delay to a 2000 us frame under each routing
protocol to show the arithmetic; then runs a small simulation and follows
one delivered three-router frame hop by hop.
"""

from pktqkd import netsim
from pktqkd.topology import build_default_topology

US = 1e-6

t_f, t_g, delay = 2000 * US, 200 * US, 350 * US
print(f"frame {t_f/US:.0f} us with {t_g/US:.0f} us guard meets a "
      f"{delay/US:.0f} us router delay:\n")
for protocol in (netsim.NO_STORAGE, netsim.STORAGE_UNLIMITED,
                 netsim.storage_limited(100 * US)):
    new_f, new_g, stored, status, reason = netsim.delay_effects(
        t_f, t_g, 0.0, delay, protocol)
    label = protocol.kind + (f"(stl={protocol.stl/US:.0f}us)"
                             if protocol.stl else "")
    out = (f"  {label:<28} -> t_f {new_f/US:7.1f} us, t_g {new_g/US:5.1f} us, "
           f"stored {stored/US:5.1f} us, {status}")
    print(out + (f" ({reason})" if reason else ""))

print("\nno_storage sacrifices pulses; storage keeps them but buffers the "
      "excess\ndelay in fiber, and a limit discards frames that buffer too "
      "long.\n")

net = build_default_topology()
cfg = netsim.SimConfig(
    protocol=netsim.STORAGE_UNLIMITED,
    frames_per_sender=400,
    mean_interarrival=3000 * US,
    initial_frame_length=2000 * US,
    initial_guard_time=200 * US,
    seed=11,
)
record = netsim.run(cfg, net)

frame = next(f for f in record.delivered if f.n_routers == 3)
print(f"frame {frame.src} -> {frame.dst} crossed {frame.n_routers} routers "
      f"over {frame.length_km:.0f} km ({frame.fiber_db:.0f} dB fiber):")
for i in range(frame.n_routers):
    print(f"  hop {i + 1}: queued {frame.per_hop_queue[i]/US:7.1f} us, "
          f"stored {frame.per_hop_storage[i]/US:7.1f} us")
print(f"  delivered with t_f {frame.t_f/US:.1f} us, t_g {frame.t_g/US:.1f} us, "
      f"total storage {frame.cum_storage/US:.1f} us")

total = sum(record.generated.values())
print(f"\nrun totals: {total} generated, {len(record.delivered)} delivered, "
      f"discards by reason: { {k[2]: v for k, v in record.discards.items()} or 'none'}")
