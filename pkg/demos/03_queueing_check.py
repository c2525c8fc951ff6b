"""Queueing sanity: measured waits on a star against the M/D/1 formula.

Twelve senders share one router; frame service time is deterministic
because the storage protocol preserves frame length.  Sweeping the offered
load rho compares the measured mean queue wait with rho*s / (2*(1-rho)).
"""

from pktqkd import netsim
from pktqkd.topology import build_star_topology

N_SENDERS = 12
T_F = 100e-6
star = build_star_topology(N_SENDERS, 1)

print(f"{N_SENDERS} senders, frame {T_F*1e6:.0f} us, one router\n")
print("  rho    measured us   M/D/1 us    ratio")
for rho in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7):
    mean_gap = T_F * (N_SENDERS / rho - 1)
    cfg = netsim.SimConfig(
        protocol=netsim.STORAGE_UNLIMITED,
        frames_per_sender=5000,
        mean_interarrival=mean_gap,
        initial_frame_length=T_F,
        seed=3,
    )
    record = netsim.run(cfg, star)
    measured = record.mean_queue_wait("R1")
    predicted = rho * T_F / (2 * (1 - rho))
    print(f"  {rho:.1f}   {measured*1e6:10.2f}   {predicted*1e6:8.2f}   "
          f"{measured/predicted:6.3f}")

print("\nratios near 1 validate the event engine's arrival, queueing, and "
      "service logic.\nThey sit slightly below 1 because a sender cannot emit "
      "during its own frame,\nso the merged arrivals are a bit smoother than "
      "Poisson.")
