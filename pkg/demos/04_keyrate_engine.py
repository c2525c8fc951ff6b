"""From channel numbers to a secure key length, then to optimized settings.

Evaluates the finite-key decoy-state calculation once with fixed protocol
settings, walks the breakdown, and then lets the optimizer pick the basis
bias, intensity probabilities, and intensities.
"""

from pktqkd.keyrate import ChannelInput, ProtocolParams, SecurityParams, key_length
from pktqkd.optimizer import brute_grid, optimize

channel = ChannelInput(n_routed=3.75e10, n_sent=3.75e10, eta_tot=0.2512)
params = ProtocolParams(q_x=0.75, p_mu1=0.65, p_mu2=0.25, mu1=0.45, mu2=0.10)
security = SecurityParams()

b = key_length(channel, params, security)
print(f"channel: N = {channel.n_routed:.3g} pulses at eta = {channel.eta_tot}")
print(f"\nfixed settings {params}:")
print(f"  key-basis detections  n_x = {b.n_x:.4g}   errors m_x = {b.m_x:.4g}"
      f"  (QBER {b.e_obs:.4f})")
print(f"  single-photon bounds  s_x1 = {b.s_x1:.4g}  vacuum s_x0 = {b.s_x0:.4g}")
print(f"  phase error estimate  phi_x = {b.phi_x:.5f}")
print(f"  secure key length     ell = {b.ell:,} bits "
      f"({b.rate_per_sent:.3e} per sent pulse)")

res = optimize(channel, security)
p = res.best
print(f"\noptimized over (q_x, p_mu1, p_mu2, mu1, mu2) "
      f"in {res.evaluations} evaluations:")
print(f"  best = ({p.q_x:.3f}, {p.p_mu1:.3f}, {p.p_mu2:.3f}, "
      f"{p.mu1:.3f}, {p.mu2:.3f})")
print(f"  ell = {res.breakdown.ell:,} bits, "
      f"{res.breakdown.ell / b.ell - 1:+.1%} over the fixed settings")

coarse = brute_grid(channel, security, points_per_axis=5)
print(f"\n5-point exhaustive grid for comparison: ell = "
      f"{coarse.breakdown.ell:,} bits in {coarse.evaluations} evaluations;")
print("the lattice-plus-refinement search dominates it at a fraction of "
      "the cost.")
