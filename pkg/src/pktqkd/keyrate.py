"""Finite-size secret key length for decoy-state BB84 with three intensities.

The X basis produces the sifted key, the Z basis bounds the phase error.
Detection and error counts are expected values for a lossy channel with dark
counts and misalignment; vacuum and single-photon contributions are bounded
from the three-intensity decoy statistics with finite-size deviations, and the
phase error rate carries the usual random-sampling correction.

All count bounds are clamped into [0, parent count] before entering the key
length; the raw pre-clamp values stay visible on the breakdown so independent
recomputations can be compared term by term.  The deviation terms split the
secrecy failure budget over 21 contributions, hence the recurring 21s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

LOG2 = math.log(2.0)


class DegenerateIntensitiesError(ValueError):
    """Signal and decoy intensities too close: decoy denominators vanish."""


class ConstraintViolatedError(ValueError):
    """Decoy intensity ordering mu1 > mu2 + mu3, mu2 > mu3 >= 0 is broken."""


class InsufficientStatisticsError(RuntimeError):
    """Single-photon bounds collapsed to zero; no key can be distilled."""


class DomainError(ValueError):
    """Argument outside the deviation term's domain (b outside (0,1), etc.)."""


@dataclass(frozen=True)
class SecurityParams:
    """Fixed protocol/security constants; defaults are the reference settings."""
    f_ec: float = 1.16
    eps_cor: float = 1e-15
    eps_sec: float = 1e-10
    p_dc: float = 2e-7
    eta_bob: float = 0.15
    e_mis: float = 0.005
    mu3: float = 0.0002
    eta_bob_in_errors: bool = False   # apply Bob's efficiency inside error counts too

    def __post_init__(self):
        if not 0 < self.eps_cor < 1 or not 0 < self.eps_sec < 1:
            raise ValueError("failure probabilities must lie in (0, 1)")
        if self.f_ec < 1:
            raise ValueError("error-correction inefficiency must be >= 1")
        if not 0 <= self.p_dc < 0.5:
            raise ValueError("dark-count probability must lie in [0, 0.5)")
        if not 0 < self.eta_bob <= 1:
            raise ValueError("receiver efficiency must lie in (0, 1]")
        if not 0 <= self.e_mis < 0.5:
            raise ValueError("misalignment error must lie in [0, 0.5)")
        if self.mu3 < 0:
            raise ValueError("vacuum-decoy intensity must be >= 0")


@dataclass(frozen=True)
class ProtocolParams:
    """Free protocol parameters: basis bias and the two adjustable intensities."""
    q_x: float
    p_mu1: float
    p_mu2: float
    mu1: float
    mu2: float

    def __post_init__(self):
        if not 0 < self.q_x < 1:
            raise ValueError("q_x must lie in (0, 1)")
        if self.p_mu1 <= 0 or self.p_mu2 <= 0 or self.p_mu1 + self.p_mu2 >= 1:
            raise ValueError("intensity probabilities must be positive with p_mu3 > 0")
        if self.mu1 <= 0 or self.mu2 <= 0:
            raise ValueError("intensities must be > 0")

    @property
    def p_mu3(self) -> float:
        return 1.0 - self.p_mu1 - self.p_mu2


@dataclass(frozen=True)
class ChannelInput:
    """What the network hands the key-rate engine for one pair."""
    n_routed: float      # payload pulses delivered to Bob (N)
    n_sent: float        # payload pulses generated by Alice (N0)
    eta_tot: float       # average channel transmittance, Bob's optics excluded

    def __post_init__(self):
        if self.n_routed <= 0:
            raise ValueError("n_routed must be > 0")
        if self.n_sent < self.n_routed:
            raise ValueError("n_sent must be >= n_routed")
        if not 0 < self.eta_tot <= 1:
            raise ValueError("eta_tot must lie in (0, 1]")


def validate_intensities(protocol: ProtocolParams, security: SecurityParams) -> None:
    mu1, mu2, mu3 = protocol.mu1, protocol.mu2, security.mu3
    if mu2 == mu3 or mu1 == mu2:
        raise DegenerateIntensitiesError(f"degenerate intensities {mu1}, {mu2}, {mu3}")
    if mu2 < mu3 or mu1 <= mu2 + mu3:
        raise ConstraintViolatedError(
            f"need mu1 > mu2 + mu3 and mu2 > mu3 >= 0, got {mu1}, {mu2}, {mu3}")


def intensity_table(protocol: ProtocolParams, security: SecurityParams):
    return ((protocol.mu1, protocol.p_mu1),
            (protocol.mu2, protocol.p_mu2),
            (security.mu3, protocol.p_mu3))


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise DomainError(f"entropy argument outside [0, 1]: {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def tau(n: int, protocol: ProtocolParams, security: SecurityParams) -> float:
    """Probability that Alice emits an n-photon state, over the intensity mix."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    fact = math.factorial(n)
    return math.fsum(
        math.exp(-k) * k ** n * p / fact for k, p in intensity_table(protocol, security)
    )


def detection_count(basis: str, k: float, channel: ChannelInput,
                    protocol: ProtocolParams, security: SecurityParams) -> float:
    """Expected sifted detections for intensity k in the given basis."""
    q = _basis_weight(basis, protocol)
    p_k = _probability_of(k, protocol, security)
    eta = channel.eta_tot * security.eta_bob
    click = 1.0 - (1.0 - 2.0 * security.p_dc) * math.exp(-eta * k)
    return channel.n_routed * q * p_k * click


def error_count(basis: str, k: float, channel: ChannelInput,
                protocol: ProtocolParams, security: SecurityParams) -> float:
    """Expected sifted errors for intensity k: dark counts plus misalignment.

    The exponent uses the bare channel transmittance; set eta_bob_in_errors to
    fold the receiver efficiency in as well.
    """
    q = _basis_weight(basis, protocol)
    p_k = _probability_of(k, protocol, security)
    eta = channel.eta_tot * (security.eta_bob if security.eta_bob_in_errors else 1.0)
    err = security.p_dc + security.e_mis * (1.0 - math.exp(-eta * k))
    return channel.n_routed * q * p_k * err


def _basis_weight(basis: str, protocol: ProtocolParams) -> float:
    if basis == "x":
        return protocol.q_x ** 2
    if basis == "z":
        return (1.0 - protocol.q_x) ** 2
    raise ValueError(f"basis must be 'x' or 'z', got {basis!r}")


def _probability_of(k: float, protocol: ProtocolParams, security: SecurityParams) -> float:
    for kk, p in intensity_table(protocol, security):
        if kk == k:
            return p
    raise ValueError(f"{k} is not one of the protocol's intensities")


def finite_size_bound(count: float, total: float, k: float, p_k: float,
                      sign: int, security: SecurityParams) -> float:
    """Upper (+1) or lower (-1) deviation bound on a per-intensity count."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if p_k <= 0:
        raise ValueError("p_k must be > 0")
    if total < 0:
        raise ValueError("total must be >= 0")
    dev = math.sqrt(0.5 * total * math.log(21.0 / security.eps_sec))
    return math.exp(k) / p_k * (count + sign * dev)


def gamma_term(a: float, b: float, c: float, d: float) -> float:
    """Random-sampling correction for the phase error rate estimate."""
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    if not 0 < b < 1:
        raise DomainError("b must lie strictly in (0, 1)")
    if c <= 0 or d <= 0:
        raise DomainError("c and d must be > 0")
    front = (c + d) * (1.0 - b) * b / (c * d * LOG2)
    arg = (c + d) / (c * d * (1.0 - b) * b) * (21.0 / a) ** 2
    radicand = front * math.log2(arg)
    if radicand < 0:
        raise DomainError("negative radicand in deviation term")
    return math.sqrt(radicand)


def _clip(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def _deviation(total: float, security: SecurityParams) -> float:
    return math.sqrt(0.5 * total * math.log(21.0 / security.eps_sec))


def _s0_raw(n_by_k, n_total, protocol, security, tau0):
    # mu2 * n3_lower - mu3 * n2_upper, expanded into exactly-summed products:
    # the difference cancels to a small fraction of its terms, so nested
    # rounding would cost several digits of the result.
    (mu1, p1), (mu2, p2), (mu3, p3) = intensity_table(protocol, security)
    dev = _deviation(n_total, security)
    w3 = math.exp(mu3) / p3
    w2 = math.exp(mu2) / p2
    diff = math.fsum((mu2 * w3 * n_by_k[2], -(mu2 * w3 * dev),
                      -(mu3 * w2 * n_by_k[1]), -(mu3 * w2 * dev)))
    return tau0 * diff / (mu2 - mu3)


def s0_bound(basis: str, channel: ChannelInput, protocol: ProtocolParams,
             security: SecurityParams) -> float:
    """Lower bound on vacuum-event detections in a basis, clamped to [0, total]."""
    validate_intensities(protocol, security)
    table = intensity_table(protocol, security)
    n_by_k = [detection_count(basis, k, channel, protocol, security) for k, _ in table]
    n_total = math.fsum(n_by_k)
    tau0 = tau(0, protocol, security)
    return _clip(_s0_raw(n_by_k, n_total, protocol, security, tau0), 0.0, n_total)


def _s1_raw(n_by_k, n_total, s0, protocol, security, tau0, tau1):
    # Same exact-summation treatment; the denominator is kept in factored form
    # (mu2 - mu3) * (mu1 - mu2 - mu3), identical algebra with exact differences.
    (mu1, p1), (mu2, p2), (mu3, p3) = intensity_table(protocol, security)
    denom = (mu2 - mu3) * (mu1 - mu2 - mu3)
    if denom <= 0:
        raise ConstraintViolatedError("decoy denominator must be > 0")
    dev = _deviation(n_total, security)
    w1 = math.exp(mu1) / p1
    w2 = math.exp(mu2) / p2
    w3 = math.exp(mu3) / p3
    ratio = (mu2 - mu3) * (mu2 + mu3) / mu1 ** 2
    num = math.fsum((
        w2 * n_by_k[1], -(w2 * dev),
        -(w3 * n_by_k[2]), -(w3 * dev),
        -(ratio * w1 * n_by_k[0]), -(ratio * w1 * dev),
        ratio * s0 / tau0,
    ))
    return tau1 * mu1 * num / denom


def s1_bound(basis: str, channel: ChannelInput, protocol: ProtocolParams,
             security: SecurityParams, s0: Optional[float] = None) -> float:
    """Lower bound on single-photon detections in a basis, clamped to [0, total]."""
    validate_intensities(protocol, security)
    table = intensity_table(protocol, security)
    n_by_k = [detection_count(basis, k, channel, protocol, security) for k, _ in table]
    n_total = math.fsum(n_by_k)
    tau0 = tau(0, protocol, security)
    tau1 = tau(1, protocol, security)
    if s0 is None:
        s0 = _clip(_s0_raw(n_by_k, n_total, protocol, security, tau0), 0.0, n_total)
    return _clip(_s1_raw(n_by_k, n_total, s0, protocol, security, tau0, tau1),
                 0.0, n_total)


def _vz1_raw(m_by_k, m_total, protocol, security, tau1):
    (mu1, p1), (mu2, p2), (mu3, p3) = intensity_table(protocol, security)
    dev = _deviation(m_total, security)
    w2 = math.exp(mu2) / p2
    w3 = math.exp(mu3) / p3
    diff = math.fsum((w2 * m_by_k[1], w2 * dev, -(w3 * m_by_k[2]), w3 * dev))
    return tau1 * diff / (mu2 - mu3)


def vz1_bound(channel: ChannelInput, protocol: ProtocolParams,
              security: SecurityParams) -> float:
    """Upper bound on single-photon errors in the Z basis, clamped to [0, m_z]."""
    validate_intensities(protocol, security)
    table = intensity_table(protocol, security)
    m_by_k = [error_count("z", k, channel, protocol, security) for k, _ in table]
    m_total = math.fsum(m_by_k)
    tau1 = tau(1, protocol, security)
    return _clip(_vz1_raw(m_by_k, m_total, protocol, security, tau1), 0.0, m_total)


def phase_error(s_z1: float, s_x1: float, v_z1: float,
                security: SecurityParams) -> float:
    """Phase error rate bound for the X-basis single photons, capped at 1/2."""
    if s_z1 <= 0 or s_x1 <= 0:
        raise InsufficientStatisticsError("single-photon bounds are empty")
    b = v_z1 / s_z1
    g = gamma_term(security.eps_sec, b, s_z1, s_x1) if 0.0 < b < 1.0 else 0.0
    return _clip(b + g, 0.0, 0.5)


@dataclass(frozen=True)
class KeyRateBreakdown:
    """Every intermediate of one key-length evaluation, raw and clamped."""
    n_x_by_k: tuple
    n_z_by_k: tuple
    m_x_by_k: tuple
    m_z_by_k: tuple
    n_x: float
    n_z: float
    m_x: float
    m_z: float
    n_x_bounds: tuple      # ((lower, upper) per intensity), X-basis detections
    n_z_bounds: tuple
    m_z_bounds: tuple
    tau0: float
    tau1: float
    s_x0_raw: float
    s_x0: float
    s_z0_raw: float
    s_z0: float
    s_x1_raw: float
    s_x1: float
    s_z1_raw: float
    s_z1: float
    v_z1_raw: Optional[float]
    v_z1: Optional[float]
    gamma: Optional[float]
    phi_x_raw: Optional[float]
    phi_x: Optional[float]
    e_obs: float
    ell_pre_floor: Optional[float]
    ell: int
    rate_per_routed: float
    rate_per_sent: float
    reason: Optional[str] = None


def key_length(channel: ChannelInput, protocol: ProtocolParams,
               security: SecurityParams) -> KeyRateBreakdown:
    """Full pipeline: expected counts -> decoy bounds -> phase error -> length."""
    validate_intensities(protocol, security)
    table = intensity_table(protocol, security)

    n_x_by_k = tuple(detection_count("x", k, channel, protocol, security) for k, _ in table)
    n_z_by_k = tuple(detection_count("z", k, channel, protocol, security) for k, _ in table)
    m_x_by_k = tuple(error_count("x", k, channel, protocol, security) for k, _ in table)
    m_z_by_k = tuple(error_count("z", k, channel, protocol, security) for k, _ in table)
    n_x = math.fsum(n_x_by_k)
    n_z = math.fsum(n_z_by_k)
    m_x = math.fsum(m_x_by_k)
    m_z = math.fsum(m_z_by_k)

    n_x_bounds = tuple(
        (finite_size_bound(c, n_x, k, p, -1, security),
         finite_size_bound(c, n_x, k, p, +1, security))
        for c, (k, p) in zip(n_x_by_k, table))
    n_z_bounds = tuple(
        (finite_size_bound(c, n_z, k, p, -1, security),
         finite_size_bound(c, n_z, k, p, +1, security))
        for c, (k, p) in zip(n_z_by_k, table))
    m_z_bounds = tuple(
        (finite_size_bound(c, m_z, k, p, -1, security),
         finite_size_bound(c, m_z, k, p, +1, security))
        for c, (k, p) in zip(m_z_by_k, table))

    tau0 = tau(0, protocol, security)
    tau1 = tau(1, protocol, security)

    s_x0_raw = _s0_raw(n_x_by_k, n_x, protocol, security, tau0)
    s_x0 = _clip(s_x0_raw, 0.0, n_x)
    s_z0_raw = _s0_raw(n_z_by_k, n_z, protocol, security, tau0)
    s_z0 = _clip(s_z0_raw, 0.0, n_z)
    s_x1_raw = _s1_raw(n_x_by_k, n_x, s_x0, protocol, security, tau0, tau1)
    s_x1 = _clip(s_x1_raw, 0.0, n_x)
    s_z1_raw = _s1_raw(n_z_by_k, n_z, s_z0, protocol, security, tau0, tau1)
    s_z1 = _clip(s_z1_raw, 0.0, n_z)
    e_obs = m_x / n_x

    common = dict(
        n_x_by_k=n_x_by_k, n_z_by_k=n_z_by_k, m_x_by_k=m_x_by_k, m_z_by_k=m_z_by_k,
        n_x=n_x, n_z=n_z, m_x=m_x, m_z=m_z,
        n_x_bounds=n_x_bounds, n_z_bounds=n_z_bounds, m_z_bounds=m_z_bounds,
        tau0=tau0, tau1=tau1,
        s_x0_raw=s_x0_raw, s_x0=s_x0, s_z0_raw=s_z0_raw, s_z0=s_z0,
        s_x1_raw=s_x1_raw, s_x1=s_x1, s_z1_raw=s_z1_raw, s_z1=s_z1,
        e_obs=e_obs,
    )

    if s_z1 <= 0 or s_x1 <= 0:
        return KeyRateBreakdown(
            v_z1_raw=None, v_z1=None, gamma=None, phi_x_raw=None, phi_x=None,
            ell_pre_floor=None, ell=0, rate_per_routed=0.0, rate_per_sent=0.0,
            reason="insufficient_statistics", **common)

    v_z1_raw = _vz1_raw(m_z_by_k, m_z, protocol, security, tau1)
    v_z1 = _clip(v_z1_raw, 0.0, m_z)
    b = v_z1 / s_z1
    g = gamma_term(security.eps_sec, b, s_z1, s_x1) if 0.0 < b < 1.0 else 0.0
    phi_x_raw = b + g
    phi_x = _clip(phi_x_raw, 0.0, 0.5)

    ell_pre = math.fsum((
        s_x0, s_x1, -(s_x1 * binary_entropy(phi_x)),
        -(n_x * security.f_ec * binary_entropy(e_obs)),
        -(6.0 * math.log2(21.0 / security.eps_sec)),
        -math.log2(2.0 / security.eps_cor),
    ))
    ell = max(0, math.floor(ell_pre))
    return KeyRateBreakdown(
        v_z1_raw=v_z1_raw, v_z1=v_z1, gamma=g, phi_x_raw=phi_x_raw, phi_x=phi_x,
        ell_pre_floor=ell_pre, ell=ell,
        rate_per_routed=ell / channel.n_routed,
        rate_per_sent=ell / channel.n_sent,
        reason=None if ell > 0 else "zero_key", **common)
