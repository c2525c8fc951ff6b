"""Deterministic maximizer for the finite-key secret fraction.

Searches over the five free protocol parameters (basis bias, two signal
probabilities, two signal intensities) for a fixed channel.  Two stages: a
feasibility-filtered coarse lattice scan, then a derivative-free simplex
refinement started from the best lattice point.  Both stages are fully
deterministic, so results reproduce bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .keyrate import (
    ChannelInput,
    KeyRateBreakdown,
    ProtocolParams,
    SecurityParams,
    key_length,
)

__all__ = [
    "DEFAULT_BOUNDS",
    "OptSettings",
    "OptResult",
    "NoFeasiblePointError",
    "CostGuardError",
    "lattice_candidates",
    "optimize",
    "brute_grid",
]

# ordering constraints are enforced with this strict margin on intensities
ORDERING_MARGIN = 1e-4

# vacuum-state probability is kept at or above this floor
MIN_P_VACUUM = 0.01

_PLATEAU_LIMIT = 20
_BRUTE_MAX_POINTS = 12

# closed search intervals, ordered (q_x, p_mu1, p_mu2, mu1, mu2)
DEFAULT_BOUNDS = (
    (0.01, 0.99),
    (0.01, 0.97),
    (0.01, 0.97),
    (0.10, 1.00),
    (0.005, 0.50),
)

_PARAM_NAMES = ("q_x", "p_mu1", "p_mu2", "mu1", "mu2")


class NoFeasiblePointError(ValueError):
    """Search intervals admit no parameter set satisfying the constraints."""


class CostGuardError(ValueError):
    """Exhaustive grid request exceeds the evaluation budget."""


@dataclass(frozen=True)
class OptSettings:
    """Search configuration.

    grid_points_per_axis: coarse lattice resolution (1 means axis midpoints).
    refine_max_iters: simplex iteration cap; 0 skips refinement entirely.
    refine_tolerance: absolute objective tolerance for simplex termination.
    bounds: closed intervals per parameter, ordered (q_x, p_mu1, p_mu2,
        mu1, mu2).
    seed: recorded for reproducibility bookkeeping; the search itself draws
        no random numbers.
    """

    grid_points_per_axis: int = 7
    refine_max_iters: int = 600
    refine_tolerance: float = 1e-12
    bounds: tuple[tuple[float, float], ...] = DEFAULT_BOUNDS
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grid_points_per_axis < 1:
            raise ValueError("grid_points_per_axis must be at least 1")
        if self.refine_max_iters < 0:
            raise ValueError("refine_max_iters must be non-negative")
        if not self.refine_tolerance > 0.0:
            raise ValueError("refine_tolerance must be positive")
        if len(self.bounds) != 5:
            raise ValueError("bounds must give five (lo, hi) intervals")
        for name, (lo, hi) in zip(_PARAM_NAMES, self.bounds):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bounds for {name} must satisfy lo < hi")
        q_lo, q_hi = self.bounds[0]
        if q_lo < 0.01 or q_hi > 0.99:
            raise ValueError("q_x bounds must lie inside [0.01, 0.99]")
        for name, (lo, hi) in zip(_PARAM_NAMES[1:3], self.bounds[1:3]):
            if lo < 0.01 or hi > 0.97:
                raise ValueError(f"{name} bounds must lie inside [0.01, 0.97]")
        for name, (lo, hi) in zip(_PARAM_NAMES[3:], self.bounds[3:]):
            if lo <= 0.0 or hi > 1.0:
                raise ValueError(f"{name} bounds must lie inside (0, 1]")


@dataclass(frozen=True)
class OptResult:
    """Best point found, its full breakdown, and search diagnostics.

    zero_key is set when every evaluated point produced zero key length.
    """

    best: ProtocolParams
    breakdown: KeyRateBreakdown
    evaluations: int
    converged: bool
    zero_key: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _mu2_interval(bounds, mu3: float) -> tuple[float, float]:
    lo = max(bounds[4][0], mu3 + ORDERING_MARGIN)
    hi = min(bounds[4][1], 1.0 - mu3 - ORDERING_MARGIN)
    return lo, hi


def _check_bounds_feasible(bounds, mu3: float) -> None:
    m2_lo, m2_hi = _mu2_interval(bounds, mu3)
    if not m2_lo < m2_hi:
        raise NoFeasiblePointError(
            "mu2 interval collapses under the ordering constraints"
        )
    if bounds[3][1] < m2_lo + mu3 + ORDERING_MARGIN:
        raise NoFeasiblePointError(
            "mu1 upper bound cannot exceed any admissible mu2"
        )
    if bounds[1][0] + bounds[2][0] > 1.0 - MIN_P_VACUUM:
        raise NoFeasiblePointError("probability lower bounds leave no vacuum mass")


def _project(x, bounds, mu3: float) -> tuple[float, float, float, float, float]:
    """Deterministically map an arbitrary proposal into the feasible set."""
    q = float(np.clip(x[0], *bounds[0]))
    p1 = float(np.clip(x[1], *bounds[1]))
    p2_hi = min(bounds[2][1], 1.0 - MIN_P_VACUUM - p1)
    p2 = float(np.clip(x[2], bounds[2][0], p2_hi))
    m2_lo, m2_hi = _mu2_interval(bounds, mu3)
    m2 = float(np.clip(x[4], m2_lo, m2_hi))
    m1 = float(np.clip(x[3], max(bounds[3][0], m2 + mu3 + ORDERING_MARGIN), bounds[3][1]))
    return q, p1, p2, m1, m2


def _is_feasible(q, p1, p2, m1, m2, bounds, mu3: float) -> bool:
    if p1 + p2 > 1.0 - MIN_P_VACUUM:
        return False
    if m2 < mu3 + ORDERING_MARGIN or m2 > 1.0 - mu3 - ORDERING_MARGIN:
        return False
    if m1 < m2 + mu3 + ORDERING_MARGIN or m1 > bounds[3][1]:
        return False
    return True


def _axis_points(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [0.5 * (lo + hi)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def lattice_candidates(
    security: SecurityParams, settings: OptSettings
) -> list[tuple[float, float, float, float, float]]:
    """Feasible coarse-lattice points in deterministic axis-product order.

    A single-point axis evaluates at the interval midpoint.  If the product
    lattice happens to miss the feasible set entirely, the projected midpoint
    vector is returned as the lone candidate so coarse grids still work.
    """
    _check_bounds_feasible(settings.bounds, security.mu3)
    axes = [
        _axis_points(lo, hi, settings.grid_points_per_axis)
        for lo, hi in settings.bounds
    ]
    combos = [
        c
        for c in itertools.product(*axes)
        if _is_feasible(*c, settings.bounds, security.mu3)
    ]
    if not combos:
        mid = [0.5 * (lo + hi) for lo, hi in settings.bounds]
        combos = [_project(mid, settings.bounds, security.mu3)]
    return combos


def _continuous_fraction(breakdown: KeyRateBreakdown, channel: ChannelInput) -> float:
    """Pre-rounding key length per sent pulse; the quantity being maximized."""
    if breakdown.ell_pre_floor is None:
        return 0.0
    return max(0.0, breakdown.ell_pre_floor) / channel.n_sent


class _Plateau(Exception):
    pass


def optimize(
    channel: ChannelInput,
    security: SecurityParams | None = None,
    settings: OptSettings | None = None,
) -> OptResult:
    """Maximize the secret fraction over the five free protocol parameters.

    Stage one scans the feasible coarse lattice; stage two refines from the
    best lattice point with a bounded simplex search whose proposals are
    projected back into the feasible set before evaluation.  Ties are broken
    by lattice order, so equal settings always give identical results.
    """
    security = security if security is not None else SecurityParams()
    settings = settings if settings is not None else OptSettings()
    combos = lattice_candidates(security, settings)

    evaluations = 0
    best_val = math.inf
    best_x: tuple[float, float, float, float, float] | None = None

    def evaluate(point) -> float:
        nonlocal evaluations, best_val, best_x
        evaluations += 1
        params = ProtocolParams(*point)
        value = -_continuous_fraction(key_length(channel, params, security), channel)
        if value < best_val:
            best_val = value
            best_x = point
        return value

    for combo in combos:
        evaluate(combo)

    if settings.refine_max_iters > 0:
        zero_streak = 0

        def objective(x) -> float:
            nonlocal zero_streak
            value = evaluate(_project(x, settings.bounds, security.mu3))
            if value >= 0.0 and best_val >= 0.0:
                zero_streak += 1
                if zero_streak >= _PLATEAU_LIMIT:
                    raise _Plateau
            else:
                zero_streak = 0
            return value

        try:
            minimize(
                objective,
                x0=np.asarray(best_x, dtype=float),
                method="Nelder-Mead",
                options={
                    "maxiter": settings.refine_max_iters,
                    "fatol": settings.refine_tolerance,
                    "xatol": 1e-8,
                    "adaptive": True,
                },
            )
        except _Plateau:
            pass

    best_params = ProtocolParams(*best_x)
    breakdown = key_length(channel, best_params, security)
    return OptResult(
        best=best_params,
        breakdown=breakdown,
        evaluations=evaluations,
        converged=True,
        zero_key=breakdown.ell == 0,
    )


def brute_grid(
    channel: ChannelInput,
    security: SecurityParams | None = None,
    points_per_axis: int = 9,
) -> OptResult:
    """Exhaustive feasibility-filtered lattice maximum (refinement oracle)."""
    if points_per_axis > _BRUTE_MAX_POINTS:
        raise CostGuardError(
            f"points_per_axis {points_per_axis} exceeds the cap of {_BRUTE_MAX_POINTS}"
        )
    security = security if security is not None else SecurityParams()
    settings = OptSettings(grid_points_per_axis=points_per_axis, refine_max_iters=0)
    combos = lattice_candidates(security, settings)

    best_val = math.inf
    best_x = combos[0]
    for combo in combos:
        params = ProtocolParams(*combo)
        value = -_continuous_fraction(key_length(channel, params, security), channel)
        if value < best_val:
            best_val = value
            best_x = combo

    best_params = ProtocolParams(*best_x)
    breakdown = key_length(channel, best_params, security)
    return OptResult(
        best=best_params,
        breakdown=breakdown,
        evaluations=len(combos),
        converged=True,
        zero_key=breakdown.ell == 0,
    )
