import json
import random

import pytest

from pktqkd.keyrate import ChannelInput, SecurityParams, key_length
from pktqkd.optimizer import (
    CostGuardError,
    NoFeasiblePointError,
    OptSettings,
    brute_grid,
    lattice_candidates,
    optimize,
)

SEC = SecurityParams()
GOOD_CHANNEL = ChannelInput(n_routed=1e12, n_sent=1e12, eta_tot=1.0)


def test_optimize_dominates_exhaustive_grid_on_random_channels():
    rng = random.Random(77)
    for _ in range(10):
        n = 10 ** rng.uniform(8.5, 11.5)
        channel = ChannelInput(
            n_routed=n,
            n_sent=n / rng.uniform(0.4, 1.0),
            eta_tot=10 ** rng.uniform(-2.2, 0.0),
        )
        refined = optimize(channel, SEC)
        coarse = brute_grid(channel, SEC, 9)
        assert refined.breakdown.rate_per_sent >= coarse.breakdown.rate_per_sent


def test_perfect_channel_beats_nine_point_grid():
    refined = optimize(GOOD_CHANNEL, SEC)
    coarse = brute_grid(GOOD_CHANNEL, SEC, 9)
    assert refined.breakdown.ell >= coarse.breakdown.ell > 0
    assert not refined.zero_key


def test_determinism():
    channel = ChannelInput(3.75e10, 3.75e10, 0.2512)
    assert optimize(channel, SEC) == optimize(channel, SEC)


def test_breakdown_is_recomputed_at_best():
    channel = ChannelInput(3.75e10, 3.75e10, 0.2512)
    res = optimize(channel, SEC)
    assert res.breakdown == key_length(channel, res.best, SEC)


def test_best_point_respects_constraints():
    res = optimize(ChannelInput(1e10, 1e10, 0.05), SEC)
    p = res.best
    assert 0.01 <= p.q_x <= 0.99
    assert p.p_mu1 + p.p_mu2 <= 0.99 + 1e-12
    assert p.mu2 >= SEC.mu3 + 1e-4 - 1e-12
    assert p.mu1 >= p.mu2 + SEC.mu3 + 1e-4 - 1e-12


def test_optimized_rate_monotone_in_transmittance():
    rates = []
    for eta in (0.6, 0.3, 0.12, 0.05, 0.02):
        res = optimize(ChannelInput(2e10, 2e10, eta), SEC)
        rates.append(res.breakdown.rate_per_sent)
    assert rates == sorted(rates, reverse=True)
    assert rates[-1] > 0


def test_zero_key_everywhere_is_flagged_not_raised():
    res = optimize(ChannelInput(1e9, 1e9, 1e-8), SEC)
    assert res.zero_key
    assert res.breakdown.ell == 0
    assert res.converged


def test_three_point_lattice_matches_hand_count():
    combos = lattice_candidates(SEC, OptSettings(grid_points_per_axis=3))
    # axes: q {0.01, 0.5, 0.99}; p {0.01, 0.49, 0.97} twice;
    # mu1 {0.1, 0.55, 1.0}; mu2 {0.005, 0.2525, 0.5}.
    # p pairs with p1 + p2 <= 0.99: 9 - 3 = 6.
    # mu pairs with mu1 >= mu2 + mu3 + 1e-4: 3 + 3 + 1 = 7.
    assert len(combos) == 3 * 6 * 7
    mu3 = SEC.mu3
    for q, p1, p2, m1, m2 in combos:
        assert p1 + p2 <= 0.99 + 1e-12
        assert m1 >= m2 + mu3 + 1e-4 - 1e-12


def test_single_point_grid_uses_midpoints():
    combos = lattice_candidates(SEC, OptSettings(grid_points_per_axis=1))
    assert combos == [(0.5, 0.49, 0.49, 0.55, 0.2525)]
    res = brute_grid(GOOD_CHANNEL, SEC, points_per_axis=1)
    assert res.evaluations == 1
    assert res.best.q_x == 0.5


def test_brute_grid_cost_guard():
    with pytest.raises(CostGuardError):
        brute_grid(GOOD_CHANNEL, SEC, points_per_axis=13)


def test_no_feasible_point_on_degenerate_bounds():
    bad = OptSettings(bounds=(
        (0.01, 0.99), (0.01, 0.97), (0.01, 0.97), (0.002, 0.004), (0.005, 0.5),
    ))
    with pytest.raises(NoFeasiblePointError):
        optimize(GOOD_CHANNEL, SEC, bad)
    crowded = OptSettings(bounds=(
        (0.01, 0.99), (0.5, 0.6), (0.5, 0.6), (0.1, 1.0), (0.005, 0.5),
    ))
    with pytest.raises(NoFeasiblePointError):
        lattice_candidates(SEC, crowded)


def test_settings_validation():
    with pytest.raises(ValueError):
        OptSettings(grid_points_per_axis=0)
    with pytest.raises(ValueError):
        OptSettings(refine_tolerance=0.0)
    with pytest.raises(ValueError):
        OptSettings(bounds=((0.0, 0.99),) + OptSettings().bounds[1:])


def test_result_serializes_to_json():
    res = brute_grid(ChannelInput(1e10, 1e10, 0.1), SEC, points_per_axis=3)
    text = json.dumps(res.to_dict())
    data = json.loads(text)
    assert data["best"]["q_x"] == res.best.q_x
    assert data["breakdown"]["ell"] == res.breakdown.ell
