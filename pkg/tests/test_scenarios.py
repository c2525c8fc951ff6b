import json
from dataclasses import replace

import pytest

from pktqkd.optimizer import OptSettings
from pktqkd.scenarios import (
    PRESET_NAMES,
    ScenarioConfig,
    ScenarioConfigError,
    UnknownPresetError,
    preset,
    run_scenario,
    scenario_from_dict,
)
from pktqkd.topology import build_star_topology

# small search so end-to-end rows stay cheap
FAST_OPT = OptSettings(grid_points_per_axis=2, refine_max_iters=40)


def small_config(**overrides) -> ScenarioConfig:
    base = dict(
        name="unit",
        topology=build_star_topology(2, 1),
        frames_per_pair=120,
        mean_interarrival=1.0e-3,
        initial_frame_length=2.0e-4,
        opt=FAST_OPT,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def test_preset_names_and_unknown():
    assert PRESET_NAMES == ("fig4", "fig5", "fig6", "fig7", "fig8")
    with pytest.raises(UnknownPresetError):
        preset("fig9")
    with pytest.raises(ScenarioConfigError):
        preset("fig4", scale=0.0)
    with pytest.raises(ScenarioConfigError):
        preset("fig4", scale=1e-7)


def test_preset_fig4_grid():
    variants = preset("fig4")
    assert [v.name for v in variants] == ["fig4_frame_length", "fig4_guard_time"]
    lengths, guards = variants
    assert lengths.frames_per_pair == 18750
    assert len(lengths.cells()) == 5 * 3
    axis = dict(lengths.sweep)
    assert axis["initial_frame_length"] == pytest.approx((2e-4, 5e-4, 1e-3, 2e-3, 4e-3))
    assert axis["mean_interarrival"] == pytest.approx((3e-3, 1e-2, 3e-2))
    assert dict(guards.sweep)["initial_guard_time"] == pytest.approx(
        (0.0, 2e-4, 8e-4, 1.6e-3))
    assert preset("fig4", scale=0.2)[0].frames_per_pair == 3750


def test_preset_fig5_overlay_axes():
    variants = preset("fig5")
    assert len(variants) == 4
    for v in variants:
        axes = dict(v.sweep)
        assert axes["protocol"] == ("no_storage", "storage_unlimited")
        assert axes["storage_attenuation_db_per_km"][0] == 0.001
        assert 0.16 in axes["storage_attenuation_db_per_km"]
        assert len(v.cells()) == 2 * 8
        assert v.frames_per_pair == 37500


def test_preset_fig6_fig7_fig8_shapes():
    for v in preset("fig6"):
        (field, values), = v.sweep
        assert field == "stl"
        assert values[-1] is None
        assert v.protocol == "storage_post"
        assert v.storage_attenuation_db_per_km == 0.16
    fig7 = preset("fig7")
    assert [v.name for v in fig7] == ["fig7_long_g0", "fig7_short_g0"]
    assert all(v.emit_storage_histograms and not v.sweep for v in fig7)
    fig8 = {v.name: v for v in preset("fig8")}
    assert fig8["fig8_rate_sweep_f2000"].stl == pytest.approx(320e-6)
    assert fig8["fig8_rate_sweep_f10000"].stl == pytest.approx(550e-6)
    assert any(v == pytest.approx(320e-6)
               for v in dict(fig8["fig8_stl_sweep_f2000"].sweep)["stl"])
    for v in fig8.values():
        assert dict(v.sweep)["protocol"] == ("storage_limited", "storage_post")


def test_config_validation():
    with pytest.raises(ScenarioConfigError):
        small_config(name="has space")
    with pytest.raises(ScenarioConfigError):
        small_config(frames_per_pair=0)
    with pytest.raises(ScenarioConfigError):
        small_config(protocol="teleport")
    with pytest.raises(ScenarioConfigError):
        small_config(averaging="geometric")
    with pytest.raises(ScenarioConfigError):
        small_config(sweep=(("frame_length", (1e-4,)),))
    with pytest.raises(ScenarioConfigError):
        small_config(sweep=(("stl", (1e-4,)), ("stl", (2e-4,))))
    with pytest.raises(ScenarioConfigError):
        small_config(sweep=(("stl", ()),))
    with pytest.raises(ScenarioConfigError):
        small_config(sweep=(("protocol", ("no_storage", "teleport")),))
    with pytest.raises(ScenarioConfigError):
        small_config(sweep=(("stl", (-1e-4,)),))
    with pytest.raises(ScenarioConfigError):
        small_config(pairs=(("A1", "B9"),))


def test_storage_limited_needs_stl_at_run_time():
    config = small_config(protocol="storage_limited")
    with pytest.raises(ScenarioConfigError):
        run_scenario(config)
    # a sweep axis can supply it instead
    swept = small_config(protocol="storage_limited",
                         sweep=(("stl", (3e-4,)),), frames_per_pair=10)
    assert len(run_scenario(swept).rows) == 1


def test_cells_row_major_order():
    config = small_config(
        sweep=(("protocol", ("no_storage", "storage_unlimited")),
               ("initial_guard_time", (0.0, 5e-5, 1e-4))),
    )
    cells = config.cells()
    assert len(cells) == 6
    assert cells[0] == {"protocol": "no_storage", "initial_guard_time": 0.0}
    assert cells[1] == {"protocol": "no_storage", "initial_guard_time": 5e-5}
    assert cells[3]["protocol"] == "storage_unlimited"


def test_dict_round_trip():
    config = small_config(
        sweep=(("stl", (1e-4, None)),), protocol="storage_post",
        pairs=(("A2", "B1"),), stl=None, seed=9,
    )
    clone = scenario_from_dict(json.loads(json.dumps(config.to_dict())))
    assert clone.to_dict() == config.to_dict()
    assert clone.report_pairs() == (("A2", "B1"),)


def test_from_dict_builtin_and_errors():
    data = {
        "name": "d", "topology": {"builtin": "default"}, "frames_per_pair": 5,
        "mean_interarrival": 1e-3, "initial_frame_length": 2e-4,
    }
    config = scenario_from_dict(data)
    assert len(config.report_pairs()) == 3
    with pytest.raises(ScenarioConfigError):
        scenario_from_dict(dict(data, topology={"builtin": "ring"}))
    with pytest.raises(ScenarioConfigError):
        scenario_from_dict(dict(data, nonsense=1))
    with pytest.raises(ScenarioConfigError):
        scenario_from_dict("not a dict")


def test_run_scenario_row_grid():
    config = small_config(
        sweep=(("protocol", ("no_storage", "storage_unlimited")),
               ("storage_attenuation_db_per_km", (0.01, 0.16))),
    )
    result = run_scenario(config)
    assert len(result.rows) == 4 * len(config.report_pairs())
    assert not result.failures
    for row in result.rows:
        assert row.frames_generated > 0
        assert 0 < row.frames_delivered <= row.frames_generated
        assert row.reason in ("ok", "zero_key", "insufficient_statistics")
        assert row.rate_per_sent >= 0.0
    # alpha_s only matters after storage, so no_storage rows coincide
    ns = [r for r in result.rows if r.protocol == "no_storage"]
    assert ns[0].avg_eta_tot == ns[1].avg_eta_tot


def test_post_processing_cells_share_one_simulation():
    config = small_config(
        protocol="storage_unlimited",
        sweep=(("storage_attenuation_db_per_km", (0.001, 0.05, 0.3)),),
    )
    result = run_scenario(config)
    assert len(result.cell_seeds) == 1
    assert len(result.rows) == 3
    etas = [r.avg_eta_tot for r in result.rows]
    assert etas == sorted(etas, reverse=True)


def test_storage_post_reuses_unlimited_run_and_filters():
    config = small_config(
        protocol="storage_post", frames_per_pair=400,
        mean_interarrival=3e-4,
        sweep=(("stl", (None, 2e-4)),),
    )
    result = run_scenario(config)
    assert len(result.cell_seeds) == 1
    unfiltered, filtered = result.rows
    assert filtered.frames_excluded_by_stl >= 0
    assert (filtered.frames_delivered + filtered.frames_excluded_by_stl
            == unfiltered.frames_delivered)


def test_zero_delivery_rows_report_reason():
    # frames shorter than the header time are always fully consumed
    config = small_config(initial_frame_length=5e-5, frames_per_pair=20)
    result = run_scenario(config)
    row, = result.rows
    assert row.frames_delivered == 0
    assert row.reason == "no_frames_delivered"
    assert row.rate_per_sent == 0.0 and row.ell == 0


def test_subpulse_payloads_report_no_payload_reason():
    # payload residue under one pulse period floors to zero routed pulses
    config = small_config(
        initial_frame_length=1e-4 + 4e-10,
        mean_interarrival=1.0,
        frames_per_pair=20,
    )
    result = run_scenario(config)
    row, = result.rows
    assert not result.failures
    assert row.frames_delivered > 0
    assert row.n_routed == 0
    assert row.reason == "no_payload_pulses"
    assert row.rate_per_sent == 0.0 and row.ell == 0


def test_cell_faults_are_isolated_not_fatal():
    bad_bounds = OptSettings(bounds=(
        (0.01, 0.99), (0.01, 0.97), (0.01, 0.97), (0.002, 0.004), (0.005, 0.5),
    ))
    result = run_scenario(small_config(opt=bad_bounds, frames_per_pair=10))
    assert result.rows == []
    assert len(result.failures) == 1
    assert "NoFeasiblePointError" in result.failures[0]["error"]


def test_emitted_artifacts_are_reproducible(tmp_path):
    config = small_config(
        frames_per_pair=60, output=str(tmp_path / "a"),
        sweep=(("initial_guard_time", (0.0, 5e-5)),),
    )
    first = run_scenario(config)
    csv_a = (tmp_path / "a" / "unit.csv").read_bytes()
    manifest_a = (tmp_path / "a" / "unit.manifest.json").read_bytes()
    run_scenario(config)
    assert (tmp_path / "a" / "unit.csv").read_bytes() == csv_a
    assert (tmp_path / "a" / "unit.manifest.json").read_bytes() == manifest_a

    manifest = json.loads(manifest_a)
    assert manifest["row_count"] == len(first.rows)
    reloaded = replace(scenario_from_dict(manifest["scenario"]),
                       output=str(tmp_path / "b"))
    rerun = run_scenario(reloaded)
    assert (tmp_path / "b" / "unit.csv").read_bytes() == csv_a
    assert [r.to_dict() for r in rerun.rows] == [r.to_dict() for r in first.rows]


def test_histogram_emission(tmp_path):
    config = small_config(
        protocol="storage_unlimited", frames_per_pair=200,
        mean_interarrival=3e-4, emit_storage_histograms=True,
        output=str(tmp_path),
    )
    run_scenario(config)
    hist_files = sorted(tmp_path.glob("unit_hist_c0_*.csv"))
    assert hist_files
    header = hist_files[0].read_text().splitlines()[0]
    assert "fraction" in header
