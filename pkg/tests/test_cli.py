import json

import pytest

from pktqkd.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, build_parser, main
from pktqkd.topology import build_star_topology

FAST_OPT = {"grid_points_per_axis": 2, "refine_max_iters": 40}


def write_config(path, **overrides):
    scenario = {
        "name": "clismoke",
        "topology": build_star_topology(2, 1).to_dict(),
        "frames_per_pair": 40,
        "mean_interarrival": 1.0e-3,
        "initial_frame_length": 2.0e-4,
        "opt": FAST_OPT,
    }
    scenario.update(overrides)
    path.write_text(json.dumps({"scenarios": [scenario]}))
    return path


def test_source_argument_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--config", "a.json", "--preset", "fig4"])


def test_config_run_writes_artifacts(tmp_path, capsys):
    config = write_config(tmp_path / "s.json")
    out = tmp_path / "out"
    code = main(["--config", str(config), "--out", str(out)])
    assert code == EXIT_OK
    assert (out / "clismoke.csv").exists()
    assert (out / "clismoke.manifest.json").exists()
    stdout = capsys.readouterr().out
    assert "clismoke: 1 rows, 0 failed cells" in stdout


def test_emit_csv_only(tmp_path):
    config = write_config(tmp_path / "s.json")
    out = tmp_path / "out"
    assert main(["--config", str(config), "--out", str(out),
                 "--emit", "csv"]) == EXIT_OK
    assert (out / "clismoke.csv").exists()
    assert not (out / "clismoke.manifest.json").exists()


def test_seed_override_changes_sampled_traffic(tmp_path):
    config = write_config(tmp_path / "s.json")
    outs = []
    for seed in ("1", "2"):
        out = tmp_path / f"out{seed}"
        assert main(["--config", str(config), "--out", str(out),
                     "--seed", seed, "--emit", "csv"]) == EXIT_OK
        outs.append((out / "clismoke.csv").read_bytes())
    assert outs[0] != outs[1]


def test_scale_reduces_frames(tmp_path):
    config = write_config(tmp_path / "s.json", frames_per_pair=100)
    out = tmp_path / "out"
    assert main(["--config", str(config), "--out", str(out),
                 "--scale", "0.1", "--emit", "json"]) == EXIT_OK
    manifest = json.loads((out / "clismoke.manifest.json").read_text())
    assert manifest["scenario"]["frames_per_pair"] == 10


def test_config_errors_exit_2(tmp_path):
    assert main(["--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad)]) == EXIT_CONFIG
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"scenarios": [{"name": "x"}]}))
    assert main(["--config", str(invalid)]) == EXIT_CONFIG
    config = write_config(tmp_path / "s.json")
    assert main(["--config", str(config), "--scale", "-1"]) == EXIT_CONFIG
    assert main(["--config", str(config), "--workers", "0"]) == EXIT_CONFIG


def test_runtime_protocol_error_exits_2(tmp_path):
    config = write_config(tmp_path / "s.json", protocol="storage_limited")
    assert main(["--config", str(config)]) == EXIT_CONFIG


def test_cell_failures_exit_3(tmp_path, capsys):
    bounds = [[0.01, 0.99], [0.01, 0.97], [0.01, 0.97], [0.002, 0.004],
              [0.005, 0.5]]
    config = write_config(tmp_path / "s.json", opt=dict(FAST_OPT, bounds=bounds))
    assert main(["--config", str(config)]) == EXIT_PARTIAL
    assert "NoFeasiblePointError" in capsys.readouterr().err
