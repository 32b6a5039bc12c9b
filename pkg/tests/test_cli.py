import json
import math

import numpy as np
import pytest

from scrapfwm.cli import RunConfig, main, validate_config


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    body = [line.split(",") for line in lines[1:]]
    return header, body


def column(path, name):
    header, body = read_csv(path)
    i = header.index(name)
    return np.array([float(row[i]) for row in body])


def test_validate_empty_object_lists_required_fields():
    errors = validate_config("{}")
    assert isinstance(errors, list)
    text = "\n".join(errors)
    assert "command" in text
    assert "schema_version" in text


def test_validate_preset_typo_suggests_name():
    errors = validate_config(json.dumps(
        {"schema_version": 1, "command": "dynamics", "preset": "fig4_sold"}
    ))
    assert isinstance(errors, list)
    assert any("fig4_solid" in e for e in errors)


def test_validate_good_config_parses():
    cfg = validate_config(json.dumps(
        {"schema_version": 1, "command": "dynamics", "preset": "fig6_a_solid",
         "tol": 1e-6}
    ))
    assert isinstance(cfg, RunConfig)
    assert cfg.preset == "fig6_a_solid"
    assert cfg.tol == 1e-6


def test_validate_rejects_axis_on_dynamics_and_bad_axis_name():
    errors = validate_config(json.dumps(
        {"schema_version": 1, "command": "scan", "preset": "fig5_a",
         "axes": [{"name": "Q", "lo": 0.0, "hi": 1.0, "count": 3}]}
    ))
    assert isinstance(errors, list)
    assert any("unknown scan parameter" in e for e in errors)

    errors = validate_config(json.dumps(
        {"schema_version": 1, "command": "dynamics", "preset": "fig4_solid",
         "axes": [{"name": "S", "lo": 0.0, "hi": 1.0, "count": 3}]}
    ))
    assert isinstance(errors, list)
    assert any("only valid for 'scan'" in e for e in errors)


def test_validate_needs_exactly_one_of_preset_inline():
    base = {"schema_version": 1, "command": "dynamics"}
    assert isinstance(validate_config(json.dumps(base)), list)
    both = dict(base, preset="fig4_solid", inline={"R": 1.0})
    assert isinstance(validate_config(json.dumps(both)), list)


def test_cli_dynamics_preset(tmp_path):
    out = tmp_path / "run"
    code = main(["dynamics", "--preset", "fig4_solid", "--out", str(out)])
    assert code == 0
    final = column(out / "trajectory.csv", "abs_r_gn")[-1]
    assert final == pytest.approx(0.5, abs=0.02)
    manifest = json.loads((out / "manifest.json").read_text())
    assert "trajectory.csv" in manifest["files"]
    assert manifest["summary"]["final_abs_rgn"] == pytest.approx(final, rel=1e-12)


def test_cli_reruns_are_byte_identical(tmp_path):
    out = tmp_path / "run"
    argv = ["dynamics", "--preset", "fig3_solid", "--out", str(out)]
    assert main(argv) == 0
    first = (out / "trajectory.csv").read_bytes()
    first_manifest = (out / "manifest.json").read_bytes()
    assert main(argv) == 0
    assert (out / "trajectory.csv").read_bytes() == first
    assert (out / "manifest.json").read_bytes() == first_manifest


def test_cli_scan_rows_and_order(tmp_path):
    out = tmp_path / "scan"
    code = main(["scan", "--preset", "fig5_a", "--axis", "S:6.7:8.1:5",
                 "--out", str(out), "--tol", "1e-6"])
    assert code == 0
    header, body = read_csv(out / "scan.csv")
    assert header == ["S", "final_rn", "final_abs_rgn"]
    assert len(body) == 5
    s = column(out / "scan.csv", "S")
    assert np.allclose(s, np.linspace(6.7, 8.1, 5))


def test_cli_propagate_artifacts(tmp_path):
    out = tmp_path / "prop"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "schema_version": 1,
        "command": "propagate",
        "preset": "fig17a",
        "z_end": 50.0,
        "snapshots": [0.0, 50.0],
        "out_dir": str(out),
    }))
    assert main(["--config", str(cfg)]) == 0
    header, _ = read_csv(out / "metrics.csv")
    assert header == ["Z", "eps_pump", "eps_probe", "eps_generated",
                      "w_pump", "w_probe", "w_generated",
                      "pump_energy_ratio"]
    assert (out / "slice_Z0.csv").exists()
    assert (out / "slice_Z50.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["mode"] == "difference"
    assert [s["z"] for s in manifest["snapshots"]] == [0.0, 50.0]
    assert manifest["snapshots"][0]["eps_ph"]["probe"] == 0.0
    # Depth zero reproduces the entry probe exactly.
    g2 = column(out / "slice_Z0.csv", "g2_abs2")
    peak = (2.0 * math.pi * 1.6e-2) ** 2
    assert np.max(g2) == pytest.approx(peak, rel=1e-3)


def test_cli_unknown_preset_exits_2(tmp_path, capsys):
    code = main(["dynamics", "--preset", "nope", "--out", str(tmp_path)])
    assert code == 2
    assert "unknown preset" in capsys.readouterr().err


def test_cli_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    assert "fig4_solid" in out
    assert "fig17a" in out


def test_cli_inline_dynamics_with_grid(tmp_path):
    out = tmp_path / "inline"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "schema_version": 1,
        "command": "dynamics",
        "inline": {"R": 0.886, "delta": 0.0},
        "units": "angular",
    }))
    code = main(["--config", str(cfg), "--out", str(out),
                 "--grid=-6:6:301"])
    assert code == 0
    header, body = read_csv(out / "trajectory.csv")
    assert len(body) == 301
    finals = column(out / "trajectory.csv", "abs_r_gn")
    assert finals[-1] == pytest.approx(0.5, abs=0.02)
