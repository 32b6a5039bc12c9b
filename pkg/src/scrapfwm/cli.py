"""Command-line front end emitting CSV/JSON artifacts.

Runs are described by a JSON config (see ``CONFIG_SCHEMA``) or assembled from
flags; flags override config-file entries.  Every run writes its artifacts
into one output directory together with a ``manifest.json`` recording the
config hash, package versions and produced files, so re-running an identical
config rewrites byte-identical CSV bodies.

Artifact column orders are fixed:

    trajectory.csv  T, r_n, re_r_gn, im_r_gn, abs_r_gn, omega_st, r1_abs
    scan.csv        <axis names in config order...>, final_rn, final_abs_rgn
    metrics.csv     Z, eps_pump, eps_probe, eps_generated,
                    w_pump, w_probe, w_generated, pump_energy_ratio
    slice_Z<z>.csv  T, g1_abs2, g2_abs2, gmix_abs2, r_n, r_gn_abs
    oracle.csv      omega_tau, max_pop_err, max_coh_err, closure_drift,
                    adiabatic_status

Floats are written as %.17g with '.' decimal separator and bare newlines.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import difflib
import hashlib
import itertools
import json
import math
import sys
from dataclasses import dataclass, replace
from importlib import metadata as importlib_metadata
from pathlib import Path

import numpy as np
import scipy
from jsonschema import Draft202012Validator

from .dynamics import DEFAULT_GRID, TimeGrid, evolve
from .model import (
    ConfigurationError,
    DriveConfig,
    MixingMode,
    NumericalFailure,
    PulseSpec,
    UnitConvention,
)
from .multilevel import OracleConfig, compare_reduced_vs_full
from .propagation import propagate, set_mixing_mode
from .scenarios import entrance_fields, preset, preset_names

__all__ = ["CONFIG_SCHEMA", "RunConfig", "ScanAxis", "validate_config", "run",
           "main"]

COMMANDS = ("dynamics", "scan", "propagate", "oracle", "list-presets")

# Parameters a scan axis or inline drive may set, in reduced-drive units.
DRIVE_PARAMS = ("delta", "R", "S", "dtau", "beta", "stark_width")

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": 1},
        "command": {"enum": list(COMMANDS)},
        "preset": {"type": "string"},
        "inline": {
            "type": "object",
            "additionalProperties": {
                "type": ["number", "array"],
            },
        },
        "out_dir": {"type": "string"},
        "tol": {"type": "number", "exclusiveMinimum": 0.0, "maximum": 1e-3},
        "grid": {
            "type": "object",
            "required": ["t_start", "t_end", "n_samples"],
            "additionalProperties": False,
            "properties": {
                "t_start": {"type": "number"},
                "t_end": {"type": "number"},
                "n_samples": {"type": "integer", "minimum": 2},
            },
        },
        "axes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "lo", "hi", "count"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "lo": {"type": "number"},
                    "hi": {"type": "number"},
                    "count": {"type": "integer", "minimum": 1},
                },
            },
        },
        "snapshots": {
            "type": "array",
            "items": {"type": "number", "minimum": 0.0},
        },
        "mode": {"enum": ["difference", "sum"]},
        "units": {"enum": ["angular", "cyclic"]},
        "z_end": {"type": "number", "exclusiveMinimum": 0.0},
    },
}

_VALIDATOR = Draft202012Validator(CONFIG_SCHEMA)


@dataclass(frozen=True)
class ScanAxis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated run description."""

    command: str
    raw: dict
    preset: str | None = None
    inline: dict | None = None
    out_dir: str = "runs"
    tol: float = 1e-8
    grid: TimeGrid | None = None
    axes: tuple[ScanAxis, ...] = ()
    snapshots: tuple[float, ...] | None = None
    mode: str | None = None
    units: str | None = None
    z_end: float | None = None


def _semantic_errors(cfg: dict) -> list[str]:
    errors: list[str] = []
    command = cfg.get("command")
    has_preset = "preset" in cfg
    has_inline = "inline" in cfg

    if command in ("dynamics", "scan"):
        if has_preset == has_inline:
            errors.append(
                f"$: command {command!r} needs exactly one of 'preset' or "
                "'inline'"
            )
    elif command == "propagate":
        if not has_preset:
            errors.append("$: command 'propagate' requires 'preset'")
        if has_inline:
            errors.append("$.inline: not supported for 'propagate'")
    elif command in ("oracle", "list-presets"):
        if has_preset:
            errors.append(f"$.preset: not used by {command!r}")
        if has_inline and command == "list-presets":
            errors.append("$.inline: not used by 'list-presets'")

    if has_preset and isinstance(cfg.get("preset"), str):
        name = cfg["preset"]
        known = preset_names()
        if name not in known:
            hint = difflib.get_close_matches(name, known, n=1)
            suffix = f"; did you mean {hint[0]!r}?" if hint else ""
            errors.append(f"$.preset: unknown preset {name!r}{suffix}")

    if has_inline and isinstance(cfg.get("inline"), dict):
        allowed = set(DRIVE_PARAMS) if command in ("dynamics", "scan") \
            else {"omega_taus"} if command == "oracle" else set()
        for key in sorted(cfg["inline"]):
            if key not in allowed:
                errors.append(
                    f"$.inline.{key}: unknown parameter (allowed: "
                    f"{', '.join(sorted(allowed)) or 'none'})"
                )

    if "axes" in cfg and command != "scan":
        errors.append("$.axes: only valid for 'scan'")
    if command == "scan" and "axes" not in cfg:
        errors.append("$: command 'scan' requires 'axes'")
    for i, axis in enumerate(cfg.get("axes", []) or []):
        if not isinstance(axis, dict):
            continue
        name = axis.get("name")
        if isinstance(name, str) and name not in DRIVE_PARAMS:
            errors.append(
                f"$.axes[{i}].name: unknown scan parameter {name!r} "
                f"(known: {', '.join(DRIVE_PARAMS)})"
            )
        lo, hi = axis.get("lo"), axis.get("hi")
        if isinstance(lo, (int, float)) and isinstance(hi, (int, float)) \
                and lo > hi:
            errors.append(f"$.axes[{i}]: lo must not exceed hi")

    for key in ("snapshots", "mode", "z_end"):
        if key in cfg and command != "propagate":
            errors.append(f"$.{key}: only valid for 'propagate'")
    if "units" in cfg and not has_inline:
        errors.append(
            "$.units: only meaningful with 'inline' parameters; presets "
            "carry their own units"
        )
    grid = cfg.get("grid")
    if isinstance(grid, dict) and all(k in grid for k in ("t_start", "t_end")):
        if not grid["t_end"] > grid["t_start"]:
            errors.append("$.grid: t_end must exceed t_start")
    return errors


def validate_config(raw: str):
    """Parse JSON text into a RunConfig, or return the list of all errors."""
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        return [f"$: not valid JSON: {exc}"]
    if not isinstance(cfg, dict):
        return ["$: config must be a JSON object"]

    errors = []
    for err in sorted(_VALIDATOR.iter_errors(cfg), key=lambda e: e.json_path):
        errors.append(f"{err.json_path}: {err.message}")
    errors.extend(_semantic_errors(cfg))
    if errors:
        return errors

    grid = None
    if "grid" in cfg:
        grid = TimeGrid(cfg["grid"]["t_start"], cfg["grid"]["t_end"],
                        cfg["grid"]["n_samples"])
    axes = tuple(ScanAxis(a["name"], float(a["lo"]), float(a["hi"]),
                          int(a["count"])) for a in cfg.get("axes", []))
    snapshots = None
    if "snapshots" in cfg:
        snapshots = tuple(float(z) for z in cfg["snapshots"])
    return RunConfig(
        command=cfg["command"],
        raw=cfg,
        preset=cfg.get("preset"),
        inline=cfg.get("inline"),
        out_dir=cfg.get("out_dir", "runs"),
        tol=float(cfg.get("tol", 1e-8)),
        grid=grid,
        axes=axes,
        snapshots=snapshots,
        mode=cfg.get("mode"),
        units=cfg.get("units"),
        z_end=cfg.get("z_end"),
    )


def _inline_drive(inline: dict, units: str | None) -> DriveConfig:
    return DriveConfig(
        delta=float(inline.get("delta", 0.0)),
        pump=PulseSpec(amplitude=float(inline.get("R", 0.0))),
        stark=PulseSpec(amplitude=float(inline.get("S", 0.0)),
                        width_ratio=float(inline.get("stark_width", 1.6)),
                        delay=float(inline.get("dtau", 0.0))),
        beta=float(inline.get("beta", 0.0)),
        units=UnitConvention(units) if units else UnitConvention.ANGULAR,
    )


def _apply_param(drive: DriveConfig, name: str, value: float) -> DriveConfig:
    if name == "delta":
        return replace(drive, delta=value)
    if name == "beta":
        return replace(drive, beta=value)
    if name == "R":
        return replace(drive, pump=replace(drive.pump, amplitude=value))
    if name == "S":
        return replace(drive, stark=replace(drive.stark, amplitude=value))
    if name == "dtau":
        return replace(drive, stark=replace(drive.stark, delay=value))
    if name == "stark_width":
        return replace(drive, stark=replace(drive.stark, width_ratio=value))
    raise ConfigurationError(f"unknown drive parameter {name!r}")


def _base_drive_and_grid(cfg: RunConfig):
    if cfg.preset is not None:
        p = preset(cfg.preset)
        return p.drive, cfg.grid if cfg.grid is not None else p.grid
    drive = _inline_drive(cfg.inline or {}, cfg.units)
    return drive, cfg.grid if cfg.grid is not None else DEFAULT_GRID


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row) + "\n")


def _package_versions() -> dict:
    try:
        own = importlib_metadata.version("scrapfwm")
    except importlib_metadata.PackageNotFoundError:
        own = "unpackaged"
    return {"scrapfwm": own, "numpy": np.__version__, "scipy": scipy.__version__}


def _write_manifest(out: Path, cfg: RunConfig, files: list[str],
                    extra: dict) -> None:
    canon = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))
    manifest = {
        "config": cfg.raw,
        "config_hash": hashlib.sha256(canon.encode()).hexdigest(),
        "versions": _package_versions(),
        "files": sorted(files),
        **extra,
    }
    with open(out / "manifest.json", "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _run_dynamics(cfg: RunConfig, out: Path) -> tuple[list[str], dict]:
    drive, grid = _base_drive_and_grid(cfg)
    traj = evolve(drive, grid, tol=cfg.tol)
    t = grid.times
    rows = zip(t, traj.rn, traj.rgn.real, traj.rgn.imag, np.abs(traj.rgn),
               traj.omega_st, traj.r1_abs)
    _write_csv(out / "trajectory.csv",
               ["T", "r_n", "re_r_gn", "im_r_gn", "abs_r_gn", "omega_st",
                "r1_abs"],
               rows)
    summary = {
        "final_rn": float(traj.rn[-1]),
        "final_abs_rgn": float(np.abs(traj.rgn[-1])),
        "max_abs_rgn": float(np.max(np.abs(traj.rgn))),
    }
    return ["trajectory.csv"], {"summary": summary}


def _run_scan(cfg: RunConfig, out: Path) -> tuple[list[str], dict]:
    drive, grid = _base_drive_and_grid(cfg)
    names = [axis.name for axis in cfg.axes]
    rows = []
    for values in itertools.product(*(axis.values() for axis in cfg.axes)):
        d = drive
        for name, value in zip(names, values):
            d = _apply_param(d, name, float(value))
        traj = evolve(d, grid, tol=cfg.tol)
        rows.append((*values, float(traj.rn[-1]),
                     float(np.abs(traj.rgn[-1]))))
    _write_csv(out / "scan.csv", [*names, "final_rn", "final_abs_rgn"], rows)
    return ["scan.csv"], {"summary": {"points": len(rows)}}


def _slice_filename(z: float) -> str:
    return f"slice_Z{z:.0f}.csv"


def _run_propagate(cfg: RunConfig, out: Path) -> tuple[list[str], dict]:
    p = preset(cfg.preset)
    if p.medium is None or p.pump_field is None or p.stark_field is None:
        raise ConfigurationError(
            f"preset {p.name!r} has no propagation run; pick a conversion "
            "preset such as fig17a"
        )
    z_end = cfg.z_end if cfg.z_end is not None else p.z_end
    if z_end is None:
        raise ConfigurationError(
            f"preset {p.name!r} does not define a depth; pass z_end"
        )
    medium = p.medium
    if cfg.mode is not None:
        medium = set_mixing_mode(medium, MixingMode(cfg.mode))
    snapshots = cfg.snapshots if cfg.snapshots is not None \
        else p.snapshot_depths
    entry = entrance_fields(p, grid=cfg.grid)
    record = propagate(entry, p.stark_field, medium, z_end,
                       delta=p.drive.delta, snapshot_depths=snapshots)

    xi = record.xi_samples
    keep = np.unique(np.round(np.linspace(0, xi.size - 1,
                                          min(xi.size, 4001))).astype(int))
    rows = ((xi[i],
             record.eps_ph["pump"][i], record.eps_ph["probe"][i],
             record.eps_ph["generated"][i],
             record.w_ph_max["pump"][i], record.w_ph_max["probe"][i],
             record.w_ph_max["generated"][i],
             record.g1_energy_ratio[i]) for i in keep)
    _write_csv(out / "metrics.csv",
               ["Z", "eps_pump", "eps_probe", "eps_generated",
                "w_pump", "w_probe", "w_generated", "pump_energy_ratio"],
               rows)
    files = ["metrics.csv"]

    snap_records = []
    for snap in record.snapshots:
        name = _slice_filename(snap.z)
        t = snap.fields.grid
        _write_csv(out / name,
                   ["T", "g1_abs2", "g2_abs2", "gmix_abs2", "r_n",
                    "r_gn_abs"],
                   zip(t, np.abs(snap.fields.g1) ** 2,
                       np.abs(snap.fields.g2) ** 2,
                       np.abs(snap.fields.gmix) ** 2,
                       snap.rn, snap.rgn_abs))
        files.append(name)
        idx = int(np.argmin(np.abs(xi - snap.z)))
        m = record.metrics_at(idx)

        def clean(x):
            # Probe-free runs have undefined photon-scaled metrics; strict
            # JSON has no NaN, so those become null.
            return x if math.isfinite(x) else None

        snap_records.append({
            "z": snap.z,
            "file": name,
            "eps_ph": {k: clean(v) for k, v in m.eps_ph.items()},
            "w_ph_max": {k: clean(v) for k, v in m.w_ph_max.items()},
            "pump_energy_ratio": clean(m.g1_energy_ratio),
        })
    extra = {
        "mode": record.mode.value,
        "z_end": z_end,
        "snapshots": snap_records,
    }
    return files, extra


def _run_oracle(cfg: RunConfig, out: Path) -> tuple[list[str], dict]:
    omegas = [100.0, 200.0]
    if cfg.inline and "omega_taus" in cfg.inline:
        omegas = [float(w) for w in cfg.inline["omega_taus"]]
    rows = []
    for omega in omegas:
        rep = compare_reduced_vs_full(OracleConfig(omega=omega, tol=cfg.tol))
        rows.append((omega, rep["max_pop_err"], rep["max_coh_err"],
                     rep["closure_drift"], rep["adiabatic_status"]))
    _write_csv(out / "oracle.csv",
               ["omega_tau", "max_pop_err", "max_coh_err", "closure_drift",
                "adiabatic_status"],
               rows)
    summary = {"max_pop_err": {str(r[0]): float(r[1]) for r in rows}}
    return ["oracle.csv"], {"summary": summary}


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    if cfg.command == "list-presets":
        for name in preset_names():
            print(f"{name}: {preset(name).note}")
        return 0
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = {
        "dynamics": _run_dynamics,
        "scan": _run_scan,
        "propagate": _run_propagate,
        "oracle": _run_oracle,
    }[cfg.command]
    files, extra = runner(cfg, out)
    _write_manifest(out, cfg, files + ["manifest.json"], extra)
    return 0


def _parse_axis(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"axis must look like name:lo:hi:count, got {text!r}"
        )
    name, lo, hi, count = parts
    try:
        return {"name": name, "lo": float(lo), "hi": float(hi),
                "count": int(count)}
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad axis {text!r}: {exc}") from None


def _parse_grid(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must look like t_start:t_end:n_samples, got {text!r}"
        )
    try:
        return {"t_start": float(parts[0]), "t_end": float(parts[1]),
                "n_samples": int(parts[2])}
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None


def _parse_snapshots(text: str) -> list[float]:
    try:
        return [float(z) for z in text.split(",") if z.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"bad snapshot list {text!r}: {exc}"
        ) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrapfwm",
        description="Coherence-preparation and four-wave-mixing runs",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS,
                        help="what to run (may also come from --config)")
    parser.add_argument("--config", type=Path,
                        help="JSON run config; flags override its entries")
    parser.add_argument("--preset", help="named parameter set")
    parser.add_argument("--out", dest="out_dir", help="output directory")
    parser.add_argument("--tol", type=float, help="integrator tolerance")
    parser.add_argument("--grid", type=_parse_grid,
                        metavar="T0:T1:N", help="output time grid")
    parser.add_argument("--axis", type=_parse_axis, action="append",
                        metavar="NAME:LO:HI:N",
                        help="scan axis, repeatable")
    parser.add_argument("--snapshots", type=_parse_snapshots,
                        metavar="Z1,Z2,...", help="snapshot depths")
    parser.add_argument("--mode", choices=["difference", "sum"],
                        help="mixing mode override")
    parser.add_argument("--units", choices=["angular", "cyclic"],
                        help="units of inline drive parameters")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    cfg_dict: dict = {"schema_version": 1}
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
            return 2
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as exc:
            print(f"error: {args.config}: not valid JSON: {exc}",
                  file=sys.stderr)
            return 2
        if not isinstance(loaded, dict):
            print(f"error: {args.config}: config must be a JSON object",
                  file=sys.stderr)
            return 2
        cfg_dict.update(loaded)

    if args.command is not None:
        cfg_dict["command"] = args.command
    for key in ("preset", "out_dir", "tol", "grid", "snapshots", "mode",
                "units"):
        value = getattr(args, key)
        if value is not None:
            cfg_dict[key] = value
    if args.axis:
        cfg_dict["axes"] = args.axis

    result = validate_config(json.dumps(cfg_dict))
    if isinstance(result, list):
        for line in result:
            print(f"config error: {line}", file=sys.stderr)
        return 2

    try:
        return run(result)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
