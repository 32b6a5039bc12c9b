"""Named drive presets and the mercury-vapour calibration.

The preset registry collects every parameter set exercised in the study: the
reduced-model sweeps (rectangular drives, Stark-compensated persistent
coherence, rapid adiabatic passage, self-shift control) and the mercury cell
runs that feed the propagation solver.  Reduced-model presets quote rates in
angular units directly; mercury presets quote one-photon peak amplitudes in
cyclic units and are converted when the registry is built, consistent with the
detunings stored in MediumSpec.

``absorption_scale`` converts between the scaled depth Z and centimeters of
vapour.  The frequency-integrated absorption rate of the generated transition
reduces to alpha_minus = 0.67 * g_g * f * N / 4 in cm^-1 s^-1 with the ground
state non-degenerate (g_g = 1), so one unit of Z corresponds to
1 / (alpha_minus * tau_1 / (2 pi)) centimeters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .dynamics import DEFAULT_GRID, TimeGrid
from .model import (
    ConfigurationError,
    DriveConfig,
    MediumSpec,
    MixingMode,
    PulseShape,
    PulseSpec,
    UnitConvention,
    drive_from_medium,
)
from .propagation import DEFAULT_PROPAGATION_GRID, FieldSlice, slice_from_pulses

__all__ = [
    "HgCalibration",
    "AbsorptionScale",
    "absorption_scale",
    "Preset",
    "preset",
    "preset_names",
    "entrance_fields",
    "DEFAULT_SNAPSHOTS",
]

TWO_PI = 2.0 * math.pi

# Canonical snapshot depths for the full-length mercury runs.
DEFAULT_SNAPSHOTS = (0.0, 5.0e5, 1.0e6, 1.5e6, 2.0e6, 2.5e6, 3.0e6)

_CLOSURE_TOL = 5e-3


@dataclass(frozen=True)
class HgCalibration:
    """Physical constants of the mercury conversion scheme.

    Wavelengths are in nanometers, the pump duration in seconds.  The
    oscillator strength belongs to the resonance transition that sets the
    absorption scale of the generated field.  Construction verifies that the
    stored mixing wavelengths close against the pump and probe wavelengths
    (1/lambda_minus = 2/lambda_1 - 1/lambda_2 and the sum analogue) to 0.5
    percent, which guards against typos in hand-entered values.
    """

    lambda1_nm: float = 268.8
    lambda_st_nm: float = 1064.0
    lambda2_nm: float = 532.0
    lambda_minus_nm: float = 179.8
    lambda_plus_nm: float = 107.3
    tau1_s: float = 3.0e-9
    oscillator_strength: float = 0.96

    def __post_init__(self):
        for name in ("lambda1_nm", "lambda_st_nm", "lambda2_nm",
                     "lambda_minus_nm", "lambda_plus_nm"):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"{name} must be positive")
        if not self.tau1_s > 0.0:
            raise ConfigurationError("tau1_s must be positive")
        if not 0.0 < self.oscillator_strength <= 1.0:
            raise ConfigurationError("oscillator_strength must lie in (0, 1]")
        closed_minus = 1.0 / (2.0 / self.lambda1_nm - 1.0 / self.lambda2_nm)
        closed_plus = 1.0 / (2.0 / self.lambda1_nm + 1.0 / self.lambda2_nm)
        for name, stored, closed in (
            ("lambda_minus_nm", self.lambda_minus_nm, closed_minus),
            ("lambda_plus_nm", self.lambda_plus_nm, closed_plus),
        ):
            if abs(stored - closed) > _CLOSURE_TOL * closed:
                raise ConfigurationError(
                    f"{name} = {stored} nm does not close against the pump and "
                    f"probe wavelengths (expected {closed:.2f} nm)"
                )


@dataclass(frozen=True)
class AbsorptionScale:
    """Depth conversion for one calibration and number density.

    ``alpha_minus`` is the frequency-integrated absorption rate in
    cm^-1 s^-1; ``scaled_depth_per_cm`` is alpha_minus * tau_1 / (2 pi), the
    number of Z units per centimeter; ``z0_cm`` is its inverse.
    """

    alpha_minus: float
    scaled_depth_per_cm: float

    @property
    def z0_cm(self) -> float:
        return 1.0 / self.scaled_depth_per_cm

    def Z_to_cm(self, z: float) -> float:
        return z / self.scaled_depth_per_cm

    def cm_to_Z(self, cm: float) -> float:
        return cm * self.scaled_depth_per_cm


def absorption_scale(cal: HgCalibration, number_density_cm3: float) -> AbsorptionScale:
    """Build the Z <-> centimeter conversion for a vapour density in cm^-3."""
    if not number_density_cm3 > 0.0:
        raise ConfigurationError(
            f"number density must be positive, got {number_density_cm3}"
        )
    alpha = 0.67 * cal.oscillator_strength * number_density_cm3 / 4.0
    return AbsorptionScale(
        alpha_minus=alpha,
        scaled_depth_per_cm=alpha * cal.tau1_s / TWO_PI,
    )


@dataclass(frozen=True)
class Preset:
    """One named parameter set, ready to run.

    Reduced-model presets populate only ``drive`` and ``grid``.  Mercury
    presets add the medium and the one-photon pulse envelopes (in angular
    units); conversion presets also carry a probe envelope, a target depth
    and canonical snapshot depths.
    """

    name: str
    note: str
    drive: DriveConfig
    grid: TimeGrid = DEFAULT_GRID
    medium: MediumSpec | None = None
    pump_field: PulseSpec | None = None
    stark_field: PulseSpec | None = None
    probe_field: PulseSpec | None = None
    z_end: float | None = None
    snapshot_depths: tuple[float, ...] = ()


def _gauss_drive(delta: float, rabi: float, stark: float, stark_delay: float = 0.0,
                 beta: float = 0.0, stark_width: float = 1.6) -> DriveConfig:
    return DriveConfig(
        delta=delta,
        pump=PulseSpec(amplitude=rabi),
        stark=PulseSpec(amplitude=stark, width_ratio=stark_width,
                        delay=stark_delay),
        beta=beta,
        units=UnitConvention.ANGULAR,
    )


_RECT_RABI = TWO_PI / 5.0
_RECT_GRID = TimeGrid(0.0, 10.0, 2001)


def _rect_drive(delta: float) -> DriveConfig:
    # The rectangular drive stays on over the whole output window.
    return DriveConfig(
        delta=delta,
        pump=PulseSpec(PulseShape.RECTANGULAR, _RECT_RABI, 10.0, 5.0),
        units=UnitConvention.ANGULAR,
    )


def _hg_pulses(g01: float, g0st: float, stark_delay: float):
    """One-photon pump and Stark envelopes from cyclic peak amplitudes."""
    pump = PulseSpec(amplitude=TWO_PI * g01)
    stark = PulseSpec(amplitude=TWO_PI * g0st, width_ratio=1.6,
                      delay=stark_delay)
    return pump, stark


def _hg_preset(name: str, note: str, delta_cyc: float, stark_delay: float,
               g01: float = 910.0, g0st: float = 325.0,
               probe_delay: float | None = None,
               mode: MixingMode = MixingMode.DIFFERENCE,
               k2: float | None = None,
               z_end: float | None = None,
               snapshots: tuple[float, ...] = ()) -> Preset:
    medium = MediumSpec(mixing_mode=mode)
    if k2 is not None:
        medium = replace(medium, K2=k2)
    pump, stark = _hg_pulses(g01, g0st, stark_delay)
    probe = None
    if probe_delay is not None:
        probe = PulseSpec(amplitude=TWO_PI * 1.6e-2, delay=probe_delay)
    delta = TWO_PI * delta_cyc
    return Preset(
        name=name,
        note=note,
        drive=drive_from_medium(pump, stark, medium, delta=delta),
        medium=medium,
        pump_field=pump,
        stark_field=stark,
        probe_field=probe,
        z_end=z_end,
        snapshot_depths=snapshots,
    )


def _alias(base: Preset, name: str, note: str | None = None) -> Preset:
    return replace(base, name=name, note=note if note is not None else base.note)


def _build_registry() -> dict[str, Preset]:
    entries: list[Preset] = []

    def add(name: str, note: str, drive: DriveConfig,
            grid: TimeGrid = DEFAULT_GRID) -> None:
        entries.append(Preset(name=name, note=note, drive=drive, grid=grid))

    rect_note = "rectangular drive, Rabi oscillation"
    add("fig3_solid", rect_note + " on resonance", _rect_drive(0.0), _RECT_GRID)
    add("fig3_dashed", rect_note + ", moderate detuning", _rect_drive(1.259),
        _RECT_GRID)
    add("fig3_dashdot", rect_note + ", large detuning", _rect_drive(2.5),
        _RECT_GRID)

    persist = "persistent coherence, Stark-compensated detuning"
    add("fig4_solid", "resonant pi/2 Gaussian pulse, no Stark control",
        _gauss_drive(0.0, 0.886, 0.0))
    add("fig4_dashed", persist, _gauss_drive(5.0, 3.18, 7.4, 1.8))
    add("fig4_dashdot", persist, _gauss_drive(20.0, 3.48, 23.0, 1.34))

    for suffix, s in (("solid", 7.4), ("dashed", 6.7), ("dashdot", 8.1)):
        add(f"fig5_a_{suffix}", "robustness scan over Stark peak",
            _gauss_drive(5.0, 3.18, s, 1.8))
    for suffix, d in (("solid", 5.0), ("dashed", 4.5), ("dashdot", 5.5)):
        add(f"fig5_b_{suffix}", "robustness scan over static detuning",
            _gauss_drive(d, 3.18, 7.4, 1.8))
    for suffix, r in (("solid", 3.48), ("dashed", 3.85), ("dashdot", 3.15)):
        add(f"fig5_c_{suffix}", "robustness scan over pump rate",
            _gauss_drive(20.0, r, 23.0, 1.34))
    for suffix, dt in (("solid", 1.34), ("dashed", 1.2), ("dashdot", 1.5)):
        add(f"fig5_d_{suffix}", "robustness scan over Stark delay",
            _gauss_drive(20.0, 3.48, 23.0, dt))

    passage = "Stark-chirped adiabatic passage"
    for suffix, r in (("solid", 30.0), ("dashed", 15.0), ("dashdot", 60.0)):
        add(f"fig6_a_{suffix}", passage + ", pump-rate scan",
            _gauss_drive(24.0, r, 75.0, 1.7))
    for suffix, dt in (("solid", 1.7), ("dashed", 1.1), ("dashdot", 2.3)):
        add(f"fig6_b_{suffix}", passage + ", delay scan",
            _gauss_drive(24.0, 30.0, 75.0, dt))
    for suffix, s in (("solid", 75.0), ("dashed", 50.0), ("dashdot", 150.0)):
        add(f"fig6_c_{suffix}", passage + ", Stark-peak scan",
            _gauss_drive(24.0, 30.0, s, 1.7))
    for suffix, d in (("solid", 24.0), ("dashed", 12.0), ("dashdot", 48.0)):
        add(f"fig6_d_{suffix}", passage + ", detuning scan",
            _gauss_drive(d, 30.0, 75.0, 1.7))

    add("fig7_solid", "resonant pi/2 pulse without self-shift",
        _gauss_drive(0.0, 0.886, 0.0))
    add("fig7_dashdot", "self-shift perturbs the pi/2 pulse",
        _gauss_drive(0.0, 0.886, 0.0, beta=-1.0))
    add("fig7_dashed", "static detuning compensates the self-shift",
        _gauss_drive(-0.65, 0.886, 0.0, beta=-1.0))

    strong = "strong drive with self-shift, no Stark control"
    for name, d in (("fig8_a", 0.0), ("fig8_b", -3.0),
                    ("fig8_c_dashed", -10.0), ("fig8_c_solid", -15.0)):
        add(name, strong, _gauss_drive(d, 20.0, 0.0, beta=-0.5))

    for suffix, r in (("dashed", 15.0), ("solid", 30.0)):
        add(f"fig9_{suffix}", "persistent coherence despite self-shift",
            _gauss_drive(13.65, r, 15.0, 1.6, beta=-0.5))

    for suffix, d in (("dashed", 10.0), ("solid", 24.0)):
        add(f"fig10_{suffix}", "full transfer despite self-shift",
            _gauss_drive(d, 20.0, 75.0, 1.4, beta=-0.5))

    # Bare panel names resolve to the solid variant, as scan base points.
    by_name = {p.name: p for p in entries}
    for fig in ("fig5", "fig6"):
        for panel in "abcd":
            entries.append(_alias(by_name[f"{fig}_{panel}_solid"],
                                  f"{fig}_{panel}"))

    hg_entry = "mercury cell entrance dynamics"
    fig11_solid = _hg_preset("fig11_solid", hg_entry + ", coherence plateau",
                             0.5, -3.0)
    fig11_dashed = _hg_preset("fig11_dashed", hg_entry + ", transient peak",
                              5.6, 2.0)
    entries += [fig11_solid, fig11_dashed]

    entries.append(_alias(fig11_solid, "fig12_solid"))
    entries.append(_hg_preset("fig12_dashed", hg_entry + ", stronger pump",
                              0.5, -3.0, g01=1173.0))
    entries.append(_hg_preset("fig12_dashdot", hg_entry + ", weaker pump",
                              0.5, -3.0, g01=525.0))

    entries.append(_hg_preset("fig13_solid", hg_entry + ", stronger Stark pulse",
                              0.5, -3.0, g0st=461.0))
    entries.append(_hg_preset("fig13_dashed", hg_entry + ", weaker Stark pulse",
                              0.5, -3.0, g0st=266.0))

    entries.append(_hg_preset("fig14_solid", hg_entry + ", earlier Stark pulse",
                              0.5, -4.0))
    entries.append(_alias(fig11_solid, "fig14_dashed"))
    entries.append(_hg_preset("fig14_dashdot", hg_entry + ", later Stark pulse",
                              0.5, -2.0))

    run = "mercury conversion run"
    fig17a = _hg_preset("fig17a", run + ", difference mixing over the plateau",
                        0.5, -3.0, probe_delay=5.0, z_end=3.0e6,
                        snapshots=DEFAULT_SNAPSHOTS)
    fig17b = _hg_preset("fig17b", run + ", sum mixing over the plateau",
                        0.5, -3.0, probe_delay=5.0, mode=MixingMode.SUM,
                        z_end=3.0e6, snapshots=DEFAULT_SNAPSHOTS)
    fig17c = _hg_preset("fig17c", run + ", difference mixing at the transient peak",
                        5.6, 2.0, probe_delay=0.0, z_end=3.0e6,
                        snapshots=DEFAULT_SNAPSHOTS)
    entries += [fig17a, fig17b, fig17c]
    entries.append(_alias(fig17a, "fig15_ac", run + ", output pulse shapes"))
    entries.append(_alias(fig17c, "fig15_bd", run + ", output pulse shapes"))
    entries.append(_alias(fig17a, "fig16", run + ", pump evolution"))
    entries.append(_alias(fig17c, "fig17d", run + ", peak-power record"))
    entries.append(_alias(fig17c, "fig18", run + ", shape evolution"))

    entries.append(replace(fig11_solid, name="fig19_solid",
                           note=hg_entry + " carried one absorption length deep",
                           z_end=1.0e6, snapshot_depths=(1.0e6,)))
    entries.append(replace(fig11_dashed, name="fig19_dashed",
                           note=hg_entry + " carried one absorption length deep",
                           z_end=1.0e6, snapshot_depths=(1.0e6,)))

    entries.append(_hg_preset("fig20", run + ", strong probe coupling",
                              0.5, -3.0, probe_delay=5.0, k2=0.4,
                              z_end=3.0e6, snapshots=DEFAULT_SNAPSHOTS))

    registry: dict[str, Preset] = {}
    for p in entries:
        if p.name in registry:
            raise ConfigurationError(f"duplicate preset name {p.name}")
        registry[p.name] = p
    return registry


_REGISTRY = _build_registry()


def preset_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def preset(name: str) -> Preset:
    """Look up a preset by name; unknown names list the available ones."""
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ConfigurationError(
            f"unknown preset {name!r}; known presets: {known}"
        ) from None


def entrance_fields(p: Preset, grid: TimeGrid | None = None) -> FieldSlice:
    """Entry FieldSlice for a mercury preset (pump, probe, no generated)."""
    if p.medium is None or p.pump_field is None:
        raise ConfigurationError(
            f"preset {p.name!r} has no one-photon field envelopes"
        )
    return slice_from_pulses(
        pump=p.pump_field,
        probe=p.probe_field if p.probe_field is not None else PulseSpec(),
        grid=grid if grid is not None else DEFAULT_PROPAGATION_GRID,
    )
