"""Depth march of the coupled envelopes through the prepared medium.

The three envelopes (pump, probe, generated wave) evolve in scaled depth with
source terms built from the reduced atomic pair, which is re-solved across the
whole retarded-time grid at every Runge-Kutta stage.  The march variable is
x = xi * tau_1 = 2*pi*Z; depths reported to callers are Z values.

Source orientation.  With the adiabatically eliminated coherences

    r_gm = -(a conj(g1) r_gn + g1 r_g) / Omega_gm
    r_mn = (a g1 r_n + conj(g1) r_gn) / Omega_mn
    r_ln = (g2 r_n + conj(gm) r_gn) / Omega_ln
    r_gl = -(conj(g2) r_gn + gm r_g) / Omega_gl

the envelope equations are taken as

    dg1/dx = +i K1 (r_gm + a r_mn)
    dg2/dx = +i K2 r_ln
    dgm/dx = +i Kminus r_gl

This is the orientation in which two-photon absorption depletes the pump and
the probe gains photons in difference mixing while losing them in sum mixing;
with the opposite sign all three energy flows reverse, which contradicts the
behaviour the conversion runs must reproduce.  Under this choice the
photon-number exchange between probe and generated wave is exact:

    d/dx (|g2|^2 / K2) = +- d/dx (|gm|^2 / Kminus)   (difference / sum),

and  |g1|^2/(2 K1) + |g2|^2/(2 K2) + |gm|^2/(2 Kminus) + r_n  is conserved
pointwise in retarded time.

In sum mixing the mixing level sits above the upper state instead of below the
ground state; the coupling structure is mirrored by conjugating the probe
envelope inside the mixing drive and the mixing sources (see ``model``), with
the same detuning magnitudes.  Phase mismatch is taken as zero and the Stark
field does not deplete, so its shift is a fixed function of retarded time at
every depth.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import metrics
from .dynamics import TimeGrid
from .kernels import sweep_reduced
from .model import (
    ConfigurationError,
    MediumSpec,
    MixingMode,
    NumericalFailure,
    PulseSpec,
    PulseShape,
    TwoLevelState,
    ZERO_PULSE,
    envelope,
)

__all__ = [
    "FieldSlice",
    "DepthSnapshot",
    "PropagationRecord",
    "StepControl",
    "DEFAULT_PROPAGATION_GRID",
    "slice_from_pulses",
    "source_terms",
    "set_mixing_mode",
    "propagate",
]

DEFAULT_PROPAGATION_GRID = TimeGrid(t_start=-6.0, t_end=12.0, n_samples=512)

TWO_PI = 2.0 * np.pi


@dataclass
class FieldSlice:
    """The three complex envelopes sampled on one retarded-time grid."""

    grid: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    gmix: np.ndarray

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.g1 = np.asarray(self.g1, dtype=complex)
        self.g2 = np.asarray(self.g2, dtype=complex)
        self.gmix = np.asarray(self.gmix, dtype=complex)
        n = self.grid.size
        if n < 2:
            raise ConfigurationError("a field slice needs at least two samples")
        if any(arr.shape != (n,) for arr in (self.g1, self.g2, self.gmix)):
            raise ConfigurationError("field arrays must match the grid length")
        if not np.all(np.diff(self.grid) > 0.0):
            raise ConfigurationError("retarded-time grid must be increasing")
        for name, arr in (("grid", self.grid), ("g1", self.g1),
                          ("g2", self.g2), ("gmix", self.gmix)):
            if not np.all(np.isfinite(arr)):
                raise ConfigurationError(f"non-finite entries in {name}")

    def energies(self) -> dict:
        """Trapezoidal integrals of |G|^2 keyed by field name."""
        return {
            "pump": float(np.trapezoid(np.abs(self.g1) ** 2, self.grid)),
            "probe": float(np.trapezoid(np.abs(self.g2) ** 2, self.grid)),
            "generated": float(np.trapezoid(np.abs(self.gmix) ** 2,
                                            self.grid)),
        }

    def peaks(self) -> dict:
        """Maxima of |G|^2 keyed by field name."""
        return {
            "pump": float(np.max(np.abs(self.g1) ** 2)),
            "probe": float(np.max(np.abs(self.g2) ** 2)),
            "generated": float(np.max(np.abs(self.gmix) ** 2)),
        }

    def copy(self) -> "FieldSlice":
        return FieldSlice(self.grid.copy(), self.g1.copy(), self.g2.copy(),
                          self.gmix.copy())


def slice_from_pulses(pump: PulseSpec, probe: PulseSpec = ZERO_PULSE,
                      generated: PulseSpec = ZERO_PULSE,
                      grid: TimeGrid = DEFAULT_PROPAGATION_GRID) -> FieldSlice:
    """Sample one-photon pulse envelopes onto a propagation grid."""
    t = grid.times
    return FieldSlice(
        grid=t,
        g1=envelope(pump, t).astype(complex),
        g2=envelope(probe, t).astype(complex),
        gmix=envelope(generated, t).astype(complex),
    )


@dataclass(frozen=True)
class DepthSnapshot:
    """Full state kept at one requested depth."""

    z: float
    fields: FieldSlice
    rn: np.ndarray
    rgn_abs: np.ndarray


@dataclass
class PropagationRecord:
    """March output: metric series over depth plus snapshots.

    ``xi_samples`` holds the scaled depths Z of every accepted step, starting
    at 0.  The series dicts are keyed by field name ("pump", "probe",
    "generated") with one array entry per depth sample.  ``eps_ph`` and
    ``w_ph_max`` are NaN throughout when the entry probe carries no energy,
    since they are scaled to it.
    """

    xi_samples: np.ndarray
    energies: dict
    peaks: dict
    eps_ph: dict
    w_ph_max: dict
    g1_energy_ratio: np.ndarray
    snapshots: list
    entry: FieldSlice
    mode: MixingMode

    def final_metrics(self) -> metrics.ConversionMetrics:
        return self.metrics_at(len(self.xi_samples) - 1)

    def metrics_at(self, index: int) -> metrics.ConversionMetrics:
        return metrics.ConversionMetrics(
            eps_ph={k: float(v[index]) for k, v in self.eps_ph.items()},
            w_ph_max={k: float(v[index]) for k, v in self.w_ph_max.items()},
            g1_energy_ratio=float(self.g1_energy_ratio[index]),
        )

    def snapshot_at(self, z: float) -> DepthSnapshot:
        for snap in self.snapshots:
            if abs(snap.z - z) <= 1e-9 * max(1.0, abs(z)):
                return snap
        raise KeyError(f"no snapshot stored at Z = {z}")


@dataclass(frozen=True)
class StepControl:
    """Adaptive-step and sweep-accuracy knobs for the depth march.

    The step adapts to keep the largest relative L2 change of any envelope
    near ``norm_target`` per step; a step exceeding ``reject_factor`` times
    the target is redone with a smaller dz.  ``sweep_budget`` caps the SU(2)
    rotation angle per substep of the atomic sweep.  Depths are in Z units.
    """

    dz_init: float = 2.0
    dz_min: float = 1e-4
    dz_max: float = 4e4
    norm_target: float = 1e-3
    reject_factor: float = 4.0
    sweep_budget: float = 0.15
    max_steps: int = 500_000

    def __post_init__(self):
        if not (0.0 < self.dz_min <= self.dz_init <= self.dz_max):
            raise ConfigurationError("need 0 < dz_min <= dz_init <= dz_max")
        if not 0.0 < self.norm_target < 1.0:
            raise ConfigurationError("norm_target must be in (0, 1)")
        if self.reject_factor <= 1.0:
            raise ConfigurationError("reject_factor must exceed 1")
        if not 0.0 < self.sweep_budget <= 1.0:
            raise ConfigurationError("sweep_budget must be in (0, 1]")


def set_mixing_mode(medium: MediumSpec, mode: MixingMode) -> MediumSpec:
    """Return a medium configured for difference or sum mixing."""
    return medium.with_mode(mode)


def _drive_constants(medium: MediumSpec):
    om_gl = -medium.det_ln
    return (
        -2.0 * medium.a / medium.det_gm,          # c_r1
        -2.0 / om_gl,                             # c_r2
        (medium.a ** 2 - 1.0) / medium.det_gm,    # kap1
        1.0 / om_gl,                              # kap2
        1.0 / medium.det_ln,                      # kapm
    )


def _source_arrays(g1, g2, gm, rn, rgn, medium: MediumSpec):
    """Vectorised envelope sources from the adiabatic coherences."""
    a = medium.a
    rg = 1.0 - rn
    om_gm = medium.det_gm
    om_mn = -om_gm
    om_ln = medium.det_ln
    om_gl = -om_ln
    r_gm = -(a * np.conj(g1) * rgn + g1 * rg) / om_gm
    r_mn = (a * g1 * rn + np.conj(g1) * rgn) / om_mn
    if medium.mixing_mode is MixingMode.SUM:
        # conj(r_ln) for the mirrored level ordering; see module docstring
        ln_term = (g2 * rn + gm * np.conj(rgn)) / om_ln
        r_gl = -(g2 * rgn + gm * rg) / om_gl
    else:
        ln_term = (g2 * rn + np.conj(gm) * rgn) / om_ln
        r_gl = -(np.conj(g2) * rgn + gm * rg) / om_gl
    s1 = 1j * medium.K1 * (r_gm + a * r_mn)
    s2 = 1j * medium.K2 * ln_term
    sm = 1j * medium.Kminus * r_gl
    return s1, s2, sm


def source_terms(g1: complex, g2: complex, gmix: complex,
                 state: TwoLevelState, medium: MediumSpec):
    """Envelope derivatives (dg1/dx, dg2/dx, dgmix/dx) at one grid point.

    The orientation of the imaginary unit follows the module docstring: pump
    depletion under two-photon absorption and probe photon gain in difference
    mixing.
    """
    g1a = np.asarray([g1], dtype=complex)
    g2a = np.asarray([g2], dtype=complex)
    gma = np.asarray([gmix], dtype=complex)
    rna = np.asarray([state.rn], dtype=float)
    rgna = np.asarray([state.rgn], dtype=complex)
    s1, s2, sm = _source_arrays(g1a, g2a, gma, rna, rgna, medium)
    return complex(s1[0]), complex(s2[0]), complex(sm[0])


class _Sweeper:
    """One reduced-model sweep over the grid with reusable output buffers."""

    def __init__(self, times, stark: PulseSpec, medium: MediumSpec,
                 delta: float, budget: float):
        if stark.shape is not PulseShape.GAUSSIAN:
            raise ConfigurationError(
                "depth marching supports Gaussian Stark pulses only"
            )
        self.times = np.ascontiguousarray(times, dtype=float)
        self.s_peak = stark.amplitude ** 2 / medium.det_nf
        self.s_delay = stark.delay
        self.s_inv_w2 = 1.0 / stark.width_ratio ** 2
        (self.c_r1, self.c_r2, self.kap1, self.kap2,
         self.kapm) = _drive_constants(medium)
        self.delta = delta
        self.sum_mode = medium.mixing_mode is MixingMode.SUM
        self.budget = budget
        n = self.times.size
        self.rn = np.empty(n, dtype=float)
        self.rgn = np.empty(n, dtype=complex)

    def run(self, g1, g2, gm, z: float):
        bad = sweep_reduced(self.times, g1, g2, gm,
                            self.s_peak, self.s_delay, self.s_inv_w2,
                            self.c_r1, self.c_r2, self.kap1, self.kap2,
                            self.kapm, self.delta, self.sum_mode, self.budget,
                            self.rn, self.rgn)
        if bad >= 0:
            raise NumericalFailure(
                f"non-finite drive during the atomic sweep at Z = {z:.6g}, "
                f"time sample {bad} (t = {self.times[bad]:.4g})",
                where=f"Z={z:.6g}, sample {bad}",
            )
        return self.rn, self.rgn


def _first_bad_index(*arrays):
    for arr in arrays:
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            return int(bad[0])
    return -1


def propagate(entry: FieldSlice, stark: PulseSpec, medium: MediumSpec,
              z_end: float, control: StepControl | None = None, *,
              delta: float = 0.0,
              snapshot_depths: Sequence[float] = ()) -> PropagationRecord:
    """March the entry fields to depth ``z_end``.

    ``delta`` is the static two-photon detuning in angular units, the same
    number the reduced model calls delta.  ``snapshot_depths`` requests full
    field and atomic-state copies at specific Z values; the step lands on
    them exactly.  Classical RK4 in depth; every stage re-solves the reduced
    atomic dynamics with that stage's trial fields.
    """
    ctrl = control if control is not None else StepControl()
    if not np.isfinite(z_end) or z_end < 0.0:
        raise ConfigurationError(f"z_end must be finite and >= 0, got {z_end}")
    snaps_wanted = sorted(set(float(z) for z in snapshot_depths))
    if snaps_wanted and (snaps_wanted[0] < 0.0 or snaps_wanted[-1] > z_end):
        raise ConfigurationError("snapshot depths must lie inside [0, z_end]")

    sweeper = _Sweeper(entry.grid, stark, medium, delta, ctrl.sweep_budget)
    weights = metrics.photon_weights(medium)
    entry = entry.copy()
    e0 = entry.energies()
    p0 = entry.peaks()
    have_probe = e0["probe"] > 0.0
    have_pump = e0["pump"] > 0.0

    g1 = entry.g1.copy()
    g2 = entry.g2.copy()
    gm = entry.gmix.copy()

    z_list = [0.0]
    series_e = {name: [val] for name, val in e0.items()}
    series_p = {name: [val] for name, val in p0.items()}
    snapshots = []

    def record_point(z):
        z_list.append(z)
        cur = FieldSlice(entry.grid, g1, g2, gm)
        for name, val in cur.energies().items():
            series_e[name].append(val)
        for name, val in cur.peaks().items():
            series_p[name].append(val)

    def take_snapshot(z):
        rn, rgn = sweeper.run(g1, g2, gm, z)
        snapshots.append(DepthSnapshot(
            z=z,
            fields=FieldSlice(entry.grid.copy(), g1.copy(), g2.copy(),
                              gm.copy()),
            rn=rn.copy(),
            rgn_abs=np.abs(rgn),
        ))

    snap_iter = list(snaps_wanted)
    if snap_iter and snap_iter[0] == 0.0:
        take_snapshot(0.0)
        snap_iter.pop(0)

    x_end = TWO_PI * z_end
    x = 0.0
    dx = TWO_PI * min(ctrl.dz_init, max(z_end, ctrl.dz_min))
    dx_min = TWO_PI * ctrl.dz_min
    dx_max = TWO_PI * ctrl.dz_max
    steps = 0
    tiny = 1e-300

    while x < x_end * (1.0 - 1e-12):
        steps += 1
        if steps > ctrl.max_steps:
            raise NumericalFailure(
                f"depth march exceeded {ctrl.max_steps} steps at Z = "
                f"{x / TWO_PI:.6g}",
                where="max_steps",
            )
        target = x_end if not snap_iter else TWO_PI * snap_iter[0]
        dx_try = min(dx, target - x)
        z_here = x / TWO_PI

        rn, rgn = sweeper.run(g1, g2, gm, z_here)
        k1 = _source_arrays(g1, g2, gm, rn, rgn, medium)
        while True:
            h = dx_try
            t1 = (g1 + 0.5 * h * k1[0], g2 + 0.5 * h * k1[1],
                  gm + 0.5 * h * k1[2])
            rn, rgn = sweeper.run(*t1, z_here)
            k2 = _source_arrays(*t1, rn, rgn, medium)
            t2 = (g1 + 0.5 * h * k2[0], g2 + 0.5 * h * k2[1],
                  gm + 0.5 * h * k2[2])
            rn, rgn = sweeper.run(*t2, z_here)
            k3 = _source_arrays(*t2, rn, rgn, medium)
            t3 = (g1 + h * k3[0], g2 + h * k3[1], gm + h * k3[2])
            rn, rgn = sweeper.run(*t3, z_here)
            k4 = _source_arrays(*t3, rn, rgn, medium)

            new1 = g1 + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            new2 = g2 + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            newm = gm + (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])

            if not (np.all(np.isfinite(new1)) and np.all(np.isfinite(new2))
                    and np.all(np.isfinite(newm))):
                bad = _first_bad_index(new1, new2, newm)
                raise NumericalFailure(
                    f"non-finite field after the step to Z = "
                    f"{(x + h) / TWO_PI:.6g}, time sample {bad}",
                    where=f"Z={(x + h) / TWO_PI:.6g}, sample {bad}",
                )

            # Each field is controlled against its own norm.  The floor is a
            # few percent of the convertible pair's scale, so a field growing
            # from (near) zero is stepped against its partner until it is an
            # appreciable fraction of it; its birth happens over the
            # conversion length and needs no finer resolution.
            norm2 = float(np.linalg.norm(g2))
            normm = float(np.linalg.norm(gm))
            scale_floor = 0.05 * max(norm2, normm, tiny)
            rel = 0.0
            for old, new in ((g1, new1), (g2, new2), (gm, newm)):
                scale = max(float(np.linalg.norm(old)), scale_floor)
                rel = max(rel, float(np.linalg.norm(new - old)) / scale)

            if rel <= ctrl.reject_factor * ctrl.norm_target or h <= dx_min:
                break
            dx_try = max(0.5 * h, dx_min)

        if rel > ctrl.reject_factor * ctrl.norm_target and dx_try <= dx_min:
            raise NumericalFailure(
                f"depth step underflow at Z = {x / TWO_PI:.6g}: relative "
                f"field change {rel:.3g} at the minimum step",
                where=f"Z={x / TWO_PI:.6g}",
            )

        x += dx_try
        g1, g2, gm = new1, new2, newm
        record_point(x / TWO_PI)
        if snap_iter and x >= TWO_PI * snap_iter[0] * (1.0 - 1e-12):
            take_snapshot(snap_iter.pop(0))

        growth = ctrl.norm_target / max(rel, 1e-2 * ctrl.norm_target)
        dx = min(max(dx_try * min(growth, 5.0), dx_min), dx_max)

    xi = np.asarray(z_list)
    energies = {k: np.asarray(v) for k, v in series_e.items()}
    peaks = {k: np.asarray(v) for k, v in series_p.items()}
    nan = np.full(xi.size, np.nan)
    if have_probe:
        eps = {k: (energies[k] - e0[k]) / e0["probe"] * weights[k]
               for k in metrics.FIELD_NAMES}
        wph = {k: (peaks[k] - p0[k]) / p0["probe"] * weights[k]
               for k in metrics.FIELD_NAMES}
    else:
        eps = {k: nan.copy() for k in metrics.FIELD_NAMES}
        wph = {k: nan.copy() for k in metrics.FIELD_NAMES}
    ratio = energies["pump"] / e0["pump"] if have_pump else nan.copy()

    return PropagationRecord(
        xi_samples=xi,
        energies=energies,
        peaks=peaks,
        eps_ph=eps,
        w_ph_max=wph,
        g1_energy_ratio=ratio,
        snapshots=snapshots,
        entry=entry,
        mode=medium.mixing_mode,
    )
