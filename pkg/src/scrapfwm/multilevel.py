"""Brute-force five-level model used as an oracle for the reduced equations.

Levels: ground g, two-photon target n, pump intermediate m, mixing
intermediate l and Stark partner f.  Population is confined to {g, n}
(r_g = 1 - r_n); the intermediate levels enter only through their coherences.
All coherences are integrated as slowly varying envelopes r_ij, related to the
interaction-frame matrix elements by rho_ij = r_ij exp(-i Omega_ij t), which
turns the oscillating couplings into constant-coefficient detuning terms:

    d r_mn/dt = i Omega_mn r_mn - i [a g1 r_n + g1* r_gn]
    d r_ln/dt = i Omega_ln r_ln - i [g2 r_n + gx* r_gn]
    d r_gl/dt = i Omega_gl r_gl + i [r_gn g2* + r_g gx]
    d r_gm/dt = i Omega_gm r_gm + i [a* g1* r_gn + g1 r_g]
    d r_gn/dt = i Omega_gn r_gn
                - i [g1 r_mn - a g1 r_gm + gx r_ln - g2 r_gl - gst* r_gf]
    d r_nf/dt = i Omega_nf r_nf + i gst r_n
    d r_gf/dt = i Omega_gf r_gf + i gst r_gn
    d r_n/dt  = 2 Im[a* g1* r_mn + g2* r_ln + gst conj(r_nf)]

with gx the generated-field envelope.  Setting the time derivatives of the
intermediate coherences to zero reproduces the algebraic forms in
``algebraic_coherences``, and substituting those into the r_gn and r_n
equations reproduces the reduced two-level model, Stark shifts included.

The expected failure mode of the reduction is quantified by
``compare_reduced_vs_full``: discrepancies scale as (g / Omega)^2 and shrink
as all detunings grow at fixed two-photon pulse area.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import TimeGrid, evolve
from .model import (
    ConfigurationError,
    MediumSpec,
    NumericalFailure,
    PulseSpec,
    TwoLevelState,
    drive_from_medium,
    envelope,
    scalar_sampler,
)

__all__ = [
    "DetuningSet",
    "FieldSet",
    "FiveLevelState",
    "FullTrajectory",
    "OracleConfig",
    "evolve_full",
    "algebraic_coherences",
    "validate_adiabatic",
    "compare_reduced_vs_full",
    "oracle_report",
]

_COH_SLACK = 1e-6
# Integrations that would need more steps than this are rejected up front.
_MAX_CEILING_STEPS = 5e6


@dataclass(frozen=True)
class DetuningSet:
    """All one- and two-photon detunings of the scheme, in angular tau_1 units.

    The seven values are not independent: the frequency combinations require
    Omega_gn = Omega_gm + Omega_mn = Omega_gl + Omega_ln and
    Omega_gf = Omega_gn + Omega_nf.  Construction verifies the identities to
    rounding accuracy.
    """

    Omega_gm: float
    Omega_mn: float
    Omega_ln: float
    Omega_gl: float
    Omega_nf: float
    Omega_gf: float
    Omega_gn: float = 0.0

    def __post_init__(self):
        scale = max(1.0, *(abs(getattr(self, f)) for f in (
            "Omega_gm", "Omega_mn", "Omega_ln", "Omega_gl", "Omega_nf",
            "Omega_gf", "Omega_gn")))
        rtol = 1e-9 * scale
        if abs(self.Omega_gn - (self.Omega_gm + self.Omega_mn)) > rtol:
            raise ConfigurationError(
                "inconsistent detunings: Omega_gn != Omega_gm + Omega_mn")
        if abs(self.Omega_gn - (self.Omega_gl + self.Omega_ln)) > rtol:
            raise ConfigurationError(
                "inconsistent detunings: Omega_gn != Omega_gl + Omega_ln")
        if abs(self.Omega_gf - (self.Omega_gn + self.Omega_nf)) > rtol:
            raise ConfigurationError(
                "inconsistent detunings: Omega_gf != Omega_gn + Omega_nf")

    @classmethod
    def from_independent(cls, Omega_gm: float, Omega_ln: float,
                         Omega_nf: float, Omega_gn: float = 0.0
                         ) -> "DetuningSet":
        """Build a consistent set from the three one-photon detunings."""
        return cls(
            Omega_gm=Omega_gm,
            Omega_mn=Omega_gn - Omega_gm,
            Omega_ln=Omega_ln,
            Omega_gl=Omega_gn - Omega_ln,
            Omega_nf=Omega_nf,
            Omega_gf=Omega_gn + Omega_nf,
            Omega_gn=Omega_gn,
        )

    def named(self) -> dict:
        return {f: getattr(self, f) for f in (
            "Omega_gm", "Omega_mn", "Omega_ln", "Omega_gl", "Omega_nf",
            "Omega_gf", "Omega_gn")}


@dataclass(frozen=True)
class FieldSet:
    """One-photon envelopes of the four fields, amplitudes in angular units."""

    pump: PulseSpec = PulseSpec(amplitude=0.0)
    probe: PulseSpec = PulseSpec(amplitude=0.0)
    generated: PulseSpec = PulseSpec(amplitude=0.0)
    stark: PulseSpec = PulseSpec(amplitude=0.0)

    def sampled(self, t):
        return tuple(envelope(p, t, kind="one_photon")
                     for p in (self.pump, self.probe, self.generated,
                               self.stark))


@dataclass(frozen=True)
class FiveLevelState:
    """Population of n plus the seven coherence envelopes.

    Coherences are stored in the detuning-rotating frame; multiply rho_ij by
    exp(-i Omega_ij t) to recover the interaction-frame value.
    """

    rho_n: float
    rho_mn: complex = 0.0
    rho_ln: complex = 0.0
    rho_gl: complex = 0.0
    rho_gm: complex = 0.0
    rho_gn: complex = 0.0
    rho_nf: complex = 0.0
    rho_gf: complex = 0.0

    def __post_init__(self):
        if not (-_COH_SLACK <= self.rho_n <= 1.0 + _COH_SLACK):
            raise ConfigurationError(f"population out of range: {self.rho_n}")
        for name in ("rho_mn", "rho_ln", "rho_gl", "rho_gm", "rho_gn",
                     "rho_nf", "rho_gf"):
            if abs(getattr(self, name)) > 1.0 + _COH_SLACK:
                raise ConfigurationError(f"coherence {name} exceeds 1")

    @property
    def rho_g(self) -> float:
        return 1.0 - self.rho_n


_COH_NAMES = ("rho_mn", "rho_ln", "rho_gl", "rho_gm", "rho_gn", "rho_nf",
              "rho_gf")


@dataclass(frozen=True)
class FullTrajectory:
    """Sequence of five-level states on a uniform grid.

    Indexing returns FiveLevelState; the raw arrays are available as
    attributes for vectorised comparisons.  ``closure_drift`` is the maximum
    difference between the integrated population and a second accumulator of
    the same rate written through a different float path, which catches
    transcription errors between the two forms.  ``trace_excursion`` and
    ``trace_residual`` compare 1 - rho_n against the ground-population
    integral accumulated from the g-side couplings: the excursion peaks at the
    (g/Omega)^2 population transiently parked in the eliminated levels, while
    the residual (final time) measures the net leak and should be tiny.
    """

    grid: TimeGrid
    rho_n: np.ndarray
    coherences: dict
    closure_drift: float
    trace_excursion: float = 0.0
    trace_residual: float = 0.0

    def __len__(self) -> int:
        return self.grid.n_samples

    def __getitem__(self, i: int) -> FiveLevelState:
        return FiveLevelState(
            rho_n=float(self.rho_n[i]),
            **{k: complex(v[i]) for k, v in self.coherences.items()},
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def _step_ceiling(det: DetuningSet, grid: TimeGrid) -> float:
    named = det.named()
    worst = max(named, key=lambda k: abs(named[k]))
    biggest = abs(named[worst])
    if biggest == 0.0:
        return math.inf
    ceiling = 0.02 / biggest
    if (grid.t_end - grid.t_start) / ceiling > _MAX_CEILING_STEPS:
        raise NumericalFailure(
            f"step ceiling {ceiling:.3g} from {worst} = {named[worst]:.6g} "
            f"needs more than {_MAX_CEILING_STEPS:.0f} steps over the grid; "
            "reduce the detuning or use the reduced model",
            where=worst,
        )
    return ceiling


def evolve_full(fields: FieldSet, det: DetuningSet, a: float,
                grid: TimeGrid = TimeGrid(-5.0, 5.0, 801),
                tol: float = 1e-8) -> FullTrajectory:
    """Integrate the five-level system from the ground state.

    The step ceiling 0.02 / max|Omega| keeps the rotating-frame detuning terms
    resolved; configurations whose detunings would demand an absurd number of
    steps raise NumericalFailure naming the offending detuning.  A sixteenth
    state variable accumulates the population rate independently, giving the
    closure drift diagnostic.
    """
    if not (0.0 < tol <= 1e-3):
        raise ConfigurationError(f"tol must lie in (0, 1e-3], got {tol}")
    ceiling = _step_ceiling(det, grid)
    w_mn, w_ln, w_gl, w_gm = det.Omega_mn, det.Omega_ln, det.Omega_gl, det.Omega_gm
    w_gn, w_nf, w_gf = det.Omega_gn, det.Omega_nf, det.Omega_gf
    f1 = scalar_sampler(fields.pump)
    f2 = scalar_sampler(fields.probe)
    fx = scalar_sampler(fields.generated)
    fst = scalar_sampler(fields.stark)

    def rhs(t, y):
        # PulseSpec envelopes are real and a is real, so the conjugations in
        # the module-docstring equations are dropped here.
        g1 = f1(t)
        g2 = f2(t)
        gx = fx(t)
        gst = fst(t)
        rn = y[0]
        rg = 1.0 - rn
        r_mn = y[2] + 1j * y[3]
        r_ln = y[4] + 1j * y[5]
        r_gl = y[6] + 1j * y[7]
        r_gm = y[8] + 1j * y[9]
        r_gn = y[10] + 1j * y[11]
        r_nf = y[12] + 1j * y[13]
        r_gf = y[14] + 1j * y[15]

        d_mn = 1j * w_mn * r_mn - 1j * (a * g1 * rn + g1 * r_gn)
        d_ln = 1j * w_ln * r_ln - 1j * (g2 * rn + gx * r_gn)
        d_gl = 1j * w_gl * r_gl + 1j * (r_gn * g2 + rg * gx)
        d_gm = 1j * w_gm * r_gm + 1j * (a * g1 * r_gn + g1 * rg)
        d_gn = 1j * w_gn * r_gn - 1j * (
            g1 * r_mn - a * g1 * r_gm + gx * r_ln - g2 * r_gl - gst * r_gf)
        d_nf = 1j * w_nf * r_nf + 1j * gst * rn
        d_gf = 1j * w_gf * r_gf + 1j * gst * r_gn
        d_rn = 2.0 * (a * g1 * r_mn.imag + g2 * r_ln.imag
                      + gst * (-r_nf.imag))
        # Same rate through a different float path, for the drift check
        d_aux = (2.0 * a * g1 * y[3] + 2.0 * g2 * y[5]) - 2.0 * gst * y[13]
        # Ground-side rate: rho_g' = 2 Im[g1 conj(r_gm) + gx conj(r_gl)]
        d_rg = -2.0 * (g1 * y[9] + gx * y[7])
        return (
            d_rn, d_aux,
            d_mn.real, d_mn.imag, d_ln.real, d_ln.imag,
            d_gl.real, d_gl.imag, d_gm.real, d_gm.imag,
            d_gn.real, d_gn.imag, d_nf.real, d_nf.imag,
            d_gf.real, d_gf.imag,
            d_rg,
        )

    times = grid.times
    sol = solve_ivp(rhs, (grid.t_start, grid.t_end), np.zeros(17),
                    method="RK45", rtol=tol, atol=tol * 1e-2,
                    max_step=ceiling, t_eval=times)
    if not sol.success or not np.all(np.isfinite(sol.y)):
        t_bad = float(sol.t[-1]) if sol.t.size else grid.t_start
        raise NumericalFailure(
            f"five-level integration failed near t = {t_bad:.6g}", where=t_bad)
    coh = {}
    for k, name in enumerate(_COH_NAMES):
        coh[name] = sol.y[2 + 2 * k] + 1j * sol.y[3 + 2 * k]
    drift = float(np.max(np.abs(sol.y[0] - sol.y[1])))
    trace = np.abs((1.0 - sol.y[0]) - (1.0 + sol.y[16]))
    return FullTrajectory(grid=grid, rho_n=sol.y[0], coherences=coh,
                          closure_drift=drift,
                          trace_excursion=float(np.max(trace)),
                          trace_residual=float(trace[-1]))


def algebraic_coherences(state: TwoLevelState, g1, g2, gmix, gst,
                         det: DetuningSet, a: float) -> dict:
    """Adiabatic (steady-state) values of the intermediate coherences.

    These are the stationary points of the intermediate-coherence equations at
    frozen (r_n, r_gn); they feed the propagation source terms.
    """
    for name, value in (("Omega_mn", det.Omega_mn), ("Omega_ln", det.Omega_ln),
                        ("Omega_gl", det.Omega_gl), ("Omega_gm", det.Omega_gm),
                        ("Omega_nf", det.Omega_nf), ("Omega_gf", det.Omega_gf)):
        if value == 0.0:
            raise ConfigurationError(f"{name} must be non-zero")
    rn = state.rn
    rgn = state.rgn
    rg = 1.0 - rn
    return {
        "r_mn": (a * g1 * rn + np.conj(g1) * rgn) / det.Omega_mn,
        "r_ln": (g2 * rn + np.conj(gmix) * rgn) / det.Omega_ln,
        "r_gl": -(rgn * np.conj(g2) + rg * gmix) / det.Omega_gl,
        "r_gm": -(np.conj(a) * np.conj(g1) * rgn + g1 * rg) / det.Omega_gm,
        "r_nf": -gst * rn / det.Omega_nf,
        "r_gf": -rgn * gst / det.Omega_gf,
    }


_FIELD_TRANSITIONS = {
    "pump": ("Omega_gm", "Omega_mn"),
    "probe": ("Omega_ln",),
    "generated": ("Omega_gl",),
    "stark": ("Omega_nf", "Omega_gf"),
}


def validate_adiabatic(fields: FieldSet, det: DetuningSet,
                       ok_ratio: float = 10.0,
                       violated_ratio: float = 3.0) -> dict:
    """Check the detuning hierarchy per field: Omega >> g >> 1/tau.

    The report carries, per field, the worst ratio min|Omega| / peak and a
    status of "ok" (ratio >= ok_ratio), "violated" (< violated_ratio) or
    "warning".  A field with zero amplitude trivially satisfies the upper
    inequality but not g >> 1/tau; it is reported as a "perturbative field"
    warning rather than an error and does not affect the overall status.
    """
    report = {}
    worst = "ok"
    order = {"ok": 0, "warning": 1, "violated": 2}
    named = det.named()
    for fname, transitions in _FIELD_TRANSITIONS.items():
        pulse: PulseSpec = getattr(fields, fname)
        omega_min = min(abs(named[t]) for t in transitions)
        if pulse.amplitude == 0.0:
            report[fname] = {
                "ratio": math.inf,
                "status": "warning",
                "note": "perturbative field: lower inequality g >> 1/tau "
                        "does not hold",
            }
            continue
        ratio = omega_min / pulse.amplitude
        if ratio >= ok_ratio:
            status = "ok"
        elif ratio < violated_ratio:
            status = "violated"
        else:
            status = "warning"
        entry = {"ratio": ratio, "status": status}
        if pulse.amplitude * pulse.width_ratio < 3.0:
            entry["note"] = "pulse area small: g >> 1/tau is marginal"
        report[fname] = entry
        worst = max(worst, status, key=order.get)
    report["status"] = worst
    return report


@dataclass(frozen=True)
class OracleConfig:
    """Inputs for a reduced-versus-full comparison run.

    ``omega`` sets the pump one-photon detuning scale (angular units); the
    other detunings are fixed multiples so the set stays consistent and free
    of accidental resonances.  The pump amplitude is chosen to give the
    requested two-photon pulse area in the reduced model.
    """

    omega: float = 100.0
    a: float = 0.5
    area: float = math.pi / 2.0
    width: float = 1.0
    delta: float = 0.0
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(-5.0, 5.0, 801))
    tol: float = 1e-8

    def detunings(self) -> DetuningSet:
        return DetuningSet.from_independent(
            Omega_gm=-self.omega, Omega_ln=1.5 * self.omega,
            Omega_nf=2.0 * self.omega, Omega_gn=self.delta)

    def pump_amplitude(self) -> float:
        return math.sqrt(self.area * abs(self.omega)
                         / (2.0 * self.a * self.width * math.sqrt(math.pi)))


def compare_reduced_vs_full(config: OracleConfig) -> dict:
    """Run both models on the same drive and report the worst discrepancies.

    Returns max_t |rho_n - r_n| and max_t |rho_gn - r_gn|; both coherences
    live in the same rotating frame, so the comparison needs no phase
    realignment.  The adiabatic status is included so marginal configurations
    are visible in the report.
    """
    det = config.detunings()
    g1_peak = config.pump_amplitude()
    pump = PulseSpec(amplitude=g1_peak, width_ratio=config.width, delay=0.0)
    fields = FieldSet(pump=pump)
    medium = MediumSpec(a=config.a, det_gm=det.Omega_gm, det_ln=det.Omega_ln,
                        det_nf=det.Omega_nf)
    drive = drive_from_medium(pump, PulseSpec(amplitude=0.0), medium,
                              delta=config.delta)
    reduced = evolve(drive, config.grid, tol=config.tol)
    full = evolve_full(fields, det, config.a, config.grid, tol=config.tol)
    pop_err = float(np.max(np.abs(full.rho_n - reduced.rn)))
    coh_err = float(np.max(np.abs(full.coherences["rho_gn"] - reduced.rgn)))
    return {
        "max_pop_err": pop_err,
        "max_coh_err": coh_err,
        "closure_drift": full.closure_drift,
        "adiabatic_status": validate_adiabatic(fields, det)["status"],
    }


def oracle_report(config: OracleConfig) -> dict:
    """JSON-ready record of a comparison run."""
    out = compare_reduced_vs_full(config)
    cfg = asdict(config)
    cfg["grid"] = {"t_start": config.grid.t_start, "t_end": config.grid.t_end,
                   "n_samples": config.grid.n_samples}
    return {"config": cfg, **out}
