"""Core types and algebra for two-photon coherence preparation.

A far-off-resonance pump couples the ground state g to a metastable state n
through intermediate states, so the relevant slow variables are the upper-state
population r_n and the two-photon coherence r_gn.  Everything that drives that
pair is condensed into a two-photon Rabi rate and a collection of quadratic
Stark shifts, computed here from the one-photon field envelopes and the
intermediate-state detunings.

Conventions used throughout the package:

* Time is measured in units of the pump duration tau_1.  All rates, shifts and
  detunings are dimensionless products (rate * tau_1).
* Internally every rate is angular.  ``UnitConvention.CYCLIC`` marks inputs
  quoted in ordinary-frequency units; ``convert_units`` moves between the two
  (cyclic -> angular multiplies by 2*pi).
* A Gaussian one-photon envelope is
      g(t) = amplitude * exp(-(t - delay)^2 / (2 * width^2)),
  so any two-photon quantity built from a product of two such envelopes decays
  as exp(-(t - delay)^2 / width^2).  ``envelope`` exposes both shapes through
  its ``kind`` argument and the same ``width_ratio`` number applies to either.
* A rectangular envelope has value ``amplitude`` on
  [delay - width/2, delay + width/2] and zero outside.

The signs of the quadratic quantities follow from adiabatic elimination of the
intermediate states m, l, f with the detuning orientation Omega_mn = -Omega_gm
and Omega_ln = -Omega_gl:

    r_1 = -2 a g_1^2 / Omega_gm          two-photon pump rate
    s_1 = (a^2 - 1) |g_1|^2 / Omega_gm   pump self-shift
    r_2 = -2 g_2 g_mix / Omega_gl        four-wave mixing rate (difference)
    s_2 = |g_2|^2 / Omega_gl             probe shift
    s_mix = |g_mix|^2 / Omega_ln         generated-field shift
    s = |g_St|^2 / Omega_nf              Stark-control shift

In sum-frequency mixing the probe is absorbed rather than emitted along the
conversion pathway, which conjugates the probe envelope inside r_2.  The
parameter ``a`` is the ratio of the two pump-transition moments; it sets the
self-chirp ratio beta = s_1 / |r_1| = (1 - a^2) / (2 a) for pump-only drives.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConfigurationError",
    "NumericalFailure",
    "UnitConvention",
    "PulseShape",
    "PulseSpec",
    "ZERO_PULSE",
    "ProbeTerms",
    "DriveConfig",
    "MediumSpec",
    "TwoLevelState",
    "TwoPhotonQuantities",
    "envelope",
    "two_photon_quantities",
    "convert_units",
    "drive_from_medium",
]

_STATE_SLACK = 1e-6


class ConfigurationError(ValueError):
    """Raised when inputs are structurally invalid before any integration."""


class NumericalFailure(RuntimeError):
    """Raised when an integration produces non-finite values or stalls.

    Attributes
    ----------
    where : float or str
        Time of failure for time integrations, or the name of the offending
        quantity when a step-size limit is hit.
    """

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class UnitConvention(enum.Enum):
    ANGULAR = "angular"
    CYCLIC = "cyclic"


class PulseShape(enum.Enum):
    GAUSSIAN = "gaussian"
    RECTANGULAR = "rectangular"


def convert_units(value, src: UnitConvention, dst: UnitConvention):
    """Convert a rate (or array of rates) between angular and cyclic units."""
    if not isinstance(src, UnitConvention) or not isinstance(dst, UnitConvention):
        raise ConfigurationError("src and dst must be UnitConvention members")
    if src is dst:
        return value
    if src is UnitConvention.CYCLIC:
        return value * (2.0 * math.pi)
    return value / (2.0 * math.pi)


@dataclass(frozen=True)
class PulseSpec:
    """One pulse: shape, peak amplitude, width and centre, all in tau_1 units.

    ``amplitude`` is the peak of whatever quantity the pulse describes (a
    one-photon envelope for propagation inputs, a two-photon rate or shift for
    reduced-model drives).  ``width_ratio`` is the 1/e half-width of the
    corresponding two-photon quantity divided by tau_1.
    """

    shape: PulseShape = PulseShape.GAUSSIAN
    amplitude: float = 0.0
    width_ratio: float = 1.0
    delay: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ConfigurationError(
                f"pulse amplitude must be non-negative, got {self.amplitude}"
            )
        if not self.width_ratio > 0.0:
            raise ConfigurationError(
                f"pulse width_ratio must be positive, got {self.width_ratio}"
            )
        if not (math.isfinite(self.amplitude) and math.isfinite(self.width_ratio)
                and math.isfinite(self.delay)):
            raise ConfigurationError("pulse parameters must be finite")


ZERO_PULSE = PulseSpec(amplitude=0.0)


def envelope(pulse: PulseSpec, t, kind: str = "one_photon"):
    """Evaluate a pulse envelope at time ``t`` (scalar or array).

    ``kind`` selects the Gaussian normalisation: ``"one_photon"`` decays as
    exp(-x^2 / (2 w^2)) and ``"two_photon"`` as exp(-x^2 / w^2), matching a
    squared one-photon envelope of the same width_ratio.  Rectangular pulses
    are identical under both kinds.
    """
    if kind not in ("one_photon", "two_photon"):
        raise ConfigurationError(f"unknown envelope kind {kind!r}")
    x = np.asarray(t, dtype=float) - pulse.delay
    w = pulse.width_ratio
    if pulse.shape is PulseShape.RECTANGULAR:
        out = np.where(np.abs(x) <= 0.5 * w, pulse.amplitude, 0.0)
    else:
        denom = 2.0 * w * w if kind == "one_photon" else w * w
        out = pulse.amplitude * np.exp(-(x * x) / denom)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out)
    return out


def pulse_edges(pulse: PulseSpec):
    """Return the discontinuity times of a pulse (empty for Gaussian)."""
    if pulse.shape is PulseShape.RECTANGULAR and pulse.amplitude != 0.0:
        half = 0.5 * pulse.width_ratio
        return (pulse.delay - half, pulse.delay + half)
    return ()


def scalar_sampler(pulse: PulseSpec, kind: str = "one_photon"):
    """Return a float-only evaluator for one pulse, for integrator hot loops.

    ``envelope`` goes through numpy on every call, which dominates the cost of
    scalar right-hand-side evaluations; the closure returned here sticks to
    ``math`` primitives.
    """
    amp = pulse.amplitude
    delay = pulse.delay
    w = pulse.width_ratio
    if amp == 0.0:
        return lambda t: 0.0
    if pulse.shape is PulseShape.RECTANGULAR:
        lo, hi = delay - 0.5 * w, delay + 0.5 * w

        def rect(t: float) -> float:
            return amp if lo <= t <= hi else 0.0

        return rect
    denom = 2.0 * w * w if kind == "one_photon" else w * w

    def gauss(t: float) -> float:
        x = t - delay
        return amp * math.exp(-(x * x) / denom)

    return gauss


@dataclass(frozen=True)
class ProbeTerms:
    """Optional probe and generated-field contributions to the reduced drive.

    All three pulses are two-photon quantities (rates and shifts), so they use
    the ``"two_photon"`` envelope kind.  ``r2_sign`` carries the sign of the
    four-wave mixing rate relative to the pump rate, since PulseSpec amplitudes
    are non-negative by construction.
    """

    r2: PulseSpec = ZERO_PULSE
    s2: PulseSpec = ZERO_PULSE
    smix: PulseSpec = ZERO_PULSE
    r2_sign: float = 1.0


@dataclass(frozen=True)
class DriveConfig:
    """Reduced-model drive: pump rate, Stark pulse, static detuning.

    ``delta`` is the static two-photon detuning Omega_gn * tau_1.  ``pump``
    holds the two-photon Rabi rate R (peak ``amplitude``), ``stark`` the
    control-shift peak S with its own width and delay.  ``beta`` scales the
    pump self-shift: s_1(t) = beta * |r_1(t)|.  ``units`` tags how the numbers
    are quoted; they are converted to angular when the drive is evaluated.
    """

    delta: float = 0.0
    pump: PulseSpec = field(default_factory=lambda: PulseSpec(amplitude=1.0))
    stark: PulseSpec = ZERO_PULSE
    beta: float = 0.0
    probe_terms: ProbeTerms | None = None
    units: UnitConvention = UnitConvention.ANGULAR

    def to_angular(self) -> "DriveConfig":
        """Return an equivalent config with all rates in angular units."""
        if self.units is UnitConvention.ANGULAR:
            return self
        k = 2.0 * math.pi

        def scale(p: PulseSpec) -> PulseSpec:
            return PulseSpec(p.shape, p.amplitude * k, p.width_ratio, p.delay)

        probe = None
        if self.probe_terms is not None:
            probe = ProbeTerms(
                r2=scale(self.probe_terms.r2),
                s2=scale(self.probe_terms.s2),
                smix=scale(self.probe_terms.smix),
                r2_sign=self.probe_terms.r2_sign,
            )
        return DriveConfig(
            delta=self.delta * k,
            pump=scale(self.pump),
            stark=scale(self.stark),
            beta=self.beta,
            probe_terms=probe,
            units=UnitConvention.ANGULAR,
        )

    def rates(self, t):
        """Evaluate (r_drive(t), omega_st(t), r1_abs(t)) in angular units.

        r_drive is the total coherent rate r_1 + r_2 and omega_st the total
        quadratic shift s + s_1 + s_2 + s_mix.  Arrays broadcast over ``t``.
        """
        cfg = self.to_angular()
        r1 = envelope(cfg.pump, t, kind="two_photon")
        shift = envelope(cfg.stark, t, kind="two_photon") + cfg.beta * np.abs(r1)
        drive = np.asarray(r1, dtype=float).copy()
        if cfg.probe_terms is not None:
            pt = cfg.probe_terms
            drive = drive + pt.r2_sign * envelope(pt.r2, t, kind="two_photon")
            shift = shift + envelope(pt.s2, t, kind="two_photon")
            shift = shift + envelope(pt.smix, t, kind="two_photon")
        return drive, shift, np.abs(r1)


class MixingMode(enum.Enum):
    DIFFERENCE = "difference"
    SUM = "sum"


@dataclass(frozen=True)
class MediumSpec:
    """Medium constants for conversion runs, all in angular tau_1 units.

    ``det_gm``, ``det_ln`` and ``det_nf`` are the one-photon detunings
    Omega_gm, Omega_ln and Omega_nf.  The near-two-photon-resonance identities
    Omega_mn = -Omega_gm and Omega_gl = -Omega_ln are applied wherever the
    complementary detunings appear.  K1, K2 and Kminus are the propagation
    constants of pump, probe and converted field relative to the converted
    field's resonant absorption scale.

    The defaults are the mercury-vapour calibration.  Its detunings are quoted
    in cyclic units (-2.4e5, -2.2e4 and 8.9e3 times 1/tau_1) and carry a 2*pi
    here, matching one-photon amplitudes loaded the same way.
    """

    a: float = 0.345
    K1: float = 0.67
    K2: float = 0.04
    Kminus: float = 1.0
    det_gm: float = -2.0 * math.pi * 2.4e5
    det_ln: float = -2.0 * math.pi * 2.2e4
    det_nf: float = 2.0 * math.pi * 8.9e3
    mixing_mode: MixingMode = MixingMode.DIFFERENCE

    def __post_init__(self):
        for name in ("det_gm", "det_ln", "det_nf"):
            if getattr(self, name) == 0.0:
                raise ConfigurationError(
                    f"{name} must be non-zero: the adiabatic elimination of the "
                    "intermediate state divides by it"
                )

    def with_mode(self, mode: MixingMode) -> "MediumSpec":
        return MediumSpec(self.a, self.K1, self.K2, self.Kminus,
                          self.det_gm, self.det_ln, self.det_nf, mode)


@dataclass(frozen=True)
class TwoPhotonQuantities:
    """Instantaneous rates and shifts derived from one-photon envelopes."""

    r1: complex
    r2: complex
    s: float
    s1: float
    s2: float
    smix: float

    @property
    def omega_st(self) -> float:
        """Total quadratic shift, the sum of the four contributions."""
        return self.s + self.s1 + self.s2 + self.smix


def two_photon_quantities(g1, g2, gmix, gst, medium: MediumSpec) -> TwoPhotonQuantities:
    """Collapse one-photon envelopes into the reduced-model drive quantities.

    Envelopes may be complex.  The shift terms depend only on magnitudes and
    are always real; the rates keep their phases.  In sum mixing the probe
    enters r_2 conjugated.
    """
    m = medium
    omega_mn = -m.det_gm
    omega_gl = -m.det_ln
    r1 = -2.0 * m.a * g1 * g1 / m.det_gm
    s1 = (m.a * m.a - 1.0) * abs(g1) ** 2 / m.det_gm
    if m.mixing_mode is MixingMode.SUM:
        r2 = -2.0 * np.conj(g2) * gmix / omega_gl
    else:
        r2 = -2.0 * g2 * gmix / omega_gl
    s2 = abs(g2) ** 2 / omega_gl
    smix = abs(gmix) ** 2 / m.det_ln
    s = abs(gst) ** 2 / m.det_nf
    return TwoPhotonQuantities(r1=r1, r2=r2, s=float(s), s1=float(s1),
                               s2=float(s2), smix=float(smix))


@dataclass(frozen=True)
class TwoLevelState:
    """Population of the target state and the g-n coherence envelope.

    For a closed pure-state evolution |r_gn|^2 = r_n (1 - r_n), so r_n is
    bounded by [0, 1] and |r_gn| by 1/2.  Construction allows a small slack
    above those bounds for round-off from integrators.
    """

    rn: float
    rgn: complex

    def __post_init__(self):
        if not (-_STATE_SLACK <= self.rn <= 1.0 + _STATE_SLACK):
            raise ConfigurationError(f"population out of range: rn={self.rn}")
        if abs(self.rgn) > 0.5 + _STATE_SLACK:
            raise ConfigurationError(
                f"coherence beyond maximal value: |rgn|={abs(self.rgn)}"
            )

    @property
    def coherence(self) -> float:
        return abs(self.rgn)

    def purity_defect(self) -> float:
        """|r_gn|^2 - r_n (1 - r_n); zero for a pure state."""
        return abs(self.rgn) ** 2 - self.rn * (1.0 - self.rn)


def drive_from_medium(g1: PulseSpec, gst: PulseSpec, medium: MediumSpec,
                      delta: float = 0.0,
                      g2: PulseSpec | None = None,
                      gmix: PulseSpec | None = None) -> DriveConfig:
    """Build a reduced DriveConfig from one-photon pulse peaks and a medium.

    The pump and Stark inputs are one-photon envelopes (Gaussian widths in the
    one-photon convention); the returned DriveConfig carries the corresponding
    two-photon rates and shifts with the same width_ratio numbers.  Probe and
    generated envelopes, when given, populate ``probe_terms`` with the mixing
    rate and the two small shifts; their product width is combined as
    1/w^2 = 1/(2 w2^2) + 1/(2 wm^2).
    """
    if g1.shape is not PulseShape.GAUSSIAN or gst.shape is not PulseShape.GAUSSIAN:
        raise ConfigurationError("drive_from_medium expects Gaussian envelopes")
    q = two_photon_quantities(g1.amplitude, 0.0, 0.0, gst.amplitude, medium)
    r1_peak = float(np.real(q.r1))
    beta = 0.0 if r1_peak == 0.0 else q.s1 / abs(r1_peak)
    pump = PulseSpec(PulseShape.GAUSSIAN, abs(r1_peak), g1.width_ratio, g1.delay)
    stark = PulseSpec(PulseShape.GAUSSIAN, abs(q.s), gst.width_ratio, gst.delay)
    if q.s < 0.0:
        raise ConfigurationError(
            "negative Stark-control shift cannot be represented as a pulse "
            "amplitude; fold its sign into delta instead"
        )
    probe = None
    if g2 is not None and gmix is not None and g2.amplitude * gmix.amplitude != 0.0:
        qq = two_photon_quantities(0.0, g2.amplitude, gmix.amplitude, 0.0, medium)
        r2_peak = float(np.real(qq.r2))
        w_prod = math.sqrt(1.0 / (0.5 / g2.width_ratio**2 + 0.5 / gmix.width_ratio**2))
        mid = 0.5 * (g2.delay + gmix.delay)
        probe = ProbeTerms(
            r2=PulseSpec(PulseShape.GAUSSIAN, abs(r2_peak), w_prod, mid),
            s2=PulseSpec(PulseShape.GAUSSIAN, abs(qq.s2), g2.width_ratio, g2.delay)
            if qq.s2 >= 0.0 else ZERO_PULSE,
            smix=PulseSpec(PulseShape.GAUSSIAN, abs(qq.smix), gmix.width_ratio,
                           gmix.delay) if qq.smix >= 0.0 else ZERO_PULSE,
            r2_sign=math.copysign(1.0, r2_peak) if r2_peak != 0.0 else 1.0,
        )
        if qq.s2 < 0.0 or qq.smix < 0.0:
            # Negative shift contributions are kept out of probe_terms rather
            # than silently flipped; they matter only at order |g2|^2 and the
            # caller can fold them into delta when needed.
            probe = ProbeTerms(r2=probe.r2, r2_sign=probe.r2_sign)
    return DriveConfig(delta=delta, pump=pump, stark=stark, beta=beta,
                       probe_terms=probe, units=UnitConvention.ANGULAR)
