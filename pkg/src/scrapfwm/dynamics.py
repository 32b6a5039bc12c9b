"""Time evolution of the reduced two-level variables (r_n, r_gn).

The equations of motion in the rotating frame of the two-photon drive are

    d r_n / dt  = Im[(r_1* + r_2*) r_gn]
    d r_gn / dt = -i (Omega_St - Omega_gn) r_gn - i (r_1 + r_2)(r_n - 1/2)

with Omega_St the total quadratic shift and Omega_gn the static two-photon
detuning (``delta`` in DriveConfig).  The initial state is always the pure
ground state, r_n = 0, r_gn = 0; other initial conditions are rejected by
construction because the closed-form bookkeeping (purity, crossing analysis)
assumes them.

The effective detuning seen by the coherence is Omega_St(t) - delta.  A level
crossing happens when the Stark shift sweeps through the static detuning,
which is what converts a plain two-photon pulse into an adiabatic passage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    ConfigurationError,
    DriveConfig,
    NumericalFailure,
    PulseShape,
    TwoLevelState,
    pulse_edges,
    scalar_sampler,
)

__all__ = [
    "TimeGrid",
    "Trajectory",
    "evolve",
    "analytic_rectangular",
    "crossing_times",
    "pi_half_detuning",
    "coherence_stats",
    "DEFAULT_GRID",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid in tau_1 units."""

    t_start: float = -6.0
    t_end: float = 12.0
    n_samples: int = 2001

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ConfigurationError("t_end must exceed t_start")
        if self.n_samples < 2:
            raise ConfigurationError("n_samples must be at least 2")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)


DEFAULT_GRID = TimeGrid()


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution plus the drive seen along the way.

    ``rn`` and ``rgn`` are aligned with ``grid.times``.  ``omega_st`` and
    ``r1_abs`` record the total shift and pump-rate magnitude on the same grid
    when the caller asked for a drive trace.
    """

    grid: TimeGrid
    rn: np.ndarray
    rgn: np.ndarray
    omega_st: np.ndarray | None = None
    r1_abs: np.ndarray | None = None

    @property
    def states(self) -> list[TwoLevelState]:
        return [TwoLevelState(float(p), complex(c))
                for p, c in zip(self.rn, self.rgn)]

    def state(self, i: int) -> TwoLevelState:
        return TwoLevelState(float(self.rn[i]), complex(self.rgn[i]))

    @property
    def coherence(self) -> np.ndarray:
        return np.abs(self.rgn)

    def purity_defect(self) -> np.ndarray:
        return np.abs(self.rgn) ** 2 - self.rn * (1.0 - self.rn)


def _breakpoints(cfg: DriveConfig, grid: TimeGrid) -> list[float]:
    """Interior discontinuity times of the drive, sorted and deduplicated."""
    pts = set()
    pulses = [cfg.pump, cfg.stark]
    if cfg.probe_terms is not None:
        pulses += [cfg.probe_terms.r2, cfg.probe_terms.s2, cfg.probe_terms.smix]
    for p in pulses:
        for e in pulse_edges(p):
            if grid.t_start < e < grid.t_end:
                pts.add(e)
    return sorted(pts)


def evolve(drive: DriveConfig, grid: TimeGrid = DEFAULT_GRID,
           tol: float = 1e-8, with_drive_trace: bool = True) -> Trajectory:
    """Integrate the reduced equations from the pure ground state.

    ``tol`` is the relative tolerance of the adaptive integrator and must lie
    in (0, 1e-3]; the absolute tolerance is two decades tighter.  Rectangular
    pulse edges are integration breakpoints so the stepper never straddles a
    discontinuity.  Raises NumericalFailure naming the time at which the state
    stopped being finite if the integration breaks down.
    """
    if not (isinstance(tol, float) or isinstance(tol, int)):
        raise ConfigurationError("tol must be a number")
    if not (0.0 < tol <= 1e-3):
        raise ConfigurationError(f"tol must lie in (0, 1e-3], got {tol}")
    cfg = drive.to_angular()
    times = grid.times

    pump = scalar_sampler(cfg.pump, "two_photon")
    stark = scalar_sampler(cfg.stark, "two_photon")
    beta = cfg.beta
    delta = cfg.delta
    if cfg.probe_terms is not None:
        pt = cfg.probe_terms
        r2 = scalar_sampler(pt.r2, "two_photon")
        s2 = scalar_sampler(pt.s2, "two_photon")
        smix = scalar_sampler(pt.smix, "two_photon")
        r2_sign = pt.r2_sign
    else:
        r2 = s2 = smix = lambda t: 0.0
        r2_sign = 1.0

    def rhs(t, y):
        r1 = pump(t)
        d = r1 + r2_sign * r2(t)
        det = stark(t) + beta * abs(r1) + s2(t) + smix(t) - delta
        rn, re, im = y
        # r_gn = re + i*im; drive rates are real after unit conversion
        drn = d * im
        dre = det * im
        dim = -det * re - d * (rn - 0.5)
        return (drn, dre, dim)

    segments = [grid.t_start, *_breakpoints(cfg, grid), grid.t_end]
    y = np.zeros(3)
    rn_out = np.empty_like(times)
    re_out = np.empty_like(times)
    im_out = np.empty_like(times)
    filled = np.zeros(times.shape, dtype=bool)

    for a, b in zip(segments[:-1], segments[1:]):
        mask = (times >= a) & (times <= b) & ~filled
        t_eval = times[mask]
        # The segment endpoint is always requested so the next segment starts
        # from the exact boundary state.
        appended = t_eval.size == 0 or t_eval[-1] != b
        t_req = np.append(t_eval, b) if appended else t_eval
        sol = solve_ivp(rhs, (a, b), y, method="DOP853", rtol=tol,
                        atol=tol * 1e-2, t_eval=t_req)
        if not sol.success or not np.all(np.isfinite(sol.y)):
            t_bad = float(sol.t[-1]) if sol.t.size else a
            raise NumericalFailure(
                f"integration lost finiteness near t = {t_bad:.6g}", where=t_bad)
        if t_eval.size:
            vals = sol.y[:, :t_eval.size]
            rn_out[mask] = vals[0]
            re_out[mask] = vals[1]
            im_out[mask] = vals[2]
            filled[mask] = True
        y = sol.y[:, -1]

    if not np.all(filled):
        # Grid points exactly on a segment boundary belong to the earlier
        # segment; anything still missing is a logic error.
        raise NumericalFailure("output grid not fully covered", where=None)

    omega_st = r1_abs = None
    if with_drive_trace:
        _, shift, r1a = cfg.rates(times)
        omega_st = np.asarray(shift, dtype=float)
        r1_abs = np.asarray(r1a, dtype=float)
    return Trajectory(grid=grid, rn=rn_out, rgn=re_out + 1j * im_out,
                      omega_st=omega_st, r1_abs=r1_abs)


def analytic_rectangular(rabi: float, detuning: float, t) -> TwoLevelState:
    """Closed-form state under a constant two-photon rate switched on at t=0.

    ``rabi`` is the constant rate R > 0 and ``detuning`` the effective
    two-photon detuning Omega = Omega_gn - Omega_St.  The generalised rate is
    W = sqrt(R^2 + Omega^2) and

        r_n(t)   = (R^2 / W^2) sin^2(W t / 2)
        r_gn(t)  = -(Omega R / (2 W^2)) (1 - cos W t) + i (R / (2 W)) sin W t

    which conserves purity exactly and depends on the detuning sign only
    through the real part of the coherence.
    """
    if not rabi > 0.0:
        raise ConfigurationError("rabi must be positive")
    w = math.hypot(rabi, detuning)
    wt = w * t
    rn = (rabi / w) ** 2 * math.sin(0.5 * wt) ** 2
    re = -(detuning * rabi) / (2.0 * w * w) * (1.0 - math.cos(wt))
    im = rabi / (2.0 * w) * math.sin(wt)
    return TwoLevelState(rn=rn, rgn=re + 1j * im)


def crossing_times(stark_peak: float, delta: float, delay: float,
                   width: float) -> tuple[float, float] | None:
    """Times where the Gaussian Stark shift equals the static detuning.

    The shift S exp(-((t - delay)/width)^2) crosses ``delta`` twice when the
    two have the same sign and |S| >= |delta|; the roots are
    delay -/+ width sqrt(ln(S/delta)).  Returns None when no crossing exists,
    including the delta = 0 case where the equation has no finite solution.
    """
    if not width > 0.0:
        raise ConfigurationError("width must be positive")
    if delta == 0.0 or stark_peak == 0.0:
        return None
    ratio = stark_peak / delta
    if ratio < 1.0:
        return None
    off = width * math.sqrt(math.log(ratio))
    return (delay - off, delay + off)


def pi_half_detuning(stark_peak: float, delay: float, width: float) -> float:
    """Static detuning placing the first crossing at the pump peak t = 0.

    Setting the early crossing delay - width sqrt(ln(S/delta)) to zero gives
    delta = S exp(-(delay / width)^2).  The passage then happens where the
    pump rate is strongest, and by the second crossing the pump has decayed
    enough that the transfer freezes near one half.
    """
    if not width > 0.0:
        raise ConfigurationError("width must be positive")
    return stark_peak * math.exp(-((delay / width) ** 2))


def coherence_stats(traj: Trajectory) -> dict:
    """Summary numbers for a trajectory.

    Returns max coherence and its time, the final coherence and population,
    and a plateau record when the coherence holds steady after the pump peak.
    The plateau is the longest interval, beginning after the pump maximum,
    over which |r_gn| stays within 5 percent of its local mean; it is
    reported only when it lasts longer than one pump duration.
    """
    coh = np.abs(traj.rgn)
    times = traj.grid.times
    imax = int(np.argmax(coh))
    stats = {
        "max_coh": float(coh[imax]),
        "t_of_max": float(times[imax]),
        "final_coh": float(coh[-1]),
        "final_rn": float(traj.rn[-1]),
        "plateau": None,
    }
    if traj.r1_abs is not None and np.max(traj.r1_abs) > 0.0:
        t_peak = float(times[int(np.argmax(traj.r1_abs))])
    else:
        t_peak = float(times[0])
    after = times >= t_peak
    t_a = times[after]
    c_a = coh[after]
    best = None
    i = 0
    n = t_a.size
    # Greedy scan: grow a window while every sample stays inside the 5 percent
    # band around the window mean, then restart from the break point.
    while i < n:
        j = i + 1
        while j <= n:
            seg = c_a[i:j]
            m = float(np.mean(seg))
            if m <= 0.0:
                break
            if np.any(np.abs(seg - m) > 0.05 * m):
                break
            j += 1
        j -= 1
        if j > i:
            span = t_a[j - 1] - t_a[i]
            if best is None or span > best[0]:
                best = (span, i, j)
        i = max(i + 1, j)
    if best is not None and best[0] > 1.0:
        _, i, j = best
        stats["plateau"] = {
            "t_begin": float(t_a[i]),
            "t_end": float(t_a[j - 1]),
            "level": float(np.mean(c_a[i:j])),
        }
    return stats
