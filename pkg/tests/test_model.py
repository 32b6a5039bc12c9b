import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scrapfwm.model import (
    ConfigurationError,
    MediumSpec,
    MixingMode,
    PulseShape,
    PulseSpec,
    UnitConvention,
    convert_units,
    drive_from_medium,
    envelope,
    two_photon_quantities,
)

HG = MediumSpec()


def test_pulse_validation():
    with pytest.raises(ConfigurationError):
        PulseSpec(amplitude=-1.0)
    with pytest.raises(ConfigurationError):
        PulseSpec(width_ratio=0.0)
    with pytest.raises(ConfigurationError):
        PulseSpec(delay=float("nan"))


def test_envelope_peak_and_kinds():
    p = PulseSpec(amplitude=2.0, width_ratio=1.5, delay=0.7)
    assert envelope(p, 0.7) == pytest.approx(2.0)
    # one_photon decays with 2 w^2, two_photon with w^2
    t = 0.7 + 1.5
    assert envelope(p, t, "one_photon") == pytest.approx(2.0 * math.exp(-0.5))
    assert envelope(p, t, "two_photon") == pytest.approx(2.0 * math.exp(-1.0))
    sq = envelope(p, t, "one_photon") ** 2
    assert sq == pytest.approx(4.0 * envelope(p, t, "two_photon") / 2.0)


def test_rectangular_envelope_support():
    p = PulseSpec(PulseShape.RECTANGULAR, amplitude=3.0, width_ratio=2.0,
                  delay=1.0)
    assert envelope(p, 0.0) == 3.0
    assert envelope(p, 2.0) == 3.0
    assert envelope(p, 2.0001) == 0.0
    assert envelope(p, -0.0001) == 0.0
    # identical under both kinds
    ts = np.linspace(-1.0, 3.0, 41)
    assert np.array_equal(envelope(p, ts, "one_photon"),
                          envelope(p, ts, "two_photon"))


@given(st.floats(-5.0, 5.0), st.floats(0.0, 4.0))
def test_gaussian_symmetric_about_delay(delay, off):
    p = PulseSpec(amplitude=1.3, width_ratio=0.9, delay=delay)
    left = envelope(p, delay - off)
    right = envelope(p, delay + off)
    assert math.isclose(left, right, rel_tol=1e-12, abs_tol=1e-300)


@given(st.floats(-3.0, 3.0))
def test_unit_round_trip(x):
    y = convert_units(x, UnitConvention.CYCLIC, UnitConvention.ANGULAR)
    assert math.isclose(y, 2.0 * math.pi * x, rel_tol=1e-15, abs_tol=1e-15)
    back = convert_units(y, UnitConvention.ANGULAR, UnitConvention.CYCLIC)
    assert math.isclose(back, x, rel_tol=1e-12, abs_tol=1e-15)


def test_two_photon_quantities_hg_values():
    # Reference: tests/oracles/derive_reference_values.py (Hg calibration)
    g1 = 2.0 * math.pi * 910.0
    gst = 2.0 * math.pi * 325.0
    q = two_photon_quantities(g1, 0.0, 0.0, gst, HG)
    assert abs(q.r1) == pytest.approx(14.95892903951682, rel=1e-12)
    assert q.s == pytest.approx(74.56870203043188, rel=1e-12)
    # det_gm < 0 makes the pump rate positive, the self-shift matches
    # beta = (1 - a^2) / (2 a) of the rate magnitude
    assert np.real(q.r1) > 0.0
    assert q.s1 / abs(q.r1) == pytest.approx(1.276775362318841, rel=1e-12)


@given(st.floats(0.1, 3.0), st.floats(-2.0, 2.0))
def test_rate_homogeneity(lam_mag, lam_phase):
    lam = lam_mag * np.exp(1j * lam_phase)
    g1 = 1200.0 + 300.0j
    q0 = two_photon_quantities(g1, 0.0, 0.0, 0.0, HG)
    q1 = two_photon_quantities(lam * g1, 0.0, 0.0, 0.0, HG)
    assert np.isclose(q1.r1, lam * lam * q0.r1, rtol=1e-12)
    assert math.isclose(q1.s1, abs(lam) ** 2 * q0.s1, rel_tol=1e-12)


@given(st.floats(10.0, 500.0), st.floats(10.0, 500.0), st.floats(10.0, 500.0),
       st.floats(10.0, 500.0))
def test_total_shift_is_sum_of_parts(g1, g2, gm, gst):
    q = two_photon_quantities(g1, g2, gm, gst, HG)
    assert math.isclose(q.omega_st, q.s + q.s1 + q.s2 + q.smix, rel_tol=1e-14)


def test_zero_detuning_rejected():
    with pytest.raises(ConfigurationError):
        MediumSpec(det_gm=0.0)
    with pytest.raises(ConfigurationError):
        MediumSpec(det_nf=0.0)


def test_sum_mode_conjugates_probe():
    g2 = 100.0 * np.exp(0.4j)
    gm = 80.0 * np.exp(-0.9j)
    qd = two_photon_quantities(0.0, g2, gm, 0.0, HG)
    qs = two_photon_quantities(0.0, g2, gm, 0.0,
                               HG.with_mode(MixingMode.SUM))
    assert np.isclose(qs.r2, np.conj(g2) / g2 * qd.r2, rtol=1e-12)
    # shifts are phase blind
    assert qs.s2 == pytest.approx(qd.s2)
    assert qs.smix == pytest.approx(qd.smix)


def test_drive_from_medium_hg_anchor():
    g1 = PulseSpec(amplitude=2.0 * math.pi * 910.0)
    gst = PulseSpec(amplitude=2.0 * math.pi * 325.0, width_ratio=1.6,
                    delay=-3.0)
    d = drive_from_medium(g1, gst, HG, delta=math.pi)
    assert d.pump.amplitude == pytest.approx(14.95892903951682, rel=1e-12)
    assert d.stark.amplitude == pytest.approx(74.56870203043188, rel=1e-12)
    assert d.beta == pytest.approx(1.276775362318841, rel=1e-12)
    assert d.stark.delay == -3.0
    assert d.stark.width_ratio == 1.6


def test_cyclic_drive_converts_on_evaluation():
    from scrapfwm.model import DriveConfig
    d = DriveConfig(delta=0.5, pump=PulseSpec(amplitude=15.0),
                    stark=PulseSpec(amplitude=75.0, width_ratio=1.6),
                    units=UnitConvention.CYCLIC)
    drive, shift, r1 = d.rates(0.0)
    assert float(drive) == pytest.approx(2.0 * math.pi * 15.0)
    assert float(shift) == pytest.approx(2.0 * math.pi * 75.0)
    assert float(r1) == pytest.approx(2.0 * math.pi * 15.0)
    ang = d.to_angular()
    assert ang.delta == pytest.approx(math.pi)
