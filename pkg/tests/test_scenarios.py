import math

import numpy as np
import pytest

from scrapfwm.dynamics import evolve
from scrapfwm.model import ConfigurationError, MixingMode, PulseShape
from scrapfwm.scenarios import (
    HgCalibration,
    absorption_scale,
    entrance_fields,
    preset,
    preset_names,
)

K = 2.0 * math.pi


def test_absorption_scale_hg_anchor():
    # Frozen by tests/oracles/derive_reference_values.py:
    #   alpha_minus = 0.67 * 0.96 * 1e16 / 4, times tau_1 / 2pi.
    scale = absorption_scale(HgCalibration(), 1.0e16)
    assert scale.alpha_minus == pytest.approx(1.608e15, rel=1e-12)
    assert scale.scaled_depth_per_cm == pytest.approx(767763.4454753031, rel=1e-12)
    assert scale.Z_to_cm(1.0e6) == pytest.approx(1.302484516413679, rel=1e-12)
    assert scale.cm_to_Z(scale.Z_to_cm(1.0e6)) == pytest.approx(1.0e6, rel=1e-12)


def test_absorption_scale_linear_in_density():
    lo = absorption_scale(HgCalibration(), 1.0e16)
    hi = absorption_scale(HgCalibration(), 2.0e16)
    assert hi.Z_to_cm(1.0e6) == pytest.approx(0.5 * lo.Z_to_cm(1.0e6))


def test_absorption_scale_rejects_bad_density():
    with pytest.raises(ConfigurationError):
        absorption_scale(HgCalibration(), 0.0)


def test_calibration_wavelength_closure():
    # Defaults close; a 0.65 percent tampered mixing wavelength does not.
    HgCalibration()
    with pytest.raises(ConfigurationError, match="lambda_minus_nm"):
        HgCalibration(lambda_minus_nm=181.0)


def test_preset_lookup_unknown_name_lists_presets():
    with pytest.raises(ConfigurationError, match="fig4_solid"):
        preset("fig4_sold")


def test_preset_fig4_solid():
    p = preset("fig4_solid")
    assert p.drive.delta == 0.0
    assert p.drive.pump.amplitude == pytest.approx(0.886)
    assert p.drive.stark.amplitude == 0.0
    assert p.drive.beta == 0.0
    assert p.medium is None


def test_preset_fig6_a_solid():
    p = preset("fig6_a_solid")
    d = p.drive
    assert d.delta == pytest.approx(24.0)
    assert d.pump.amplitude == pytest.approx(30.0)
    assert d.stark.amplitude == pytest.approx(75.0)
    assert d.stark.delay == pytest.approx(1.7)
    assert d.stark.width_ratio == pytest.approx(1.6)
    assert d.beta == 0.0


def test_preset_fig9_solid():
    d = preset("fig9_solid").drive
    assert d.beta == pytest.approx(-0.5)
    assert d.stark.amplitude == pytest.approx(15.0)
    assert d.delta == pytest.approx(13.65)
    assert d.stark.delay == pytest.approx(1.6)
    assert d.pump.amplitude == pytest.approx(30.0)


def test_preset_fig3_uses_rectangular_pump():
    p = preset("fig3_dashed")
    assert p.drive.pump.shape is PulseShape.RECTANGULAR
    assert p.drive.pump.amplitude == pytest.approx(2.0 * math.pi / 5.0)
    assert p.drive.delta == pytest.approx(1.259)
    assert p.grid.t_start == 0.0 and p.grid.t_end == 10.0


def test_preset_fig11_solid_reduced_drive():
    # Frozen by tests/oracles/derive_reference_values.py: the cyclic peaks
    # G01 = 910 and G0st = 325 give angular R = 14.9589 and S = 74.5687.
    p = preset("fig11_solid")
    assert p.medium is not None
    assert p.pump_field.amplitude == pytest.approx(K * 910.0)
    assert p.stark_field.amplitude == pytest.approx(K * 325.0)
    d = p.drive
    assert d.pump.amplitude == pytest.approx(14.95892903951682, rel=1e-12)
    assert d.stark.amplitude == pytest.approx(74.56870203043188, rel=1e-12)
    assert d.stark.delay == pytest.approx(-3.0)
    assert d.beta == pytest.approx(1.276775362318841, rel=1e-12)
    assert d.delta == pytest.approx(K * 0.5)


def test_conversion_presets_carry_run_parameters():
    a = preset("fig17a")
    assert a.z_end == 3.0e6
    assert a.probe_field.amplitude == pytest.approx(K * 1.6e-2)
    assert a.probe_field.delay == pytest.approx(5.0)
    assert a.medium.mixing_mode is MixingMode.DIFFERENCE
    assert 1.5e6 in a.snapshot_depths

    b = preset("fig17b")
    assert b.medium.mixing_mode is MixingMode.SUM

    c = preset("fig17c")
    assert c.probe_field.delay == pytest.approx(0.0)
    assert c.drive.delta == pytest.approx(K * 5.6)

    assert preset("fig20").medium.K2 == pytest.approx(0.4)
    assert preset("fig19_solid").z_end == 1.0e6


def test_registry_covers_all_figures():
    names = preset_names()
    for i in range(3, 21):
        stem = f"fig{i}"
        hits = [n for n in names
                if n.startswith(stem) and not n[len(stem):len(stem) + 1].isdigit()]
        assert hits, stem


def test_entrance_fields_layout():
    s = entrance_fields(preset("fig17a"))
    t = s.grid
    assert t.size == 512
    assert np.max(np.abs(s.g1)) == pytest.approx(K * 910.0, rel=1e-3)
    ipk = int(np.argmax(np.abs(s.g2)))
    assert t[ipk] == pytest.approx(5.0, abs=0.05)
    assert np.all(s.gmix == 0.0)

    with pytest.raises(ConfigurationError):
        entrance_fields(preset("fig4_solid"))


def test_presets_evolve_smoke():
    # A representative preset from each regime family integrates cleanly and
    # keeps the state pure.
    for name in ("fig4_dashed", "fig8_c_solid", "fig11_dashed"):
        p = preset(name)
        traj = evolve(p.drive, p.grid, tol=1e-8)
        assert float(np.max(np.abs(traj.purity_defect()))) < 1e-6, name
