import numpy as np
import pytest

from scrapfwm.metrics import (
    eps_ph,
    photon_weights,
    shape_distance,
    w_ph_max,
)
from scrapfwm.model import ConfigurationError, MediumSpec
from scrapfwm.propagation import FieldSlice

HG = MediumSpec()


def _gauss_slice(grid, a1=1.0, a2=0.5, am=0.0):
    return FieldSlice(
        grid=grid,
        g1=a1 * np.exp(-grid ** 2 / 2.0),
        g2=a2 * np.exp(-(grid - 1.0) ** 2 / 2.0),
        gmix=am * np.exp(-(grid - 1.0) ** 2 / 2.0),
    )


def test_photon_weights_hg():
    # Reference: tests/oracles/derive_reference_values.py (photon weights)
    w = photon_weights(HG)
    assert w["probe"] == 1.0
    assert w["pump"] == pytest.approx(0.05970149253731343, rel=1e-12)
    assert w["generated"] == pytest.approx(0.04, rel=1e-12)


def test_photon_weights_zero_constant():
    with pytest.raises(ConfigurationError):
        photon_weights(MediumSpec(K1=0.0))


def test_eps_ph_identity_and_simple_gain():
    grid = np.linspace(-8.0, 8.0, 801)
    entry = _gauss_slice(grid)
    assert eps_ph(entry, entry, HG) == {"pump": 0.0, "probe": 0.0,
                                        "generated": 0.0}
    # doubling the probe amplitude quadruples its energy: eps = 3 exactly
    out = _gauss_slice(grid, a2=1.0)
    eps = eps_ph(out, entry, HG)
    assert eps["probe"] == pytest.approx(3.0, rel=1e-12)
    assert eps["pump"] == 0.0
    assert eps["generated"] == 0.0


def test_w_ph_max_uses_peaks():
    grid = np.linspace(-8.0, 8.0, 801)
    entry = _gauss_slice(grid)
    # widening a pulse changes energy but not peak power
    out = FieldSlice(grid, entry.g1, 0.5 * np.exp(-(grid - 1.0) ** 2 / 8.0),
                     entry.gmix)
    assert w_ph_max(out, entry, HG)["probe"] == pytest.approx(0.0, abs=1e-12)
    assert eps_ph(out, entry, HG)["probe"] > 0.5


def test_eps_ph_zero_probe_rejected():
    grid = np.linspace(-8.0, 8.0, 801)
    entry = _gauss_slice(grid, a2=0.0)
    with pytest.raises(ConfigurationError):
        eps_ph(entry, entry, HG)


def test_eps_ph_grid_mismatch_rejected():
    a = _gauss_slice(np.linspace(-8.0, 8.0, 801))
    b = _gauss_slice(np.linspace(-8.0, 8.0, 401))
    with pytest.raises(ConfigurationError):
        eps_ph(a, b, HG)


def test_eps_ph_quadrature_stability():
    # the ratio of trapezoidal integrals moves by far less than the criteria
    # tolerances when the sampling is doubled
    vals = []
    for n in (513, 1025):
        grid = np.linspace(-8.0, 8.0, n)
        vals.append(eps_ph(_gauss_slice(grid, a2=1.0),
                           _gauss_slice(grid), HG)["probe"])
    assert abs(vals[1] - vals[0]) / abs(vals[1]) < 1e-3


def test_shape_distance_frozen_gaussian_shift():
    # Reference: tests/oracles/derive_reference_values.py (shape distance)
    x = np.linspace(-10.0, 10.0, 400001)
    d = shape_distance(np.exp(-x * x), np.exp(-((x - 1.0) ** 2)))
    assert d == pytest.approx(0.7303885968490686, rel=1e-12)


def test_shape_distance_normalises_amplitude():
    x = np.linspace(-5.0, 5.0, 2001)
    prof = np.exp(-x * x)
    assert shape_distance(prof, 7.3 * prof) < 1e-12


def test_shape_distance_zero_peak_rejected():
    x = np.linspace(-5.0, 5.0, 101)
    with pytest.raises(ConfigurationError):
        shape_distance(np.exp(-x * x), np.zeros_like(x))
