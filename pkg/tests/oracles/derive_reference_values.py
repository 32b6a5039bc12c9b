"""Independent reference values for the test suite.

Everything here is computed without importing the package, using routes that
differ from the implementation: matrix exponentials instead of closed forms,
root finding instead of analytic inversion, direct arithmetic for the medium
calibration.  Run it and paste the printed constants into the tests; each test
carries a comment pointing back here.

    python3 tests/oracles/derive_reference_values.py
"""

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq


def rect_state(rabi, omega, t):
    """Constant-drive state via the amplitude-picture matrix exponential.

    The amplitude Hamiltonian reproducing the reduced equations is
    H = [[-D/2, -R/2], [-R/2, D/2]] with D = -omega (omega = Omega_gn -
    Omega_St).  Starting from the ground state, r_n = |c_n|^2 and
    r_gn = conj(c_g) c_n.
    """
    d = -omega
    h = np.array([[-d / 2.0, -rabi / 2.0], [-rabi / 2.0, d / 2.0]],
                 dtype=complex)
    c = expm(-1j * h * t) @ np.array([1.0, 0.0], dtype=complex)
    return abs(c[1]) ** 2, np.conj(c[0]) * c[1]


def crossing_by_root(s0, delta, delay, width):
    f = lambda t: s0 * np.exp(-(((t - delay) / width) ** 2)) - delta
    t1 = brentq(f, delay - 8.0 * width, delay, xtol=1e-14)
    t2 = brentq(f, delay, delay + 8.0 * width, xtol=1e-14)
    return t1, t2


def main():
    print("# rectangular drive, R = 2*pi/5, t = 2.5 and t = 10 (period end)")
    r = 2.0 * np.pi / 5.0
    for omega in (0.0, 1.259, 2.5):
        rn, rgn = rect_state(r, omega, 2.5)
        print(f"omega={omega}: rn={rn:.16g} re={rgn.real:.16g} im={rgn.imag:.16g}")
    rn, rgn = rect_state(r, 0.0, 10.0)
    print(f"full period: rn={rn:.16g} |rgn|={abs(rgn):.16g}")
    rn, rgn = rect_state(r, 0.0, 2.5 / 2.0)
    print(f"pi/2 point (t=1.25): rn={rn:.16g} |rgn|={abs(rgn):.16g}")

    print("\n# Stark-crossing times by root finding (S=7.4, delta=5, "
          "delay=1.8, width=1.6)")
    t1, t2 = crossing_by_root(7.4, 5.0, 1.8, 1.6)
    print(f"t1={t1:.16g} t2={t2:.16g}")

    print("\n# pi/2 detuning: value for which the early crossing is at 0")
    for s0, delay, width in ((7.4, 1.8, 1.6), (23.0, 1.34, 1.6)):
        f = lambda d: crossing_by_root(s0, d, delay, width)[0]
        d_star = brentq(f, 1e-6 * s0, s0 * (1 - 1e-12), xtol=1e-14)
        print(f"S={s0}, delay={delay}: delta={d_star:.16g}")

    print("\n# Hg calibration: angular two-photon rate and shift from the "
          "one-photon peaks (amplitudes and detunings both quoted cyclic, "
          "so one factor of 2*pi survives in the ratio)")
    g1 = 2.0 * np.pi * 910.0
    gst = 2.0 * np.pi * 325.0
    r_ang = 2.0 * 0.345 * g1 * g1 / (2.0 * np.pi * 2.4e5)
    s_ang = gst * gst / (2.0 * np.pi * 8.9e3)
    print(f"R_angular={r_ang:.16g} S_angular={s_ang:.16g}")
    beta = (1.0 - 0.345 ** 2) / (2.0 * 0.345)
    print(f"beta_self={beta:.16g}")

    print("\n# wavelength closure: 1/l_minus = 2/l_1 - 1/l_2")
    lm = 1.0 / (2.0 / 268.8 - 1.0 / 532.0)
    print(f"lambda_minus={lm:.16g} nm  (quoted 179.8)")
    lp = 1.0 / (2.0 / 268.8 + 1.0 / 532.0)
    print(f"lambda_plus={lp:.16g} nm  (quoted 107.3)")

    print("\n# absorption scale: alpha = 0.67 g_g f N / 4, tau1 = 3 ns, "
          "N = 1e16 cm^-3")
    alpha = 0.67 * 1.0 * 0.96 * 1e16 / 4.0
    depth_per_cm = alpha * 3e-9 / (2.0 * np.pi)
    print(f"alpha={alpha:.16g} /cm/s  Z_per_cm={depth_per_cm:.16g}")
    print(f"z0_cm={1.0 / depth_per_cm:.16g}  Z=1e6 -> {1e6 / depth_per_cm:.16g} cm")

    print("\n# photon weights from Hg constants (K1=0.67, K2=0.04, Km=1)")
    print(f"w1={0.04 / 0.67:.16g} w2=1 wm={0.04 / 1.0:.16g}")

    print("\n# shape distance between unit-peak Gaussians shifted by one width")
    x = np.linspace(-10.0, 10.0, 400001)
    d = np.max(np.abs(np.exp(-x * x) - np.exp(-((x - 1.0) ** 2))))
    print(f"sup_diff={d:.16g}")


if __name__ == "__main__":
    main()
