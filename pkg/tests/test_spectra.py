import math

import numpy as np
import pytest

from opendicke.params import DickeParams, PhaseTag, critical_coupling
from opendicke.spectra import (
    PoleError,
    default_nu_grid,
    fluorescence,
    homodyne,
    homodyne_quadratic_form,
    optimal_squeezing,
    transfer_functions,
    transmission,
)

P = DickeParams(omega=1.0, omega0=1.0, kappa=0.2)
LAM_C = critical_coupling(P)


def test_transmission_uncoupled_is_cavity_lorentzian():
    nu = np.linspace(0.0, 2.0, 401)
    ser = transmission(P, 0.0, nu)
    expected = 1.0 / (1.0 + ((nu - P.omega) / P.kappa) ** 2)
    assert np.max(np.abs(ser.values - expected)) < 1e-12
    assert not ser.pole_flags.any()


def test_fluorescence_symmetric_on_resonance():
    nu = np.linspace(0.0, 4.0, 501)[1:]
    for lam in (0.2, 0.4, 0.6):
        plus = fluorescence(P, lam, nu).values
        minus = fluorescence(P, lam, -nu).values
        assert np.max(np.abs(plus - minus)) < 1e-10


def test_fluorescence_coherent_weight():
    nu = np.linspace(-2, 2, 11)
    assert fluorescence(P, 0.3, nu).coherent_weight == 0.0
    lam = 2 * LAM_C
    mu = 0.25
    expected = (
        2 * P.kappa * lam**2 / (P.omega**2 + P.kappa**2) * (1 - mu**2)
    )
    assert fluorescence(P, lam, nu).coherent_weight == pytest.approx(expected)


def test_central_peak_grows_toward_threshold():
    vals = []
    for k in range(2, 6):
        lam = LAM_C * (1 - 10.0**-k)
        vals.append(float(fluorescence(P, lam, np.array([0.0])).values[0]))
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_closed_and_solve_methods_agree():
    nu = np.linspace(-3, 3, 101)
    for lam, phase in ((0.3, PhaseTag.NORMAL), (0.8, PhaseTag.SUPERRADIANT)):
        tf_c = transfer_functions(P, lam, phase, method="closed")
        tf_s = transfer_functions(P, lam, phase, method="solve")
        assert np.max(np.abs(tf_c.A(nu) - tf_s.A(nu))) < 1e-9
        assert np.max(np.abs(tf_c.B(nu) - tf_s.B(nu))) < 1e-9


def test_output_commutator_preserved():
    nu = np.linspace(-5, 5, 201)
    for lam, phase in ((0.0, PhaseTag.NORMAL), (0.3, PhaseTag.NORMAL),
                       (0.49, PhaseTag.NORMAL), (0.8, PhaseTag.SUPERRADIANT)):
        tf = transfer_functions(P, lam, phase)
        defect = np.abs(tf.F(nu)) ** 2 - np.abs(tf.G(nu)) ** 2 - 1.0
        assert np.max(np.abs(defect)) < 1e-10


def test_homodyne_bounded_below_by_vacuum():
    nu = np.linspace(-4, 4, 2001)
    thetas = np.linspace(0, math.pi, 64, endpoint=False)
    for lam in (0.4, 0.49, 0.6):
        for theta in thetas:
            ser = homodyne(P, lam, float(theta), nu)
            assert np.nanmin(ser.values) >= -0.25 - 1e-12


def test_homodyne_vacuum_input_is_flat_zero():
    nu = np.linspace(-3, 3, 301)
    for theta in (0.0, 0.7, 1.4):
        ser = homodyne(P, 0.0, theta, nu)
        assert np.max(np.abs(ser.values)) < 1e-12


def test_orthogonal_quadratures_sum_nonnegative():
    # S_theta + S_(theta+pi/2) = (|F|^2 + |G(-nu)|^2 - 1)/2 = |G|-terms >= 0
    nu = np.linspace(-3, 3, 301)
    for lam in (0.3, 0.49, 0.7):
        for theta in (0.0, 0.5, 1.1):
            a = homodyne(P, lam, theta, nu).values
            b = homodyne(P, lam, theta + math.pi / 2, nu).values
            assert np.nanmin(a + b) >= -1e-12


def test_optimal_squeezing_matches_brute_force():
    thetas = np.linspace(0, math.pi, 4001, endpoint=False)
    for lam, phase in ((0.3, PhaseTag.NORMAL), (0.49, PhaseTag.NORMAL),
                       (0.8, PhaseTag.SUPERRADIANT)):
        theta_min, s_min = optimal_squeezing(P, lam, phase)
        tf = transfer_functions(P, lam, phase)
        vals = 0.25 * (
            np.abs(homodyne_quadratic_form(tf, thetas, np.array(0.0))) ** 2 - 1.0
        )
        i = int(np.argmin(vals))
        assert s_min <= vals[i] + 1e-12
        assert s_min == pytest.approx(vals[i], abs=1e-6)
        d = abs(theta_min - thetas[i]) % math.pi
        assert min(d, math.pi - d) < 2 * math.pi / len(thetas)


def test_optimal_squeezing_uncoupled_flat():
    theta, s = optimal_squeezing(P, 0.0)
    assert theta is None
    assert s == 0.0


def test_optimal_squeezing_diverges_at_threshold():
    with pytest.raises(PoleError):
        optimal_squeezing(P, LAM_C)


def test_real_poles_flagged_at_threshold():
    # at lambda = lambda_c the drift matrix has a zero eigenvalue: nu = 0 pole
    nu = np.linspace(-1, 1, 201)  # includes 0
    ser = fluorescence(P, LAM_C, nu)
    assert ser.pole_flags.any()
    assert np.isnan(ser.values[ser.pole_flags]).all()
    assert np.isfinite(ser.values[~ser.pole_flags]).all()


def test_default_nu_grid_spans_branches():
    g = default_nu_grid(P, 0.3, PhaseTag.NORMAL)
    assert g[0] == -g[-1]
    assert g[-1] == pytest.approx(3 * P.omega0)
    g_sr = default_nu_grid(P, 2 * LAM_C, PhaseTag.SUPERRADIANT)
    assert g_sr[-1] == pytest.approx(12 * P.omega0)
