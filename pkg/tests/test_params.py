import math

import pytest

from opendicke.params import (
    BalanceError,
    DickeParams,
    RamanPhysicalParams,
    critical_coupling,
    critical_window,
    effective_params,
    mu_tilde,
    to_dicke,
    validate_regime,
    PhaseTag,
)

TWO_PI = 2 * math.pi

# Feasibility numbers: N = 1e6 atoms, g_r/2pi = 50 kHz, Omega_r/Delta_r = 0.005,
# gamma/2pi = 6 MHz, with the second channel chosen exactly balanced.
RAMAN = RamanPhysicalParams(
    g_r=TWO_PI * 50e3,
    g_s=TWO_PI * 50e3,
    Omega_r=0.005 * TWO_PI * 100e6,
    Omega_s=0.005 * TWO_PI * 100e6,
    Delta_r=TWO_PI * 100e6,
    Delta_s=TWO_PI * 100e6,
    kappa=TWO_PI * 1e6,
    N=1e6,
    gamma=TWO_PI * 6e6,
    omega1=TWO_PI * 10e6,
)


def test_effective_coupling_is_125_khz():
    eff = effective_params(RAMAN)
    assert eff.lambda_r == pytest.approx(TWO_PI * 125e3, abs=1e-6)
    assert eff.lambda_r == eff.lambda_s
    assert eff.delta == 0.0


def test_to_dicke_balanced_channels():
    d = to_dicke(RAMAN)
    assert d.lam == pytest.approx(TWO_PI * 125e3, abs=1e-6)
    assert d.omega == pytest.approx(RAMAN.N * RAMAN.g_r**2 / RAMAN.Delta_r)
    assert d.omega0 == pytest.approx(TWO_PI * 10e6)


def test_to_dicke_rejects_unbalanced_channels():
    bad = RamanPhysicalParams(
        g_r=RAMAN.g_r, g_s=1.01 * RAMAN.g_s,
        Omega_r=RAMAN.Omega_r, Omega_s=RAMAN.Omega_s,
        Delta_r=RAMAN.Delta_r, Delta_s=RAMAN.Delta_s,
        kappa=RAMAN.kappa, N=RAMAN.N,
    )
    with pytest.raises(BalanceError) as exc:
        to_dicke(bad)
    assert exc.value.residual_dispersive != 0.0


def test_spontaneous_rate_estimate():
    report = validate_regime(RAMAN)
    # (1/4) gamma (Omega_r/Delta_r)^2 with the numbers above is 37.5 Hz
    assert report.spontaneous_rate / TWO_PI == pytest.approx(37.5, rel=1e-9)
    assert report.spontaneous_rate / TWO_PI <= 40.0


def test_regime_report_ratios():
    report = validate_regime(RAMAN, margin=10.0)
    by_name = {c.name: c for c in report.checks}
    assert by_name["|Delta_r|/Omega_r"].ratio == pytest.approx(200.0)
    assert by_name["|Delta_r|/gamma"].passed


def test_critical_coupling_canonical_point():
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.2)
    assert critical_coupling(p) == pytest.approx(0.509902, abs=5e-5)


def test_critical_coupling_lossless_resonant():
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.0)
    assert critical_coupling(p) == pytest.approx(0.5, abs=1e-15)


def test_critical_window_values():
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.2)
    w = critical_window(p)
    # exact location where the photonic pair becomes real:
    # lambda' = sqrt(((omega0^2 - kappa^2/4)^2 / omega0^2 + kappa^2)) / 2
    lam_p_exact = 0.5 * math.sqrt((1 - 0.04 / 4) ** 2 + 0.04)
    assert w.lambda_prime_numeric == pytest.approx(lam_p_exact, abs=1e-9)
    assert w.lambda_prime_numeric == pytest.approx(0.5050, abs=1e-3)
    assert w.lambda_double_prime_numeric == pytest.approx(0.5124, abs=1e-3)
    # closed-form approximations track the numeric values
    assert w.lambda_prime_closed == pytest.approx(w.lambda_prime_numeric, abs=2e-4)
    assert w.lambda_double_prime_closed == pytest.approx(
        w.lambda_double_prime_numeric, abs=2e-4
    )
    assert w.lambda_prime_numeric < w.lambda_c < w.lambda_double_prime_numeric


def test_critical_window_collapses_without_loss():
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.0)
    w = critical_window(p)
    assert w.lambda_prime_numeric == w.lambda_c == w.lambda_double_prime_numeric


def test_mu_tilde():
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.2)
    lam_c = critical_coupling(p)
    assert mu_tilde(p, 0.3, PhaseTag.NORMAL) == 1.0
    assert mu_tilde(p, 2 * lam_c, PhaseTag.SUPERRADIANT) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        mu_tilde(p, 0.9 * lam_c, PhaseTag.SUPERRADIANT)


def test_parameter_validation():
    with pytest.raises(ValueError):
        DickeParams(omega=-1.0, omega0=1.0, kappa=0.2)
    with pytest.raises(ValueError):
        DickeParams(omega=1.0, omega0=1.0, kappa=-0.1)
    with pytest.raises(ValueError):
        RamanPhysicalParams(
            g_r=1, g_s=1, Omega_r=1, Omega_s=1, Delta_r=0.0, Delta_s=1,
            kappa=0, N=10,
        )
