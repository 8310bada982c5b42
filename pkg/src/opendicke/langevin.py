"""Stochastic simulation of the linearized Langevin system.

Serves as an independent check on the closed-form spectra: the complex
fluctuation modes driven by discretized white noise are integrated with an
exact exponential propagator, and averaged periodograms of the simulated
output field are compared against the analytic spectral densities.

The classical stand-in for the vacuum input is complex white noise xi(t)
with <xi(t) xi*(t')> = delta(t - t') and <xi xi> = 0.  For the simulated
output y = sqrt(2 kappa) c - xi the classical power spectrum satisfies
PSD_y(nu) = 1 + 2 S(nu) (fluorescence) and the quadrature x_theta =
Re(y e^(-i theta)) satisfies PSD_x(nu) = 2 (S_out,theta(nu) + 1/4), which
the estimators below invert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, solve_continuous_lyapunov

from .params import DickeParams, PhaseTag
from . import fluctuations


@dataclass(frozen=True)
class PsdEstimate:
    """Averaged two-sided periodogram with per-frequency standard error."""

    nu: np.ndarray
    psd: np.ndarray
    stderr: np.ndarray

    def at(self, nu0: float, half_width: float = 0.0) -> tuple[float, float]:
        """Band-averaged estimate (value, stderr) around nu0."""
        if half_width <= 0:
            i = int(np.argmin(np.abs(self.nu - nu0)))
            return float(self.psd[i]), float(self.stderr[i])
        sel = np.abs(self.nu - nu0) <= half_width
        n = int(sel.sum())
        return float(self.psd[sel].mean()), float(
            np.sqrt((self.stderr[sel] ** 2).sum()) / n
        )


def _real_drift(M: np.ndarray) -> np.ndarray:
    """Real 4x4 drift for u = (Re c, Im c, Re d, Im d) from the complex M."""
    R = np.zeros((4, 4))
    for j in range(4):
        u = np.zeros(4)
        u[j] = 1.0
        v = np.array(
            [u[0] + 1j * u[1], u[0] - 1j * u[1], u[2] + 1j * u[3], u[2] - 1j * u[3]]
        )
        dv = M @ v
        R[:, j] = [dv[0].real, dv[0].imag, dv[2].real, dv[2].imag]
    return R


def simulate_output(
    p: DickeParams,
    lam: float,
    phase: PhaseTag,
    dt: float = 0.01,
    n_steps: int = 32768,
    n_traj: int = 64,
    burn_in: int = 2000,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, float]:
    """Simulate output-field samples y_n for n_traj independent trajectories.

    Trajectories start from the stationary Gaussian distribution of the
    discretized system (plus a short burn-in), so periodograms estimate
    steady-state spectra.  Returns (y, dt) with y of shape
    (n_traj, n_steps), complex.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    sys = fluctuations.build_system(p, lam, phase)
    R = _real_drift(sys.M)
    Ad = expm(R * dt)
    k = p.kappa
    # stationary covariance of the continuous system seeds the trajectories
    Dr = np.diag([k, k, 0.0, 0.0])
    Sigma = solve_continuous_lyapunov(R, -Dr)
    u = rng.multivariate_normal(np.zeros(4), Sigma, size=n_traj, method="cholesky")

    s2k = np.sqrt(2 * k)
    sig = np.sqrt(dt / 2)
    y = np.empty((n_traj, n_steps), dtype=complex)
    for n in range(burn_in + n_steps):
        W = rng.normal(0.0, sig, size=(n_traj, 2))
        if n >= burn_in:
            m = n - burn_in
            y[:, m] = (
                s2k * (u[:, 0] + 1j * u[:, 1]) - (W[:, 0] + 1j * W[:, 1]) / dt
            )
        noise = np.zeros((n_traj, 4))
        noise[:, 0] = s2k * W[:, 0]
        noise[:, 1] = s2k * W[:, 1]
        u = (u + noise) @ Ad.T
    return y, dt


def _periodogram(series: np.ndarray, dt: float) -> PsdEstimate:
    """Two-sided averaged periodogram of per-trajectory series (rows)."""
    n = series.shape[1]
    window = np.hanning(n)
    norm = (window**2).sum() / n
    spec = np.fft.fft(series * window, axis=1)
    per = (dt / (n * norm)) * np.abs(spec) ** 2
    nu = 2 * np.pi * np.fft.fftfreq(n, d=dt)
    order = np.argsort(nu)
    per = per[:, order]
    mean = per.mean(axis=0)
    stderr = per.std(axis=0, ddof=1) / np.sqrt(series.shape[0])
    return PsdEstimate(nu[order], mean, stderr)


def fluorescence_estimate(y: np.ndarray, dt: float) -> PsdEstimate:
    """Incoherent-spectrum estimate S(nu) = (PSD_y(nu) - 1)/2."""
    est = _periodogram(y, dt)
    return PsdEstimate(est.nu, (est.psd - 1.0) / 2.0, est.stderr / 2.0)


def homodyne_estimate(y: np.ndarray, dt: float, theta: float) -> PsdEstimate:
    """Quadrature-spectrum estimate S_out,theta(nu) = PSD_x(nu)/2 - 1/4."""
    x = np.real(y * np.exp(-1j * theta))
    est = _periodogram(x, dt)
    return PsdEstimate(est.nu, est.psd / 2.0 - 0.25, est.stderr / 2.0)
