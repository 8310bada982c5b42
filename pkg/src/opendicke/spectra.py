"""Cavity output spectra from the frequency-space Langevin transfer functions.

The intracavity fluctuation mode obeys c_tilde(nu) = A(nu) a_in(nu)
+ B(nu) a_in^dag(-nu); the output field follows from a_out = sqrt(2 kappa) a
- a_in, giving output transfer functions F = sqrt(2 kappa) A - 1 and
G = sqrt(2 kappa) B.  All spectra below are built from F and G:

  fluorescence (incoherent):   S(nu)        = |G(nu)|^2
  probe transmission:          T(nu_p)      = (kappa/2) |A(nu_p)|^2
  homodyne (normally ordered): S_out(nu)    = (|f(nu)|^2 - 1)/4,
      f(nu) = F(nu) e^(-i theta) + conj(G(-nu)) e^(i theta).

The homodyne quadratic form follows from the vacuum input correlations:
the only surviving input moment is <a_in(nu) a_in^dag(nu')> = delta, so
<X_out(nu) X_out(nu')> = |f(nu)|^2/4 delta(nu + nu') and normal ordering
subtracts the vacuum quarter.  Bosonic commutator preservation gives
|F|^2 - |G|^2 = 1 pointwise, hence S_out >= -1/4 with vacuum at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .params import DickeParams, PhaseTag, critical_coupling, mu_tilde
from . import fluctuations


class PoleError(ValueError):
    """Evaluation requested exactly on a real pole of the transfer functions."""


@dataclass(frozen=True)
class TransferFunctions:
    """Intracavity transfer functions A, B and their output counterparts."""

    phase: PhaseTag
    mu: float
    kappa: float
    A: Callable[[np.ndarray], np.ndarray]
    B: Callable[[np.ndarray], np.ndarray]
    real_poles: np.ndarray  # nu locations of poles on the real axis (if any)

    def F(self, nu):
        return np.sqrt(2 * self.kappa) * self.A(nu) - 1.0

    def G(self, nu):
        return np.sqrt(2 * self.kappa) * self.B(nu)


@dataclass(frozen=True)
class SpectrumSeries:
    """Sampled spectrum with pole flags (NaN values where flagged)."""

    kind: str
    grid: np.ndarray
    values: np.ndarray
    pole_flags: np.ndarray
    theta: float | None = None
    coherent_weight: float = 0.0  # delta-function weight at nu = 0 (fluorescence)


def transfer_functions(
    p: DickeParams, lam: float, phase: PhaseTag, method: str = "auto"
) -> TransferFunctions:
    """Build A(nu), B(nu) for the given coupling and phase.

    method = "closed" uses the resonant closed forms (requires
    omega = omega0), "solve" the general 4x4 frequency-domain solve of the
    Langevin system, "auto" the closed form on resonance and the solve
    otherwise.  Both paths agree on resonance.
    """
    if method not in ("auto", "closed", "solve"):
        raise ValueError(f"unknown method {method!r}")
    resonant = p.omega == p.omega0
    if method == "closed" and not resonant:
        raise ValueError("closed-form transfer functions require omega = omega0")
    use_closed = method == "closed" or (method == "auto" and resonant)

    mu = mu_tilde(p, lam, phase)
    sys = fluctuations.build_system(p, lam, phase)
    if lam == 0.0:
        # the undamped atomic factor cancels from the cavity response
        eigs = np.array([-p.kappa - 1j * p.omega, -p.kappa + 1j * p.omega])
    else:
        eigs = np.linalg.eigvals(sys.M)
    real_poles = np.sort(eigs[np.abs(eigs.real) < 1e-12].imag)
    w0, k = p.omega0, p.kappa
    s2k = math.sqrt(2 * k)

    if use_closed and lam == 0.0:
        # atomic factors cancel exactly; keep the reduced cavity response
        def A(nu):
            nu = np.asarray(nu, dtype=float)
            return s2k / (k - 1j * (nu - p.omega))

        def B(nu):
            return np.zeros_like(np.asarray(nu, dtype=float), dtype=complex)

    elif use_closed:

        def _den(nu):
            return (k - 1j * (nu - w0)) * (k - 1j * (nu + w0)) * (
                nu**2 - w0**2 / mu**2
            ) + 4 * w0**2 * lam**2 * mu

        def A(nu):
            nu = np.asarray(nu, dtype=float)
            num = (k - 1j * (nu + w0)) * (nu**2 - w0**2 / mu**2) - 2j * w0 * lam**2 * mu
            return s2k * num / _den(nu)

        def B(nu):
            nu = np.asarray(nu, dtype=float)
            return s2k * (-2j * w0 * lam**2 * mu) / _den(nu)

    else:
        M = sys.M

        def _green_row(nu):
            nu = np.atleast_1d(np.asarray(nu, dtype=float))
            out = np.empty((nu.size, 2), dtype=complex)
            eye = np.eye(4, dtype=complex)
            rhs = np.zeros((4, 2), dtype=complex)
            rhs[0, 0] = 1.0
            rhs[1, 1] = 1.0
            for i, v in enumerate(nu):
                G = np.linalg.solve(-1j * v * eye - M, rhs)
                out[i] = G[0]
            return out

        def A(nu):
            res = s2k * _green_row(nu)[:, 0]
            return res if np.ndim(nu) else res[0]

        def B(nu):
            res = s2k * _green_row(nu)[:, 1]
            return res if np.ndim(nu) else res[0]

    return TransferFunctions(phase, mu, k, A, B, real_poles)


def _pole_flags(nu_grid: np.ndarray, real_poles: np.ndarray, tol: float = 1e-6):
    flags = np.zeros(nu_grid.shape, dtype=bool)
    for nu0 in real_poles:
        flags |= np.abs(nu_grid - nu0) < tol
    return flags


def default_nu_grid(p: DickeParams, lam: float, phase: PhaseTag, n: int = 2001):
    """Symmetric grid wide enough to show both branches in either phase."""
    mu = mu_tilde(p, lam, phase)
    span = 3 * p.omega0 / mu
    return np.linspace(-span, span, n)


def _phase_for(p: DickeParams, lam: float, phase: PhaseTag | None) -> PhaseTag:
    if phase is not None:
        return phase
    return PhaseTag.NORMAL if lam <= critical_coupling(p) else PhaseTag.SUPERRADIANT


def fluorescence(
    p: DickeParams, lam: float, nu_grid: np.ndarray, phase: PhaseTag | None = None
) -> SpectrumSeries:
    """Incoherent fluorescence spectrum |G(nu)|^2 on the grid.

    The coherent part (proportional to |alpha_ss|^2, zero below threshold)
    is reported separately as a delta weight at nu = 0.
    """
    phase = _phase_for(p, lam, phase)
    tf = transfer_functions(p, lam, phase)
    flags = _pole_flags(np.asarray(nu_grid, dtype=float), tf.real_poles)
    nu = np.asarray(nu_grid, dtype=float)
    values = np.full(nu.shape, np.nan)
    ok = ~flags
    values[ok] = np.abs(tf.G(nu[ok])) ** 2
    coherent = 0.0
    if phase is PhaseTag.SUPERRADIANT:
        from .semiclassical import steady_states

        for b in steady_states(p, lam):
            if b.phase is PhaseTag.SUPERRADIANT and b.sign == +1:
                coherent = 2 * p.kappa * abs(b.state.alpha) ** 2
    return SpectrumSeries("fluorescence", nu, values, flags, coherent_weight=coherent)


def transmission(
    p: DickeParams, lam: float, nup_grid: np.ndarray, phase: PhaseTag | None = None
) -> SpectrumSeries:
    """Probe transmission spectrum, normalized to unit height at lambda = 0."""
    phase = _phase_for(p, lam, phase)
    tf = transfer_functions(p, lam, phase)
    nu = np.asarray(nup_grid, dtype=float)
    flags = _pole_flags(nu, tf.real_poles)
    values = np.full(nu.shape, np.nan)
    ok = ~flags
    values[ok] = (p.kappa / 2) * np.abs(tf.A(nu[ok])) ** 2
    return SpectrumSeries("transmission", nu, values, flags)


def homodyne_quadratic_form(tf: TransferFunctions, theta: float, nu: np.ndarray):
    """f(nu) entering S_out = (|f|^2 - 1)/4."""
    return tf.F(nu) * np.exp(-1j * theta) + np.conj(tf.G(-nu)) * np.exp(1j * theta)


def homodyne(
    p: DickeParams,
    lam: float,
    theta: float,
    nu_grid: np.ndarray,
    phase: PhaseTag | None = None,
) -> SpectrumSeries:
    """Normally-ordered quadrature noise spectrum of the output field."""
    phase = _phase_for(p, lam, phase)
    tf = transfer_functions(p, lam, phase)
    nu = np.asarray(nu_grid, dtype=float)
    flags = _pole_flags(nu, tf.real_poles)
    values = np.full(nu.shape, np.nan)
    ok = ~flags
    f = homodyne_quadratic_form(tf, theta, nu[ok])
    values[ok] = 0.25 * (np.abs(f) ** 2 - 1.0)
    return SpectrumSeries("homodyne", nu, values, flags, theta=theta)


def optimal_squeezing(
    p: DickeParams, lam: float, phase: PhaseTag | None = None
) -> tuple[float | None, float]:
    """Quadrature phase minimizing S_out,theta(0) and the minimum value.

    At nu = 0, |f|^2 = |F|^2 + |G|^2 + 2 Re(F G e^(-2 i theta)); the
    minimum over theta is ((|F| - |G|)^2 - 1)/4 = (1/(|F| + |G|)^2 - 1)/4
    at theta = (arg(F G) + pi)/2 mod pi.  At lambda = 0 the objective is
    flat and theta is reported as None.
    """
    phase = _phase_for(p, lam, phase)
    if abs(lam - critical_coupling(p)) < 1e-12:
        raise PoleError("S_out,theta(0) diverges at lambda = lambda_c")
    tf = transfer_functions(p, lam, phase)
    F0 = complex(tf.F(np.array(0.0)))
    G0 = complex(tf.G(np.array(0.0)))
    if abs(G0) == 0.0:
        return None, 0.0
    s_min = 0.25 * (1.0 / (abs(F0) + abs(G0)) ** 2 - 1.0)
    theta_min = (np.angle(F0 * G0) + math.pi) / 2 % math.pi
    return float(theta_min), float(s_min)
