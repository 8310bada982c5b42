"""Steady-state second moments, EPR variances, and entanglement criteria.

Second moments of the fluctuation modes are computed by two independent
routes: solving the continuous-time Lyapunov equation of the drift system,
and integrating products of frequency-space transfer functions over nu.
Quadrature convention: <(Delta X)^2> = 1/4 for vacuum, matching the
homodyne normalization where perfect noise reduction is -1/4.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve_sylvester

from .params import DickeParams, PhaseTag, critical_coupling, mu_tilde
from . import fluctuations, spectra
from .fluctuations import FluctuationSystem
from .semiclassical import steady_states


@dataclass(frozen=True)
class CovarianceReport:
    """Steady second-moment matrix Sigma_ij = <v_i v_j> over (c, c^dag, d, d^dag)."""

    second_moments: np.ndarray  # (4, 4) complex
    method: str  # "lyapunov" | "frequency_integral"
    phase: PhaseTag

    def moment(self, name: str) -> complex:
        idx = {"c": 0, "cd": 1, "d": 2, "dd": 3}
        a, b = name.split(",")
        return complex(self.second_moments[idx[a], idx[b]])

    def quadrature_variance(self, mode: str, theta: float) -> float:
        """<(Delta X^theta)^2> for mode 'c' or 'd' (vacuum = 1/4)."""
        t = _quadrature_coeffs(mode, theta)
        return float(np.real(t @ self.second_moments @ t))


def _quadrature_coeffs(mode: str, theta: float) -> np.ndarray:
    """Coefficient vector of X^theta = (m e^(-i theta) + m^dag e^(i theta))/2 on v."""
    t = np.zeros(4, dtype=complex)
    base = 0 if mode == "c" else 2
    t[base] = 0.5 * cmath.exp(-1j * theta)
    t[base + 1] = 0.5 * cmath.exp(1j * theta)
    return t


def _variance_of(coeffs: np.ndarray, Sigma: np.ndarray) -> float:
    return float(np.real(coeffs @ Sigma @ coeffs))


_VACUUM = np.zeros((4, 4), dtype=complex)
_VACUUM[0, 1] = 1.0
_VACUUM[2, 3] = 1.0


def covariance_lyapunov(sys: FluctuationSystem) -> CovarianceReport:
    """Steady second moments from M Sigma + Sigma M^T + D = 0.

    Requires a strictly stable drift matrix; the decoupled point
    lambda = 0 (marginal atomic block) returns the vacuum moments.
    """
    if sys.lam == 0.0:
        return CovarianceReport(_VACUUM.copy(), "lyapunov", sys.phase)
    eigs = np.linalg.eigvals(sys.M)
    if eigs.real.max() >= -1e-12:
        raise RuntimeError(
            "drift matrix marginal or unstable (max Re eig = "
            f"{eigs.real.max():.3g}); no steady state"
        )
    Sigma = solve_sylvester(sys.M, sys.M.T, -sys.D)
    return CovarianceReport(Sigma, "lyapunov", sys.phase)


def covariance_integral(
    p: DickeParams, lam: float, phase: PhaseTag, abs_tol: float = 1e-8
) -> CovarianceReport:
    """Steady second moments from frequency integrals of transfer functions.

    Each mode satisfies v_i(nu) = P_i(nu) a_in(nu) + Q_i(nu) a_in^dag(-nu),
    and the vacuum input correlations collapse the double integral to
    <v_i v_j> = (1/2pi) int P_i(nu) Q_j(-nu) d nu.  Only the six
    normally-ordered moments are integrated (their integrands decay
    fastest); the remaining entries follow from the commutators.
    """
    if lam == 0.0:
        return CovarianceReport(_VACUUM.copy(), "frequency_integral", phase)
    sys = fluctuations.build_system(p, lam, phase)
    eigs = np.linalg.eigvals(sys.M)
    if eigs.real.max() >= -1e-12:
        raise RuntimeError("no steady state at a marginal/unstable point")
    M = sys.M
    s2k = math.sqrt(2 * p.kappa)
    eye = np.eye(4, dtype=complex)

    def PQ(nu: float) -> np.ndarray:
        """Columns (P(nu), Q(nu)) of the full transfer matrix."""
        rhs = np.zeros((4, 2), dtype=complex)
        rhs[0, 0] = 1.0
        rhs[1, 1] = 1.0
        return s2k * np.linalg.solve(-1j * nu * eye - M, rhs)

    resonances = sorted(set(round(abs(x), 12) for x in eigs.imag))
    pts = sorted({r for r in resonances if r > 0})
    breaks = [-np.inf] + [-x for x in reversed(pts)] + pts + [np.inf]

    def entry(i: int, j: int) -> complex:
        def fre(nu):
            return (PQ(nu)[i, 0] * PQ(-nu)[j, 1]).real

        def fim(nu):
            return (PQ(nu)[i, 0] * PQ(-nu)[j, 1]).imag

        total = 0.0 + 0.0j
        for a, b in zip(breaks[:-1], breaks[1:]):
            re, _ = quad(fre, a, b, epsabs=abs_tol / 10, limit=400)
            im, _ = quad(fim, a, b, epsabs=abs_tol / 10, limit=400)
            total += re + 1j * im
        return total / (2 * math.pi)

    Sigma = np.zeros((4, 4), dtype=complex)
    # normally ordered entries: <c^dag c>, <cc>, <c^dag d>, <cd>, <d^dag d>, <dd>
    Sigma[1, 0] = entry(1, 0)
    Sigma[0, 0] = entry(0, 0)
    Sigma[1, 2] = entry(1, 2)
    Sigma[0, 2] = entry(0, 2)
    Sigma[3, 2] = entry(3, 2)
    Sigma[2, 2] = entry(2, 2)
    # conjugates and commutator partners
    Sigma[1, 1] = np.conj(Sigma[0, 0])
    Sigma[3, 3] = np.conj(Sigma[2, 2])
    Sigma[0, 1] = Sigma[1, 0] + 1.0
    Sigma[2, 3] = Sigma[3, 2] + 1.0
    Sigma[3, 0] = np.conj(Sigma[1, 2])
    Sigma[2, 1] = Sigma[1, 2]
    Sigma[0, 3] = Sigma[3, 0]  # <c d^dag> = <d^dag c>, the modes commute
    Sigma[2, 0] = Sigma[0, 2]
    Sigma[1, 3] = np.conj(Sigma[0, 2])
    Sigma[3, 1] = Sigma[1, 3]
    return CovarianceReport(Sigma, "frequency_integral", phase)


@dataclass(frozen=True)
class PhotonFlux:
    incoherent: float  # 2 kappa <c^dag c>
    coherent: float  # 2 kappa |alpha_ss|^2 (zero below threshold)

    @property
    def total(self) -> float:
        return self.incoherent + self.coherent


def photon_flux(p: DickeParams, lam: float, phase: PhaseTag | None = None) -> PhotonFlux:
    """Output photon flux 2 kappa <a^dag a>_ss split into fluctuation and mean parts."""
    if phase is None:
        phase = PhaseTag.NORMAL if lam <= critical_coupling(p) else PhaseTag.SUPERRADIANT
    sys = fluctuations.build_system(p, lam, phase)
    cov = covariance_lyapunov(sys)
    incoh = 2 * p.kappa * float(np.real(cov.moment("cd,c")))
    coh = 0.0
    if phase is PhaseTag.SUPERRADIANT:
        for b in steady_states(p, lam):
            if b.phase is PhaseTag.SUPERRADIANT and b.sign == +1:
                coh = 2 * p.kappa * abs(b.state.alpha) ** 2
    return PhotonFlux(incoh, coh)


@dataclass(frozen=True)
class EntanglementScalars:
    epr_sum: float
    epr_product: float
    theta: float
    phi: float


def epr_variance(
    p: DickeParams,
    lam: float,
    theta: float,
    phi: float,
    cov: CovarianceReport | None = None,
) -> EntanglementScalars:
    """Sum and product of the EPR-operator variances.

    u = X_c^theta + X_d^phi and v = X_c^(theta+pi/2) - X_d^(phi+pi/2);
    inseparability is certified by sum < 1 (or product < 1/4).  Above
    threshold the same combinations of the displaced modes are used.
    """
    if cov is None:
        phase = PhaseTag.NORMAL if lam <= critical_coupling(p) else PhaseTag.SUPERRADIANT
        cov = covariance_lyapunov(fluctuations.build_system(p, lam, phase))
    Sigma = cov.second_moments
    tu = _quadrature_coeffs("c", theta) + _quadrature_coeffs("d", phi)
    tv = _quadrature_coeffs("c", theta + math.pi / 2) - _quadrature_coeffs(
        "d", phi + math.pi / 2
    )
    var_u = _variance_of(tu, Sigma)
    var_v = _variance_of(tv, Sigma)
    return EntanglementScalars(var_u + var_v, var_u * var_v, theta, phi)


def v_est(
    p: DickeParams,
    lam: float,
    theta: float,
    nu_grid: np.ndarray | None = None,
) -> float:
    """EPR-variance estimate from the squeezed regions of the homodyne spectra.

    Integrates S_out,theta and S_out,theta+pi/2 over the frequency regions
    where each is negative:
    (2/kappa)(1/2pi)(int_{S<0} S_theta + int_{S<0} S_theta+pi/2) + 1.
    """
    phase = PhaseTag.NORMAL if lam <= critical_coupling(p) else PhaseTag.SUPERRADIANT
    if nu_grid is None:
        nu_grid = _refined_grid(p, lam, phase)
    total = 0.0
    for th in (theta, theta + math.pi / 2):
        s = spectra.homodyne(p, lam, th, nu_grid, phase)
        vals = np.where(np.isnan(s.values), 0.0, np.minimum(s.values, 0.0))
        total += np.trapezoid(vals, nu_grid)
    return (2 / p.kappa) * total / (2 * math.pi) + 1.0


def _refined_grid(p: DickeParams, lam: float, phase: PhaseTag, n_base: int = 4001):
    """Symmetric nu grid with extra resolution around each resonance."""
    sys = fluctuations.build_system(p, lam, phase)
    eigs = np.linalg.eigvals(sys.M)
    span = 3 * max(1.0, np.abs(eigs.imag).max())
    grid = [np.linspace(-span, span, n_base)]
    for e in eigs:
        hw = max(10 * abs(e.real), 1e-3 * p.omega0)
        grid.append(np.linspace(e.imag - hw, e.imag + hw, 801))
    return np.unique(np.concatenate(grid))


def _branch_windows(p: DickeParams, lam: float, phase: PhaseTag):
    """Symmetric integration windows around the photonic and atomic resonances.

    Half-width 5x|Re eigenvalue| per branch; both +-nu resonances of a
    branch are included.  Falls back to the sign-region rule when the
    windows of different branches overlap.
    """
    labeled = fluctuations.eigenvalues(fluctuations.build_system(p, lam, phase), p)
    windows = {}
    for name, pair in (("ph", labeled.photonic), ("at", labeled.atomic)):
        segs = []
        for e in pair:
            hw = 5 * abs(e.real)
            segs.append((e.imag - hw, e.imag + hw))
        windows[name] = segs
    # overlap check across branches
    def overlaps(a, b):
        return a[0] < b[1] and b[0] < a[1]

    clash = any(
        overlaps(sa, sb) for sa in windows["ph"] for sb in windows["at"]
    )
    return windows, clash


@dataclass(frozen=True)
class SuperradiantCriteria:
    v1: float
    v2: float
    route: str  # "internal" | "output"


def v1_v2(
    p: DickeParams,
    lam: float,
    theta: float,
    route: str = "internal",
) -> SuperradiantCriteria:
    """Superradiant-phase inseparability measures from the normal-mode mixing.

    Builds the mixed quadratures
      X_cd^t = cos^2(g) X_c^t - cos(g) sin(g) [cos t sqrt(w0/w0t) X_d^0
               + sin t sqrt(w0t/w0) X_d^(pi/2)]
      Y_cd^t = sin^2(g) X_c^t + cos(g) sin(g) [ ... ]
    with g the mixing angle and w0t the shifted atomic frequency, then
      V1 = [var(X_cd^(t+pi/2)) + var(Y_cd^t)] / (cos^2 g sin^2 g)
      V2 = var(X_cd^(t+pi/2)) var(Y_cd^t) / (cos^4 g sin^4 g / 4).
    route = "internal" evaluates the variances from the steady covariance;
    route = "output" recovers them by inverting the output-field
    quadrature-variance relations (homodyne-spectrum integrals over the
    branch windows).
    """
    lam_c = critical_coupling(p)
    if lam <= lam_c:
        raise ValueError(f"V1/V2 are defined only for lambda > lambda_c = {lam_c:.6g}")
    mu = mu_tilde(p, lam, PhaseTag.SUPERRADIANT)
    gamma2 = 0.5 * math.atan2(2 * mu**2, 1 - mu**2)
    w0 = p.omega0
    w0t = w0 * (1 + 1 / mu) / 2
    cg, sg = math.cos(gamma2), math.sin(gamma2)

    def mix_coeffs(t: float, which: str) -> np.ndarray:
        bracket = math.cos(t) * math.sqrt(w0 / w0t) * _quadrature_coeffs("d", 0.0) + (
            math.sin(t) * math.sqrt(w0t / w0) * _quadrature_coeffs("d", math.pi / 2)
        )
        if which == "X":
            return cg**2 * _quadrature_coeffs("c", t) - cg * sg * bracket
        return sg**2 * _quadrature_coeffs("c", t) + cg * sg * bracket

    if route == "internal":
        cov = covariance_lyapunov(fluctuations.build_system(p, lam, PhaseTag.SUPERRADIANT))
        var_x = _variance_of(mix_coeffs(theta + math.pi / 2, "X"), cov.second_moments)
        var_y = _variance_of(mix_coeffs(theta, "Y"), cov.second_moments)
    elif route == "output":
        var_x, var_y = _output_route_variances(p, lam, theta, gamma2, w0, w0t)
    else:
        raise ValueError(f"unknown route {route!r}")

    v1 = (var_x + var_y) / (cg**2 * sg**2)
    v2 = (var_x * var_y) / (0.25 * cg**4 * sg**4)
    return SuperradiantCriteria(v1, v2, route)


def _output_route_variances(p, lam, theta, gamma2, w0, w0t):
    """Invert the output-quadrature relations for var(X_cd), var(Y_cd)."""
    phase = PhaseTag.SUPERRADIANT
    windows, clash = _branch_windows(p, lam, phase)
    cg, sg = math.cos(gamma2), math.sin(gamma2)

    def spectrum_integral(th: float, segs) -> float:
        total = 0.0
        for lo, hi in segs:
            grid = np.linspace(lo, hi, 2001)
            s = spectra.homodyne(p, lam, th, grid, phase)
            vals = np.where(np.isnan(s.values), 0.0, s.values)
            total += np.trapezoid(vals, grid)
        return total / (2 * math.pi)

    out_ph = spectrum_integral(theta + math.pi / 2, windows["ph"])
    out_at = spectrum_integral(theta, windows["at"])
    # invert the normally-ordered output-variance relations
    var_x = out_ph / (2 * p.kappa) + 0.25 * (
        cg**4
        + cg**2 * sg**2 * ((w0 / w0t) * math.sin(theta) ** 2 + (w0t / w0) * math.cos(theta) ** 2)
    )
    var_y = out_at / (2 * p.kappa) + 0.25 * (
        sg**4
        + cg**2 * sg**2 * ((w0 / w0t) * math.cos(theta) ** 2 + (w0t / w0) * math.sin(theta) ** 2)
    )
    return var_x, var_y
