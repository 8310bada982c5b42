"""Parameter records and the physical-to-effective parameter mapping.

Conventions
-----------
All raw hardware numbers in :class:`RamanPhysicalParams` are *angular*
frequencies (rad/s); quantities quoted "per 2 pi" in lab units must be
multiplied by 2*pi before construction.  Everything downstream of
:func:`to_dicke` works with :class:`DickeParams` in normalized units,
conventionally with the atomic splitting omega0 as the unit of frequency
(the canonical working point is omega = omega0 = 1, kappa = 0.2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class PhaseTag(enum.Enum):
    """Which mean-field branch the fluctuation analysis is linearized about."""

    NORMAL = "normal"
    SUPERRADIANT = "superradiant"


class BalanceError(ValueError):
    """Raman channels are not balanced; carries the two residuals."""

    def __init__(self, residual_dispersive: float, residual_coupling: float):
        self.residual_dispersive = residual_dispersive
        self.residual_coupling = residual_coupling
        super().__init__(
            "Raman channels unbalanced: "
            f"g_r^2/Delta_r - g_s^2/Delta_s = {residual_dispersive:.6g}, "
            f"g_r*Omega_r/Delta_r - g_s*Omega_s/Delta_s = {residual_coupling:.6g}"
        )


@dataclass(frozen=True)
class RamanPhysicalParams:
    """Raw hardware numbers for the two cavity-laser Raman channels.

    g_r, g_s        cavity dipole coupling per channel
    Omega_r, Omega_s  laser Rabi frequencies
    Delta_r, Delta_s  excited-state detunings (nonzero)
    kappa           cavity amplitude decay rate
    N               atom count (>= 1, used as a real number)
    gamma           excited-state linewidth
    delta_cav       cavity detuning
    omega1          ground-state splitting
    omega1_prime    reference splitting fixed by the laser frequencies

    All in a single consistent angular-frequency unit (rad/s).
    """

    g_r: float
    g_s: float
    Omega_r: float
    Omega_s: float
    Delta_r: float
    Delta_s: float
    kappa: float
    N: float
    gamma: float = 0.0
    delta_cav: float = 0.0
    omega1: float = 0.0
    omega1_prime: float = 0.0

    def __post_init__(self):
        if self.Delta_r == 0.0 or self.Delta_s == 0.0:
            raise ValueError("excited-state detunings must be nonzero")
        if self.N < 1:
            raise ValueError("atom number must be >= 1")
        if self.kappa < 0 or self.gamma < 0:
            raise ValueError("decay rates must be nonnegative")


@dataclass(frozen=True)
class DickeParams:
    """Effective model parameters (normalized units).

    omega   field-mode frequency, omega0  atomic splitting, kappa  cavity
    amplitude decay.  lam is the coupling strength produced by
    :func:`to_dicke`; operations that scan the coupling take it as an
    explicit argument instead.  N enters only where explicit sqrt(N) or N
    factors appear; the linearized theory is N-independent after scaling.
    """

    omega: float
    omega0: float
    kappa: float
    lam: float = 0.0
    N: float = 1.0

    def __post_init__(self):
        if self.omega <= 0 or self.omega0 <= 0:
            raise ValueError("omega and omega0 must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.lam < 0:
            raise ValueError("coupling must be nonnegative")


@dataclass(frozen=True)
class EffectiveHamiltonianParams:
    """Pre-balance effective Hamiltonian coefficients.

    delta is the residual dispersive a^dag a J_z coefficient; lambda_r and
    lambda_s are the rotating and counter-rotating coupling strengths.
    Under exact channel balance delta = 0 and lambda_r = lambda_s.
    """

    omega: float
    omega0: float
    delta: float
    lambda_r: float
    lambda_s: float


@dataclass(frozen=True)
class CriticalPoints:
    """Critical coupling and the eigenvalue splitting/merging window.

    The closed-form window values are the resonant (omega = omega0)
    approximations and are None off resonance; the numeric values locate
    where the photonic-branch imaginary parts vanish and reappear.
    """

    lambda_c: float
    lambda_prime_closed: float | None
    lambda_double_prime_closed: float | None
    lambda_prime_numeric: float
    lambda_double_prime_numeric: float


@dataclass(frozen=True)
class RegimeCheck:
    name: str
    ratio: float
    passed: bool


@dataclass(frozen=True)
class RegimeReport:
    """Adiabaticity ratios |Delta|/X and the spontaneous-emission estimate."""

    margin: float
    checks: tuple[RegimeCheck, ...]
    spontaneous_rate: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def effective_params(raman: RamanPhysicalParams) -> EffectiveHamiltonianParams:
    """Evaluate the effective-Hamiltonian coefficients with no balancing assumed."""
    r, s = raman.Delta_r, raman.Delta_s
    omega = 0.5 * raman.N * (raman.g_r**2 / r + raman.g_s**2 / s) + raman.delta_cav
    omega0 = 0.25 * (raman.Omega_r**2 / r - raman.Omega_s**2 / s) + (
        raman.omega1 - raman.omega1_prime
    )
    delta = raman.g_r**2 / r - raman.g_s**2 / s
    lambda_r = 0.5 * math.sqrt(raman.N) * raman.g_r * raman.Omega_r / r
    lambda_s = 0.5 * math.sqrt(raman.N) * raman.g_s * raman.Omega_s / s
    return EffectiveHamiltonianParams(omega, omega0, delta, lambda_r, lambda_s)


def to_dicke(raman: RamanPhysicalParams, rel_tol: float = 1e-9) -> DickeParams:
    """Map balanced Raman-channel hardware numbers onto Dicke-form parameters.

    Requires both balance conditions g_r^2/Delta_r = g_s^2/Delta_s and
    g_r*Omega_r/Delta_r = g_s*Omega_s/Delta_s to hold within `rel_tol`
    (relative); raises :class:`BalanceError` with the residuals otherwise.
    """
    disp_r = raman.g_r**2 / raman.Delta_r
    disp_s = raman.g_s**2 / raman.Delta_s
    coup_r = raman.g_r * raman.Omega_r / raman.Delta_r
    coup_s = raman.g_s * raman.Omega_s / raman.Delta_s
    res_d = disp_r - disp_s
    res_c = coup_r - coup_s
    scale_d = max(abs(disp_r), abs(disp_s))
    scale_c = max(abs(coup_r), abs(coup_s))
    if abs(res_d) > rel_tol * scale_d or abs(res_c) > rel_tol * scale_c:
        raise BalanceError(res_d, res_c)
    omega = raman.N * disp_r + raman.delta_cav
    omega0 = raman.omega1 - raman.omega1_prime
    lam = 0.5 * math.sqrt(raman.N) * coup_r
    return DickeParams(omega=omega, omega0=omega0, kappa=raman.kappa, lam=lam, N=raman.N)


def validate_regime(raman: RamanPhysicalParams, margin: float = 100.0) -> RegimeReport:
    """Report the adiabaticity ratios |Delta|/X against `margin`.

    Checks |Delta_{r,s}| >> Omega_{r,s}, g_{r,s}, kappa, delta_cav, gamma
    and computes the off-resonant spontaneous-emission rate estimate
    (1/4) * gamma * (Omega_r / Delta_r)^2.  Report-only: never raises.
    """
    checks = []
    for dname, delta in (("Delta_r", raman.Delta_r), ("Delta_s", raman.Delta_s)):
        for xname, x in (
            ("Omega_r", raman.Omega_r),
            ("Omega_s", raman.Omega_s),
            ("g_r", raman.g_r),
            ("g_s", raman.g_s),
            ("kappa", raman.kappa),
            ("delta_cav", raman.delta_cav),
            ("gamma", raman.gamma),
        ):
            ratio = math.inf if x == 0 else abs(delta) / abs(x)
            checks.append(RegimeCheck(f"|{dname}|/{xname}", ratio, ratio >= margin))
    spon = 0.25 * raman.gamma * (raman.Omega_r / raman.Delta_r) ** 2
    return RegimeReport(margin=margin, checks=tuple(checks), spontaneous_rate=spon)


def critical_coupling(p: DickeParams) -> float:
    """Coupling strength at which the trivial steady state loses stability."""
    return 0.5 * math.sqrt((p.omega0 / p.omega) * (p.kappa**2 + p.omega**2))


def critical_window(p: DickeParams) -> CriticalPoints:
    """Locate the couplings bracketing the purely-real photonic-eigenvalue window.

    The closed-form fields evaluate the resonant approximations
    lambda_c - kappa^2/(8 omega0^2) and lambda_c + kappa^2/(16 omega0) and
    are None when omega != omega0.  The numeric fields bisect on the
    photonic-branch imaginary parts of the drift matrix and apply for any
    omega, omega0.
    """
    # deferred import: the numeric branch needs the drift matrix
    from . import fluctuations

    lam_c = critical_coupling(p)
    if p.omega == p.omega0:
        lam_p_closed = lam_c - p.kappa**2 / (8 * p.omega0**2)
        lam_pp_closed = lam_c + p.kappa**2 / (16 * p.omega0)
    else:
        lam_p_closed = None
        lam_pp_closed = None

    if p.kappa == 0.0:
        return CriticalPoints(lam_c, lam_p_closed, lam_pp_closed, lam_c, lam_c)

    def has_real_pair(lam: float, phase: PhaseTag) -> bool:
        sys = fluctuations.build_system(p, lam, phase)
        eigs = fluctuations.drift_eigenvalues(sys)
        return bool((abs(eigs.imag) < 1e-7).any())

    def bisect(lo, hi, phase, want_at_hi):
        # predicate is False at lo, True at hi (or vice versa); returns the flip point
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if has_real_pair(mid, phase) == want_at_hi:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    # lambda': walk down from lambda_c until outside the window, then bisect
    lo = lam_c
    step = max(p.kappa**2 / p.omega0, 1e-6 * lam_c)
    while lo > 0 and has_real_pair(lo, PhaseTag.NORMAL):
        lo -= step
        step *= 2
    lam_p_num = bisect(lo, lam_c, PhaseTag.NORMAL, want_at_hi=True)

    # lambda'': walk up from lambda_c
    hi = lam_c * (1 + 1e-12)
    step = max(p.kappa**2 / p.omega0, 1e-6 * lam_c)
    while has_real_pair(hi, PhaseTag.SUPERRADIANT):
        hi += step
        step *= 2
    lam_pp_num = bisect(hi, lam_c * (1 + 1e-12), PhaseTag.SUPERRADIANT, want_at_hi=True)

    return CriticalPoints(lam_c, lam_p_closed, lam_pp_closed, lam_p_num, lam_pp_num)


def mu_tilde(p: DickeParams, lam: float, phase: PhaseTag) -> float:
    """Order-parameter ratio controlling the superradiant-phase formulas.

    Equals 1 in the normal phase and lambda_c^2/lambda^2 (< 1) in the
    superradiant phase; continuous across the transition.
    """
    if phase is PhaseTag.NORMAL:
        return 1.0
    lam_c = critical_coupling(p)
    if lam < lam_c:
        raise ValueError(f"superradiant phase requires lambda > lambda_c = {lam_c:.6g}")
    return (lam_c / lam) ** 2
