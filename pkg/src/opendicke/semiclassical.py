"""Mean-field equations of motion, steady states, bifurcation, and stability.

The dynamical variables are the c-number amplitudes alpha = <a> (field),
beta = <J_-> (polarization), and w = <J_z> (inversion).  Trajectories
started on the pseudo-spin sphere conserve w^2 + |beta|^2 = N^2/4; all
normalized computations default to N = 1, putting the amplitudes on the
sphere of radius 1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .params import DickeParams, PhaseTag, critical_coupling

# tolerance used both for fixed-point verification and marginality detection
_FP_TOL = 1e-12


@dataclass(frozen=True)
class SemiclassicalState:
    """Mean-field amplitudes (alpha, beta complex; w real)."""

    alpha: complex
    beta: complex
    w: float

    def as_real(self) -> np.ndarray:
        return np.array(
            [self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag, self.w]
        )

    @staticmethod
    def from_real(y: np.ndarray) -> "SemiclassicalState":
        return SemiclassicalState(complex(y[0], y[1]), complex(y[2], y[3]), float(y[4]))

    def sphere_radius_sq(self) -> float:
        return self.w**2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class SteadyBranch:
    """A fixed point of the mean-field flow with phase/sign labels.

    sign is +1/-1 for the two superradiant branches and 0 for the trivial
    ones (where it distinguishes w = +N/2 from w = -N/2 via the state).
    stable is None at the critical point, where stability is marginal.
    """

    state: SemiclassicalState
    phase: PhaseTag
    sign: int
    stable: bool | None


def rhs(p: DickeParams, lam: float, s: SemiclassicalState) -> SemiclassicalState:
    """Time derivative (alpha_dot, beta_dot, w_dot) of the mean-field equations."""
    sn = math.sqrt(p.N)
    alpha_dot = -(p.kappa + 1j * p.omega) * s.alpha - 1j * (lam / sn) * (
        s.beta + s.beta.conjugate()
    )
    beta_dot = -1j * p.omega0 * s.beta + 2j * (lam / sn) * (
        s.alpha + s.alpha.conjugate()
    ) * s.w
    w_dot = (
        1j * (lam / sn) * (s.alpha + s.alpha.conjugate()) * (s.beta - s.beta.conjugate())
    )
    return SemiclassicalState(alpha_dot, beta_dot, w_dot.real)


def steady_states(p: DickeParams, lam: float) -> list[SteadyBranch]:
    """All mean-field fixed points on the sphere, with stability flags.

    Below threshold: the two trivial branches (w = -N/2 stable, +N/2
    unstable).  Above threshold: both trivial branches unstable plus the
    two stable superradiant branches related by (alpha, beta) ->
    (-alpha, -beta).  At lambda = lambda_c the trivial branches are
    returned with stable=None (marginal).
    """
    lam_c = critical_coupling(p)
    N = p.N
    at_critical = abs(lam - lam_c) <= _FP_TOL * max(lam, lam_c)
    down = SemiclassicalState(0j, 0j, -N / 2)
    up = SemiclassicalState(0j, 0j, +N / 2)
    branches = [
        SteadyBranch(down, PhaseTag.NORMAL, 0, None if at_critical else lam < lam_c),
        SteadyBranch(up, PhaseTag.NORMAL, 0, False),
    ]
    if lam > lam_c and not at_critical:
        mu = (lam_c / lam) ** 2
        amp = math.sqrt(1.0 - mu**2)  # = sqrt(1 - lambda_c^4/lambda^4)
        w_ss = -(N / 2) * mu
        for sign in (+1, -1):
            alpha_ss = sign * math.sqrt(N) * lam / (p.omega - 1j * p.kappa) * amp
            beta_ss = -sign * (N / 2) * amp
            branches.append(
                SteadyBranch(
                    SemiclassicalState(alpha_ss, beta_ss, w_ss),
                    PhaseTag.SUPERRADIANT,
                    sign,
                    True,
                )
            )
    return branches


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    states: list[SemiclassicalState]
    conservation_drift: float  # max relative drift of w^2 + |beta|^2


def integrate(
    p: DickeParams,
    lam: float,
    s0: SemiclassicalState,
    t_final: float,
    dt: float,
    drift_tol: float = 1e-6,
) -> Trajectory:
    """Integrate the mean-field equations with conservation-law monitoring.

    Adaptive RK45 sampled every `dt`; raises if the relative drift of
    w^2 + |beta|^2 exceeds `drift_tol`.
    """
    if dt <= 0 or t_final <= 0:
        raise ValueError("dt and t_final must be positive")

    def f(_t, y):
        return rhs(p, lam, SemiclassicalState.from_real(y)).as_real()

    t_eval = np.arange(0.0, t_final + 0.5 * dt, dt)
    sol = solve_ivp(
        f,
        (0.0, t_final),
        s0.as_real(),
        t_eval=t_eval,
        method="RK45",
        rtol=1e-10,
        atol=1e-12,
    )
    states = [SemiclassicalState.from_real(y) for y in sol.y.T]
    r0 = s0.sphere_radius_sq()
    drift = max(abs(s.sphere_radius_sq() - r0) for s in states) / max(r0, 1e-300)
    if drift > drift_tol:
        raise RuntimeError(
            f"conservation drift {drift:.3g} exceeds tolerance {drift_tol:.3g}; "
            "reduce the step tolerance"
        )
    return Trajectory(sol.t, states, drift)


def _jacobian(p: DickeParams, lam: float, s: SemiclassicalState) -> np.ndarray:
    """Jacobian of the real 5-dim flow (Re/Im alpha, Re/Im beta, w), by central differences."""
    y0 = s.as_real()
    scale = max(1.0, float(np.max(np.abs(y0))))
    h = 1e-7 * scale
    J = np.zeros((5, 5))
    for j in range(5):
        yp, ym = y0.copy(), y0.copy()
        yp[j] += h
        ym[j] -= h
        fp = rhs(p, lam, SemiclassicalState.from_real(yp)).as_real()
        fm = rhs(p, lam, SemiclassicalState.from_real(ym)).as_real()
        J[:, j] = (fp - fm) / (2 * h)
    return J


def stability(
    p: DickeParams, lam: float, branch: SteadyBranch
) -> tuple[bool, np.ndarray]:
    """Classify a fixed point by the growth rates of the linearized flow.

    Returns (stable, growth_rates).  The conservation law contributes an
    exact zero eigenvalue which does not count against stability.  Raises
    if the supplied branch is not actually a fixed point.
    """
    d = rhs(p, lam, branch.state)
    resid = math.hypot(abs(d.alpha), abs(d.beta), abs(d.w))
    if resid > 1e-9 * p.N:
        raise ValueError(f"not a fixed point: |rhs| = {resid:.3g}")
    rates = np.linalg.eigvals(_jacobian(p, lam, branch.state))
    scale = max(p.omega, p.omega0)
    stable = bool(np.max(rates.real) < 1e-6 * scale)
    return stable, rates
