"""Linearized quantum fluctuations: drift matrix, eigenvalue branches, normal modes.

The fluctuation vector is v = (<c>, <c^dag>, <d>, <d^dag>) where (c, d)
are the cavity and atomic bosonic fluctuation modes; in the normal phase
these are the bare modes (a, b), in the superradiant phase the displaced
modes.  All matrices are documented against this basis ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DickeParams, PhaseTag, critical_coupling, mu_tilde


@dataclass(frozen=True)
class FluctuationSystem:
    """Drift matrix M and diffusion matrix D of the linearized Langevin system.

    v_dot = M v + noise, with only the cavity block of D nonzero:
    D[0, 1] = 2*kappa from the vacuum input correlation <a_in a_in^dag>.
    """

    phase: PhaseTag
    M: np.ndarray  # (4, 4) complex
    D: np.ndarray  # (4, 4) complex
    omega: float
    omega0: float
    kappa: float
    lam: float
    mu: float


@dataclass(frozen=True)
class BranchedEigenvalues:
    """Eigenvalues of M grouped into photonic and atomic conjugate pairs.

    A purely-real pair (the softened branch inside the merging window) is
    labeled photonic; otherwise the pair with the faster damping is
    photonic when the dampings split, and the pair with the lower
    oscillation frequency when the dampings coincide.  Both rules reduce
    to the decoupled limits: -kappa +- i omega photonic at lambda = 0 and
    again far above threshold, with the slow high-frequency pair atomic.
    """

    photonic: np.ndarray  # (2,) complex
    atomic: np.ndarray  # (2,) complex
    vectors: np.ndarray  # (4, 4) complex, columns ordered (ph, ph, at, at)

    @property
    def all(self) -> np.ndarray:
        return np.concatenate([self.photonic, self.atomic])


@dataclass(frozen=True)
class NormalModes:
    """Bogoliubov normal modes of the quadratic Hamiltonian (kappa ignored).

    omega_ph, omega_at are the mode frequencies; coeff_ph / coeff_at hold
    the transformation weights on (c, c^dag, d, d^dag) for the photonic
    and atomic mode operators.  gamma2 (mixing angle) and omega0_tilde are
    populated only in the superradiant phase.
    """

    phase: PhaseTag
    omega_ph: float
    omega_at: float
    coeff_ph: np.ndarray  # (4,) real
    coeff_at: np.ndarray  # (4,) real
    gamma2: float | None = None
    omega0_tilde: float | None = None


def _quadratic_coefficients(p: DickeParams, lam: float, mu: float):
    """Coefficients (omega_c, omega_d, xi, g) of the fluctuation Hamiltonian.

    H = omega_c c^dag c + omega_d d^dag d + xi (d + d^dag)^2
        + g (c + c^dag)(d + d^dag);
    mu = 1 reduces to the normal-phase Hamiltonian.
    """
    omega_c = p.omega
    omega_d = p.omega0 * (1 + mu) / (2 * mu)
    xi = p.omega0 * (1 - mu) * (3 + mu) / (8 * mu * (1 + mu))
    g = lam * mu * math.sqrt(2 / (1 + mu))
    return omega_c, omega_d, xi, g


def build_system(p: DickeParams, lam: float, phase: PhaseTag) -> FluctuationSystem:
    """Drift and diffusion matrices for the given coupling and phase.

    The phase must be consistent with lambda: normal requires
    lambda <= lambda_c (stable trivial branch), superradiant requires
    lambda >= lambda_c.
    """
    lam_c = critical_coupling(p)
    tol = 1e-12 * max(1.0, lam_c)
    if phase is PhaseTag.NORMAL and lam > lam_c + tol:
        raise ValueError(f"normal phase requires lambda <= lambda_c = {lam_c:.6g}")
    if phase is PhaseTag.SUPERRADIANT and lam < lam_c - tol:
        raise ValueError(f"superradiant phase requires lambda >= lambda_c = {lam_c:.6g}")
    mu = mu_tilde(p, max(lam, lam_c) if phase is PhaseTag.SUPERRADIANT else lam, phase)
    omega_c, omega_d, xi, g = _quadratic_coefficients(p, lam, mu)
    k = p.kappa
    M = np.array(
        [
            [-k - 1j * omega_c, 0, -1j * g, -1j * g],
            [0, -k + 1j * omega_c, 1j * g, 1j * g],
            [-1j * g, -1j * g, -1j * (omega_d + 2 * xi), -2j * xi],
            [1j * g, 1j * g, 2j * xi, 1j * (omega_d + 2 * xi)],
        ],
        dtype=complex,
    )
    D = np.zeros((4, 4), dtype=complex)
    D[0, 1] = 2 * k
    return FluctuationSystem(phase, M, D, p.omega, p.omega0, k, lam, mu)


def drift_eigenvalues(sys: FluctuationSystem) -> np.ndarray:
    """Unlabeled eigenvalues of the drift matrix."""
    return np.linalg.eigvals(sys.M)


def _conjugate_pairs(vals: np.ndarray) -> tuple[list[int], list[int], bool]:
    """Split four drift eigenvalues into two conjugate pairs.

    Returns (pair_a, pair_b, a_is_real): a real pair is listed first with
    the flag set; otherwise the two complex pairs are separated by
    oscillation frequency (outer and inner imaginary parts).
    """
    scale = max(1.0, float(np.abs(vals).max()))
    tol = 1e-9 * scale
    real_idx = [i for i in range(4) if abs(vals[i].imag) < tol]
    if len(real_idx) == 2:
        other = [i for i in range(4) if i not in real_idx]
        return real_idx, other, True
    if len(real_idx) == 4:
        order = list(np.argsort(vals.real))
        return [order[0], order[3]], [order[1], order[2]], True
    # two complex pairs: match each upper-half eigenvalue to its conjugate
    upper = [i for i in range(4) if vals[i].imag > 0]
    lower = [i for i in range(4) if i not in upper]
    d0 = abs(vals[upper[0]] - vals[lower[0]].conjugate())
    d1 = abs(vals[upper[0]] - vals[lower[1]].conjugate())
    if d0 <= d1:
        return [upper[0], lower[0]], [upper[1], lower[1]], False
    return [upper[0], lower[1]], [upper[1], lower[0]], False


def eigenvalues(sys: FluctuationSystem, p: DickeParams | None = None) -> BranchedEigenvalues:
    """Branch-labeled eigenvalues of the drift matrix.

    Labeling rule (see :class:`BranchedEigenvalues`): a purely-real pair
    is photonic; with two complex pairs, whichever of the damping split
    or the frequency split is larger decides, photonic being the faster
    damped or the lower frequency pair respectively.
    """
    vals, vecs = np.linalg.eig(sys.M)
    pair_a, pair_b, a_is_real = _conjugate_pairs(vals)
    if a_is_real:
        ph, at = pair_a, pair_b
    else:
        re_a = float(vals[pair_a].real.mean())
        re_b = float(vals[pair_b].real.mean())
        im_a = float(np.abs(vals[pair_a].imag).mean())
        im_b = float(np.abs(vals[pair_b].imag).mean())
        if abs(re_a - re_b) > abs(im_a - im_b):
            ph, at = (pair_a, pair_b) if re_a < re_b else (pair_b, pair_a)
        else:
            ph, at = (pair_a, pair_b) if im_a < im_b else (pair_b, pair_a)

    def ordered(idx):
        # conjugate partner with positive imaginary part first
        return sorted(idx, key=lambda i: (-vals[i].imag, vals[i].real))

    idx = ordered(ph) + ordered(at)
    return BranchedEigenvalues(vals[idx[:2]], vals[idx[2:]], vecs[:, idx])


def eigenvalue_sweep(
    p: DickeParams, lams: np.ndarray, phase_of=None
) -> list[BranchedEigenvalues]:
    """Branch-labeled eigenvalues along a coupling grid.

    `phase_of(lam)` selects the phase per point (default: the stable
    branch, normal below lambda_c and superradiant above).  Points are
    independent; labels come from the per-point pairing rule, so the
    sweep order carries no state.
    """
    lam_c = critical_coupling(p)
    if phase_of is None:
        phase_of = lambda lam: (
            PhaseTag.NORMAL if lam <= lam_c else PhaseTag.SUPERRADIANT
        )
    out: list[BranchedEigenvalues] = []
    for lam in lams:
        sys = build_system(p, float(lam), phase_of(float(lam)))
        out.append(eigenvalues(sys, p))
    return out


def closed_form_eigenvalues(p: DickeParams, lam: float) -> BranchedEigenvalues:
    """Resonant below-threshold eigenvalues from the two displayed formula sets.

    Valid for omega = omega0 and 0 <= lambda <= lambda_c; the formula set
    is selected by lambda vs kappa/2 (the two sets agree at the seam,
    where the discriminant vanishes).
    """
    if p.omega != p.omega0:
        raise ValueError("closed forms require omega = omega0")
    lam_c = critical_coupling(p)
    if lam < 0 or lam > lam_c * (1 + 1e-12):
        raise ValueError(f"closed forms require 0 <= lambda <= lambda_c = {lam_c:.6g}")
    w0, k = p.omega0, p.kappa
    Lam = np.emath.sqrt(w0**2 * (4 * lam**2 - k**2))
    base = w0**2 - k**2 / 4
    if lam <= k / 2:
        ph = np.array(
            [
                -k / 2 + 1j * np.emath.sqrt(base + Lam),
                -k / 2 - 1j * np.emath.sqrt(base - Lam),
            ]
        )
        at = np.array(
            [
                -k / 2 + 1j * np.emath.sqrt(base - Lam),
                -k / 2 - 1j * np.emath.sqrt(base + Lam),
            ]
        )
    else:
        ph = np.array(
            [
                -k / 2 + 1j * np.emath.sqrt(base - Lam),
                -k / 2 - 1j * np.emath.sqrt(base - Lam),
            ]
        )
        at = np.array(
            [
                -k / 2 + 1j * np.emath.sqrt(base + Lam),
                -k / 2 - 1j * np.emath.sqrt(base + Lam),
            ]
        )
    return BranchedEigenvalues(ph, at, np.zeros((4, 4), dtype=complex))


def normal_modes(p: DickeParams, lam: float, phase: PhaseTag) -> NormalModes:
    """Diagonalize the resonant quadratic Hamiltonian by Bogoliubov transformation.

    Requires omega = omega0; kappa is ignored (Hamiltonian diagonalization
    only).  Frequencies follow from the coupled-oscillator closed form
    Omega_pm^2 = (omega_c^2 + omega_d omega_d' +- sqrt((omega_c^2 -
    omega_d omega_d')^2 + 16 g^2 omega_c omega_d)) / 2 with
    omega_d' = omega_d + 4 xi; the photonic mode is the softening (lower)
    branch.  Raises if the requested coupling takes a mode frequency
    imaginary, naming the softened mode.
    """
    if p.omega != p.omega0:
        raise ValueError("normal-mode analysis assumes omega = omega0")
    mu = mu_tilde(p, lam, phase)
    omega_c, omega_d, xi, g = _quadratic_coefficients(p, lam, mu)
    omega_dp = omega_d + 4 * xi
    s = omega_c**2 + omega_d * omega_dp
    disc = math.sqrt((omega_c**2 - omega_d * omega_dp) ** 2 + 16 * g**2 * omega_c * omega_d)
    w_minus_sq = 0.5 * (s - disc)
    w_plus_sq = 0.5 * (s + disc)
    if -1e-12 * s < w_minus_sq < 0:  # roundoff at the softening point
        w_minus_sq = 0.0
    if w_minus_sq < 0:
        raise ValueError(
            "photonic mode frequency imaginary: coupling outside the Hamiltonian's "
            f"stable range (omega_ph^2 = {w_minus_sq:.6g})"
        )
    w_ph = math.sqrt(w_minus_sq)
    w_at = math.sqrt(w_plus_sq)
    if w_ph == 0.0:
        raise ValueError(
            "photonic mode frequency vanishes at the softening point; "
            "the mode transformation is singular there"
        )
    w0 = p.omega0

    if phase is PhaseTag.NORMAL:
        # A = (2 w0 w_ph)^(-1/2)/2 [(w_ph - w0)(c+ - d+) + (w_ph + w0)(c - d)]
        nph = 0.5 / math.sqrt(2 * w0 * w_ph)
        nat = 0.5 / math.sqrt(2 * w0 * w_at)
        coeff_ph = nph * np.array([(w_ph + w0), (w_ph - w0), -(w_ph + w0), -(w_ph - w0)])
        coeff_at = nat * np.array([(w_at + w0), (w_at - w0), (w_at + w0), (w_at - w0)])
        return NormalModes(phase, w_ph, w_at, coeff_ph, coeff_at)

    gamma2 = 0.5 * math.atan2(2 * mu**2, 1 - mu**2)
    w0t = w0 * (1 + 1 / mu) / 2
    cg, sg = math.cos(gamma2), math.sin(gamma2)
    coeff_ph = 0.5 * np.array(
        [
            cg * (w_ph + w0) / math.sqrt(w0 * w_ph),
            cg * (w_ph - w0) / math.sqrt(w0 * w_ph),
            -sg * (w_ph + w0t) / math.sqrt(w0t * w_ph),
            -sg * (w_ph - w0t) / math.sqrt(w0t * w_ph),
        ]
    )
    coeff_at = 0.5 * np.array(
        [
            sg * (w_at + w0) / math.sqrt(w0 * w_at),
            sg * (w_at - w0) / math.sqrt(w0 * w_at),
            cg * (w_at + w0t) / math.sqrt(w0t * w_at),
            cg * (w_at - w0t) / math.sqrt(w0t * w_at),
        ]
    )
    return NormalModes(phase, w_ph, w_at, coeff_ph, coeff_at, gamma2, w0t)


def symplectic_defect(modes: NormalModes) -> tuple[float, float]:
    """Deviation of [A, A^dag] and [B, B^dag] from 1 under the transformation.

    For a mode O = u1 c + u2 c^dag + u3 d + u4 d^dag the commutator is
    u1^2 - u2^2 + u3^2 - u4^2 (real weights).
    """
    def defect(u):
        return float(u[0] ** 2 - u[1] ** 2 + u[2] ** 2 - u[3] ** 2 - 1.0)

    return defect(modes.coeff_ph), defect(modes.coeff_at)
