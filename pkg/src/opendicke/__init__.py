"""Dissipative Dicke model in the thermodynamic limit.

Parameter mapping from two-channel Raman hardware numbers, mean-field
steady states and trajectories, linearized fluctuation eigenstructure,
cavity output spectra (fluorescence, probe transmission, homodyne), and
variance-based atom-field entanglement measures, plus a deterministic
sweep/emission CLI.
"""

from .params import (
    BalanceError,
    CriticalPoints,
    DickeParams,
    EffectiveHamiltonianParams,
    PhaseTag,
    RamanPhysicalParams,
    RegimeReport,
    critical_coupling,
    critical_window,
    effective_params,
    mu_tilde,
    to_dicke,
    validate_regime,
)
from .semiclassical import (
    SemiclassicalState,
    SteadyBranch,
    Trajectory,
    integrate,
    rhs,
    stability,
    steady_states,
)
from .fluctuations import (
    BranchedEigenvalues,
    FluctuationSystem,
    NormalModes,
    build_system,
    closed_form_eigenvalues,
    drift_eigenvalues,
    eigenvalue_sweep,
    eigenvalues,
    normal_modes,
    symplectic_defect,
)
from .spectra import (
    PoleError,
    SpectrumSeries,
    TransferFunctions,
    default_nu_grid,
    fluorescence,
    homodyne,
    optimal_squeezing,
    transfer_functions,
    transmission,
)
from .entanglement import (
    CovarianceReport,
    EntanglementScalars,
    PhotonFlux,
    SuperradiantCriteria,
    covariance_integral,
    covariance_lyapunov,
    epr_variance,
    photon_flux,
    v1_v2,
    v_est,
)
from .tables import GridSpec, ResultTable, SweepRequest, emit
from .cli import run_sweep

__version__ = "0.1.0"
