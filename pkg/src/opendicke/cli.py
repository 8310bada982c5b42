"""Command-line front end: parameter mapping, sweeps, and table emission.

Subcommands
-----------
map-params            physical Raman-channel numbers -> effective parameters
steady-state          stable mean-field branch along a coupling grid
eigenvalues           branch-labeled drift eigenvalues along a coupling grid
spectrum <kind>       fluorescence | transmission | homodyne over a nu grid
entanglement <meas>   epr | v-est | v1v2 | photon-flux along a coupling grid
sweep                 any quantity by name (generic form of the above)

All data-producing subcommands accept --format {csv,json}, --output PATH
('-' for stdout) and --plot PATH to render the table as a figure next to
the delimited output.  Exit codes: 0 success, 1 input error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import entanglement, fluctuations, spectra
from .params import (
    BalanceError,
    DickeParams,
    PhaseTag,
    RamanPhysicalParams,
    critical_coupling,
    effective_params,
    to_dicke,
    validate_regime,
)
from .semiclassical import steady_states
from .tables import (
    GridSpec,
    QUANTITIES,
    ResultTable,
    SweepRequest,
    emit,
    to_csv,
    to_json,
)

_NU_QUANTITIES = ("fluorescence", "transmission", "homodyne")


def _nan_row(n: int) -> list[float]:
    return [math.nan] * n


def _stable_branch(p: DickeParams, lam: float):
    """The branch a trajectory settles on: trivial below threshold, + above."""
    lam_c = critical_coupling(p)
    want = PhaseTag.NORMAL if lam <= lam_c else PhaseTag.SUPERRADIANT
    for b in steady_states(p, lam):
        if b.phase is want and (want is PhaseTag.NORMAL or b.sign == +1):
            return b
    raise ValueError(f"no stable branch at lambda = {lam:g}")


def _squeezing_row(p: DickeParams, lam: float) -> list[float]:
    theta_min, s_min = spectra.optimal_squeezing(p, lam)
    if theta_min is None:
        # decoupled point: the objective is flat in theta
        raise ValueError("optimal quadrature phase undefined at lambda = 0")
    return [theta_min, s_min]


def _lambda_rows(req: SweepRequest) -> tuple[list[str], list[list[float]]]:
    p = req.params
    lams = req.lambda_grid.build()
    q = req.quantity

    if q == "eigenvalues":
        columns = [
            "lambda",
            "photonic1_re", "photonic1_im", "photonic2_re", "photonic2_im",
            "atomic1_re", "atomic1_im", "atomic2_re", "atomic2_im",
            "flag",
        ]
        labeled = fluctuations.eigenvalue_sweep(p, lams)
        rows = []
        for lam, br in zip(lams, labeled):
            vals = []
            for e in np.concatenate([br.photonic, br.atomic]):
                vals.extend([e.real, e.imag])
            rows.append([float(lam), *vals, 0.0])
        return columns, rows

    per_point = {
        "steady_state": (
            ["lambda", "alpha_re", "alpha_im", "beta_re", "beta_im", "w",
             "superradiant", "flag"],
            lambda lam: (lambda b: [
                b.state.alpha.real, b.state.alpha.imag,
                b.state.beta.real, b.state.beta.imag, b.state.w,
                1.0 if b.phase is PhaseTag.SUPERRADIANT else 0.0,
            ])(_stable_branch(p, lam)),
        ),
        "photon_flux": (
            ["lambda", "flux_incoherent", "flux_coherent", "flux_total", "flag"],
            lambda lam: (lambda fx: [fx.incoherent, fx.coherent, fx.total])(
                entanglement.photon_flux(p, lam)
            ),
        ),
        "epr": (
            ["lambda", "epr_sum", "epr_product", "flag"],
            lambda lam: (lambda s: [s.epr_sum, s.epr_product])(
                entanglement.epr_variance(p, lam, req.theta, req.phi)
            ),
        ),
        "v_est": (
            ["lambda", "v_est", "flag"],
            lambda lam: [entanglement.v_est(p, lam, req.theta)],
        ),
        "v1v2": (
            ["lambda", "v1", "v2", "flag"],
            lambda lam: (lambda c: [c.v1, c.v2])(
                entanglement.v1_v2(p, lam, req.theta)
            ),
        ),
        "optimal_squeezing": (
            ["lambda", "theta_min", "s_min", "flag"],
            lambda lam: _squeezing_row(p, lam),
        ),
    }
    columns, fn = per_point[q]
    n_values = len(columns) - 2
    rows = []
    for lam in lams:
        lam = float(lam)
        try:
            rows.append([lam, *fn(lam), 0.0])
        except (ValueError, ArithmeticError, np.linalg.LinAlgError):
            rows.append([lam, *_nan_row(n_values), 1.0])
    return columns, rows


def _nu_rows(req: SweepRequest) -> tuple[list[str], list[list[float]], dict]:
    p, lam = req.params, req.lam
    nus = req.nu_grid.build()
    extra: dict = {}
    if req.quantity == "fluorescence":
        series = spectra.fluorescence(p, lam, nus)
        extra["coherent_weight"] = float(series.coherent_weight)
    elif req.quantity == "transmission":
        series = spectra.transmission(p, lam, nus)
    else:
        series = spectra.homodyne(p, lam, req.theta, nus)
    columns = ["nu", req.quantity, "flag"]
    rows = [
        [float(nu), float(v), 1.0 if f else 0.0]
        for nu, v, f in zip(series.grid, series.values, series.pole_flags)
    ]
    return columns, rows, extra


def run_sweep(req: SweepRequest) -> ResultTable:
    """Evaluate the requested quantity over its grid, one row per point.

    Per-point failures (invalid phase/coupling combinations, poles) are
    surfaced as NaN sentinel rows with the flag column set to 1; they never
    abort the whole run.  Identical requests yield identical tables.
    """
    if req.quantity in _NU_QUANTITIES:
        if req.nu_grid is None or req.lam is None:
            raise ValueError(f"{req.quantity} needs a nu grid and a fixed --lambda")
        columns, rows, extra = _nu_rows(req)
    else:
        if req.lambda_grid is None:
            raise ValueError(f"{req.quantity} needs a lambda grid")
        columns, rows = _lambda_rows(req)
        extra = {}
    metadata = req.metadata()
    metadata.update(extra)
    return ResultTable(columns, rows, metadata)


def map_params_table(raman: RamanPhysicalParams, margin: float) -> ResultTable:
    """Single-row table of effective, Dicke-form, and regime-check numbers."""
    eff = effective_params(raman)
    dicke = to_dicke(raman)
    report = validate_regime(raman, margin=margin)
    columns = [
        "omega", "omega0", "delta", "lambda_r", "lambda_s", "lambda",
        "lambda_c", "spontaneous_rate", "regime_ok", "flag",
    ]
    row = [
        eff.omega, eff.omega0, eff.delta, eff.lambda_r, eff.lambda_s,
        dicke.lam, critical_coupling(dicke), report.spontaneous_rate,
        1.0 if report.all_passed else 0.0, 0.0,
    ]
    metadata = {
        "tool": "opendicke",
        "quantity": "map_params",
        "kappa": raman.kappa,
        "N": raman.N,
        "margin": margin,
    }
    return ResultTable(columns, [row], metadata)


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sub, nu: bool = False):
    sub.add_argument("--omega", type=float, default=1.0)
    sub.add_argument("--omega0", type=float, default=1.0)
    sub.add_argument("--kappa", type=float, default=0.2)
    sub.add_argument("--lambda", dest="lam", type=float, default=None)
    sub.add_argument("--lambda-min", type=float, default=None)
    sub.add_argument("--lambda-max", type=float, default=None)
    sub.add_argument("--lambda-steps", type=int, default=None)
    if nu:
        sub.add_argument("--nu-min", type=float, default=None)
        sub.add_argument("--nu-max", type=float, default=None)
        sub.add_argument("--nu-steps", type=int, default=None)
    sub.add_argument("--theta", type=float, default=0.0)
    sub.add_argument("--phi", type=float, default=0.0)
    sub.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", default="-")
    sub.add_argument("--plot", default=None, metavar="PATH",
                     help="also render the table as a figure to PATH")


def _build_parser() -> _Parser:
    parser = _Parser(prog="opendicke", description=__doc__.split("\n", 1)[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mp = subs.add_parser("map-params",
                         help="map physical Raman-channel numbers to model parameters")
    mp.add_argument("--g-r", type=float, required=True)
    mp.add_argument("--g-s", type=float, required=True)
    mp.add_argument("--rabi-r", type=float, required=True)
    mp.add_argument("--rabi-s", type=float, required=True)
    mp.add_argument("--delta-r", type=float, required=True)
    mp.add_argument("--delta-s", type=float, required=True)
    mp.add_argument("--kappa", type=float, default=0.0)
    mp.add_argument("--n-atoms", type=float, required=True)
    mp.add_argument("--gamma", type=float, default=0.0)
    mp.add_argument("--delta-cav", type=float, default=0.0)
    mp.add_argument("--omega1", type=float, default=0.0)
    mp.add_argument("--omega1-prime", type=float, default=0.0)
    mp.add_argument("--margin", type=float, default=100.0)
    mp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    mp.add_argument("--output", default="-")
    mp.add_argument("--plot", default=None)

    ss = subs.add_parser("steady-state",
                         help="stable mean-field branch vs coupling")
    _add_common(ss)
    ev = subs.add_parser("eigenvalues",
                         help="branch-labeled drift eigenvalues vs coupling")
    _add_common(ev)

    sp = subs.add_parser("spectrum",
                         help="output spectrum over a frequency grid")
    sp.add_argument("kind", choices=_NU_QUANTITIES)
    _add_common(sp, nu=True)

    en = subs.add_parser("entanglement",
                         help="variance-based entanglement measure vs coupling")
    en.add_argument("measure", choices=("epr", "v-est", "v1v2", "photon-flux"))
    _add_common(en)

    sw = subs.add_parser("sweep",
                         help="any quantity by name")
    sw.add_argument("--quantity", choices=QUANTITIES, required=True)
    _add_common(sw, nu=True)
    return parser


def _grid(lo, hi, steps, what: str) -> GridSpec | None:
    given = [v is not None for v in (lo, hi, steps)]
    if not any(given):
        return None
    if not all(given):
        raise ValueError(f"--{what}-min/--{what}-max/--{what}-steps must appear together")
    return GridSpec(lo, hi, steps)


def _request_from(args, quantity: str) -> SweepRequest:
    params = DickeParams(omega=args.omega, omega0=args.omega0, kappa=args.kappa)
    lam_grid = _grid(args.lambda_min, args.lambda_max, args.lambda_steps, "lambda")
    nu_grid = _grid(
        getattr(args, "nu_min", None),
        getattr(args, "nu_max", None),
        getattr(args, "nu_steps", None),
        "nu",
    )
    lam = args.lam
    if quantity in _NU_QUANTITIES:
        if lam is None:
            raise ValueError(f"{quantity} needs a fixed --lambda")
        if nu_grid is None:
            grid = spectra.default_nu_grid(params, lam, _phase_default(params, lam))
            nu_grid = GridSpec(float(grid[0]), float(grid[-1]), grid.size)
    else:
        if lam_grid is None:
            if lam is not None:
                lam_grid = GridSpec(lam, lam, 1)
            else:
                lam_grid = GridSpec(0.0, 0.7, 141)
        lam = None
    return SweepRequest(
        quantity=quantity,
        params=params,
        lambda_grid=lam_grid,
        nu_grid=nu_grid,
        lam=lam,
        theta=args.theta,
        phi=args.phi,
    )


def _phase_default(p: DickeParams, lam: float) -> PhaseTag:
    return PhaseTag.NORMAL if lam <= critical_coupling(p) else PhaseTag.SUPERRADIANT


def _write(table: ResultTable, fmt: str, path: str, plot: str | None) -> None:
    if path == "-":
        sys.stdout.write(to_csv(table) if fmt == "csv" else to_json(table))
    else:
        emit(table, fmt, path)
    if plot is not None:
        from . import plots

        plots.render(table, plot)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "map-params":
            raman = RamanPhysicalParams(
                g_r=args.g_r, g_s=args.g_s,
                Omega_r=args.rabi_r, Omega_s=args.rabi_s,
                Delta_r=args.delta_r, Delta_s=args.delta_s,
                kappa=args.kappa, N=args.n_atoms, gamma=args.gamma,
                delta_cav=args.delta_cav, omega1=args.omega1,
                omega1_prime=args.omega1_prime,
            )
            table = map_params_table(raman, args.margin)
        else:
            quantity = {
                "steady-state": "steady_state",
                "eigenvalues": "eigenvalues",
                "spectrum": None,
                "entanglement": None,
                "sweep": None,
            }[args.command]
            if args.command == "spectrum":
                quantity = args.kind
            elif args.command == "entanglement":
                quantity = args.measure.replace("-", "_")
            elif args.command == "sweep":
                quantity = args.quantity
            req = _request_from(args, quantity)
            table = run_sweep(req)
    except (ValueError, BalanceError) as exc:
        print(f"opendicke: input error: {exc}", file=sys.stderr)
        return 1
    try:
        _write(table, args.fmt, args.output, args.plot)
    except (IOError, OSError) as exc:
        print(f"opendicke: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
