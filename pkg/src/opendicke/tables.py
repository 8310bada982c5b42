"""Deterministic tabular output: sweep requests, result tables, CSV/JSON emission.

CSV layout: leading '#'-prefixed metadata lines (key = value), a header row
of column names, then one data row per grid point.  Numbers are rendered
with 17 significant digits, '.' decimal separator, '\\n' newlines; NaN is
emitted as the literal ``nan`` with the companion ``flag`` column set to 1,
so downstream plotting keeps aligned grids.  Identical requests yield
byte-identical files; the metadata block fully reconstructs the request.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .params import DickeParams

TOOL_VERSION = "0.1.0"

QUANTITIES = (
    "steady_state",
    "eigenvalues",
    "fluorescence",
    "transmission",
    "homodyne",
    "photon_flux",
    "epr",
    "v_est",
    "v1v2",
    "optimal_squeezing",
)


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linspace specification (kept symbolic for exact round-trips)."""

    lo: float
    hi: float
    steps: int

    def build(self) -> np.ndarray:
        if self.steps < 1:
            raise ValueError("grid must be nonempty")
        if self.steps > 1 and not self.hi > self.lo:
            raise ValueError("grid bounds must be strictly increasing")
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class SweepRequest:
    quantity: str
    params: DickeParams
    lambda_grid: GridSpec | None = None
    nu_grid: GridSpec | None = None
    lam: float | None = None  # fixed coupling for spectrum quantities
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")

    def metadata(self) -> dict:
        md = {
            "tool": "opendicke",
            "version": TOOL_VERSION,
            "quantity": self.quantity,
            "omega": self.params.omega,
            "omega0": self.params.omega0,
            "kappa": self.params.kappa,
            "N": self.params.N,
        }
        if self.lam is not None:
            md["lambda"] = self.lam
        if self.lambda_grid is not None:
            md["lambda_min"] = self.lambda_grid.lo
            md["lambda_max"] = self.lambda_grid.hi
            md["lambda_steps"] = self.lambda_grid.steps
        if self.nu_grid is not None:
            md["nu_min"] = self.nu_grid.lo
            md["nu_max"] = self.nu_grid.hi
            md["nu_steps"] = self.nu_grid.steps
        if self.quantity in ("homodyne", "epr", "v_est", "v1v2"):
            md["theta"] = self.theta
        if self.quantity == "epr":
            md["phi"] = self.phi
        return md


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[float]]
    metadata: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def to_csv(table: ResultTable) -> str:
    lines = [f"# {k} = {v}" for k, v in table.metadata.items()]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def to_json(table: ResultTable) -> str:
    payload = {
        "metadata": table.metadata,
        "columns": table.columns,
        "rows": [[None if math.isnan(v) else v for v in row] for row in table.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def emit(table: ResultTable, fmt: str, path: str) -> None:
    """Write the table to `path` as csv or json."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    text = to_csv(table) if fmt == "csv" else to_json(table)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write output file {path!r}: {exc}") from exc


def read_csv(path: str) -> ResultTable:
    """Parse an emitted CSV back into a ResultTable (for round-trip checks)."""
    metadata: dict = {}
    columns: list[str] = []
    rows: list[list[float]] = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(" = ")
                metadata[key] = value
            elif not columns:
                columns = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
    return ResultTable(columns, rows, metadata)


def request_from_metadata(md: dict) -> SweepRequest:
    """Rebuild the SweepRequest encoded in a parsed metadata block."""
    g = lambda k: float(md[k])
    params = DickeParams(omega=g("omega"), omega0=g("omega0"), kappa=g("kappa"), N=g("N"))
    lam_grid = None
    if "lambda_min" in md:
        lam_grid = GridSpec(g("lambda_min"), g("lambda_max"), int(float(md["lambda_steps"])))
    nu_grid = None
    if "nu_min" in md:
        nu_grid = GridSpec(g("nu_min"), g("nu_max"), int(float(md["nu_steps"])))
    return SweepRequest(
        quantity=str(md["quantity"]),
        params=params,
        lambda_grid=lam_grid,
        nu_grid=nu_grid,
        lam=g("lambda") if "lambda" in md else None,
        theta=g("theta") if "theta" in md else 0.0,
        phi=g("phi") if "phi" in md else 0.0,
    )
