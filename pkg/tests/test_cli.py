import json
import math

import numpy as np
import pytest

from opendicke import cli
from opendicke.params import DickeParams, critical_coupling
from opendicke.tables import (
    GridSpec,
    ResultTable,
    SweepRequest,
    read_csv,
    request_from_metadata,
    to_csv,
)

TWO_PI = 2 * math.pi

MAP_ARGS = [
    "map-params",
    "--g-r", str(TWO_PI * 50e3), "--g-s", str(TWO_PI * 50e3),
    "--rabi-r", str(0.005 * TWO_PI * 100e6), "--rabi-s", str(0.005 * TWO_PI * 100e6),
    "--delta-r", str(TWO_PI * 100e6), "--delta-s", str(TWO_PI * 100e6),
    "--kappa", str(TWO_PI * 1e6), "--n-atoms", "1e6",
    "--gamma", str(TWO_PI * 6e6), "--omega1", str(TWO_PI * 10e6),
]


def _run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


def test_map_params_reports_effective_coupling(capsys):
    code, out = _run(MAP_ARGS, capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    row = [float(v) for v in lines[1].split(",")]
    values = dict(zip(header, row))
    assert values["lambda"] == pytest.approx(TWO_PI * 125e3)
    assert values["lambda_r"] == values["lambda_s"]
    assert values["delta"] == 0.0
    assert values["spontaneous_rate"] / TWO_PI == pytest.approx(37.5, rel=1e-9)
    assert values["flag"] == 0.0


def test_map_params_unbalanced_is_input_error(capsys):
    args = list(MAP_ARGS)
    args[args.index("--g-s") + 1] = str(TWO_PI * 51e3)
    code, _ = _run(args, capsys)
    assert code == 1


def test_eigenvalue_sweep_deterministic_bytes(capsys):
    args = [
        "eigenvalues", "--lambda-min", "0", "--lambda-max", "0.7",
        "--lambda-steps", "15",
    ]
    _, out1 = _run(args, capsys)
    _, out2 = _run(args, capsys)
    assert out1 == out2
    header = next(l for l in out1.splitlines() if not l.startswith("#"))
    assert "photonic1_re" in header


def test_csv_round_trip_reproduces_table(tmp_path):
    path = tmp_path / "eig.csv"
    code = cli.main([
        "eigenvalues", "--lambda-min", "0", "--lambda-max", "0.7",
        "--lambda-steps", "15", "--output", str(path),
    ])
    assert code == 0
    table = read_csv(str(path))
    req = request_from_metadata(table.metadata)
    again = cli.run_sweep(req)
    assert again.columns == table.columns
    assert np.allclose(np.array(again.rows), np.array(table.rows))


def test_json_structure(capsys):
    code, out = _run(
        ["spectrum", "transmission", "--lambda", "0.3", "--nu-min", "0",
         "--nu-max", "2", "--nu-steps", "11", "--format", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["columns"] == ["nu", "transmission", "flag"]
    assert len(payload["rows"]) == 11
    assert payload["metadata"]["quantity"] == "transmission"
    assert payload["metadata"]["lambda"] == 0.3


def test_fluorescence_metadata_includes_coherent_weight(capsys):
    code, out = _run(
        ["spectrum", "fluorescence", "--lambda", "0.8", "--nu-min", "-2",
         "--nu-max", "2", "--nu-steps", "5", "--format", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["metadata"]["coherent_weight"] > 0


def test_pole_rows_flagged_not_fatal(capsys):
    p = DickeParams(omega=1.0, omega0=1.0, kappa=0.2)
    lam_c = critical_coupling(p)
    code, out = _run(
        ["entanglement", "epr", "--lambda-min", "0.4", "--lambda-max", "0.6",
         "--lambda-steps", "5"],
        capsys,
    )
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if not l.startswith("#")][1:]
    flags = [float(r[-1]) for r in rows]
    lams = [float(r[0]) for r in rows]
    # the grid point nearest the critical coupling has no steady state
    assert flags[int(np.argmin(np.abs(np.array(lams) - lam_c)))] in (0.0, 1.0)
    assert 0.0 in flags  # most points succeed
    for r, f in zip(rows, flags):
        if f == 1.0:
            assert all(v == "nan" for v in r[1:-1])


def test_optimal_squeezing_flags_uncoupled_point(capsys):
    code, out = _run(
        ["sweep", "--quantity", "optimal_squeezing", "--lambda-min", "0",
         "--lambda-max", "0.4", "--lambda-steps", "3"],
        capsys,
    )
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if not l.startswith("#")][1:]
    assert float(rows[0][-1]) == 1.0  # lambda = 0: no defined optimum
    assert float(rows[1][-1]) == 0.0


def test_grid_validation_errors(capsys):
    code, _ = _run(["eigenvalues", "--lambda-min", "0.1"], capsys)
    assert code == 1
    code, _ = _run(
        ["eigenvalues", "--lambda-min", "0.5", "--lambda-max", "0.1",
         "--lambda-steps", "5"],
        capsys,
    )
    assert code == 1
    code, _ = _run(["spectrum", "homodyne"], capsys)  # missing --lambda
    assert code == 1


def test_unknown_subcommand_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1


def test_io_error_exit_code(tmp_path, capsys):
    code = cli.main([
        "eigenvalues", "--lambda-min", "0", "--lambda-max", "0.5",
        "--lambda-steps", "3",
        "--output", str(tmp_path / "missing_dir" / "out.csv"),
    ])
    assert code == 2


def test_plot_file_created(tmp_path):
    out = tmp_path / "eig.csv"
    fig = tmp_path / "eig.png"
    code = cli.main([
        "eigenvalues", "--lambda-min", "0", "--lambda-max", "0.7",
        "--lambda-steps", "15", "--output", str(out), "--plot", str(fig),
    ])
    assert code == 0
    assert out.exists()
    assert fig.exists() and fig.stat().st_size > 0


def test_single_point_steady_state(capsys):
    code, out = _run(["steady-state", "--lambda", "0.8"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(rows) == 2  # header + one point
    values = dict(zip(rows[0].split(","), [float(v) for v in rows[1].split(",")]))
    assert values["superradiant"] == 1.0
    assert values["w"] == pytest.approx(-0.5 * (critical_coupling(
        DickeParams(omega=1.0, omega0=1.0, kappa=0.2)) / 0.8) ** 2)


def test_nan_renders_as_literal():
    table = ResultTable(["x", "y", "flag"], [[1.0, math.nan, 1.0]], {"a": 1})
    text = to_csv(table)
    assert "nan" in text.splitlines()[-1]
    assert text.endswith("\n")


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 0).build()
    with pytest.raises(ValueError):
        GridSpec(1.0, 0.0, 5).build()
    assert GridSpec(0.5, 0.5, 1).build().tolist() == [0.5]


def test_sweep_request_rejects_unknown_quantity():
    with pytest.raises(ValueError):
        SweepRequest(quantity="nonsense", params=DickeParams(1.0, 1.0, 0.2))
