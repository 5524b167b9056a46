import json
import math
import os.path

import numpy.testing as npt
import pandas as pd
import pytest
import scipy.special
from click.testing import CliRunner

from eigenbounds import __version__
from eigenbounds.cli import SWEEP_COLUMNS, cli, main
from eigenbounds.constants import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION
from eigenbounds.eigensolver import EigenvalueSet
from eigenbounds.errors import ConvergenceError

J01, J11 = scipy.special.jn_zeros(0, 1)[0], scipy.special.jn_zeros(1, 1)[0]

CONFIG_TEXT = """
[run]
h = 0.0625
k = 3

[domain:square]
shape = rectangle
a = 1
b = 1

[domain:disk]
shape = ball
radius = 0.5
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def out_file(tmpdir):
    return os.path.join(tmpdir, "out")


def test_version(runner):
    result = runner.invoke(cli, ["--version"])

    assert result.exit_code == EXIT_OK
    assert __version__ in result.output


def test_bessel(runner):
    result = runner.invoke(cli, ["bessel", "1", "2", "--format", "jsonl"])

    assert result.exit_code == EXIT_OK
    res = [json.loads(line) for line in result.output.splitlines()]
    npt.assert_allclose([r["j_zero"] for r in res], scipy.special.jn_zeros(1, 2), rtol=1e-12)
    npt.assert_allclose([r["jp_zero"] for r in res], scipy.special.jnp_zeros(1, 2), rtol=1e-12)


def test_bessel_out_of_range(runner):
    result = runner.invoke(cli, ["bessel", "60", "3"])

    assert result.exit_code == EXIT_USAGE
    assert "order must lie in [0, 50]" in result.output


def test_eigs_square(runner, out_file):
    h = 1.0 / 16
    result = runner.invoke(
        cli,
        ["eigs", "--shape", "rectangle", "--a", "1", "--b", "1", "--h", str(h)]
        + ["--format", "csv", "--out", out_file],
    )

    assert result.exit_code == EXIT_OK
    res = pd.read_csv(out_file)
    expected = 8.0 / h ** 2 * math.sin(0.5 * math.pi * h) ** 2
    assert list(res["index"]) == [1, 2, 3]
    assert set(res["source"]) == {"grid"}
    npt.assert_allclose(res["eigenvalue"].iloc[0], expected, rtol=1e-8)
    assert (res["residual"] <= 1e-8).all()


def test_eigs_analytic_ball(runner, out_file):
    result = runner.invoke(
        cli, ["eigs", "--shape", "ball", "--radius", "1", "--format", "csv", "--out", out_file]
    )

    assert result.exit_code == EXIT_OK
    res = pd.read_csv(out_file)
    npt.assert_allclose(res["eigenvalue"], [J01 ** 2, J11 ** 2, J11 ** 2], rtol=1e-12)
    assert set(res["source"]) == {"analytic"}


def test_eigs_config_jsonl(runner, tmpdir, out_file):
    config = os.path.join(tmpdir, "run.ini")
    with open(config, "w") as fh:
        fh.write(CONFIG_TEXT)

    result = runner.invoke(
        cli, ["eigs", "--config", config, "--format", "jsonl", "--out", out_file]
    )

    assert result.exit_code == EXIT_OK
    with open(out_file) as fh:
        res = [json.loads(line) for line in fh]
    assert [r["label"] for r in res] == ["square", "disk"]
    assert res[0]["h_list"] == [0.0625]
    assert res[1]["source"] == "analytic"
    npt.assert_allclose(res[1]["eigenvalues"][0], 4.0 * J01 ** 2, rtol=1e-12)


def test_eigs_neumann_unsupported(runner):
    result = runner.invoke(
        cli, ["eigs", "--kind", "neumann", "--shape", "ellipse", "--a", "1", "--b", "0.5"]
    )

    assert result.exit_code == EXIT_USAGE
    assert "no Neumann spectrum" in result.output


def test_check_ball(runner, out_file):
    result = runner.invoke(
        cli, ["check", "--shape", "ball", "--radius", "1", "--format", "csv", "--out", out_file]
    )

    assert result.exit_code == EXIT_OK
    res = pd.read_csv(out_file)
    assert res["satisfied"].all()
    assert "gap_sum_bound" in set(res["id"])
    assert "szego_weinberger" in set(res["id"])
    assert set(res["label"]) == {"domain"}


def test_check_violation(runner, monkeypatch, out_file):
    def fake_dirichlet(domain, config, k=None):
        return EigenvalueSet([1.0, 5.0, 6.0], "dirichlet", domain)

    monkeypatch.setattr("eigenbounds.cli.dirichlet_spectrum", fake_dirichlet)
    monkeypatch.setattr("eigenbounds.cli.neumann_spectrum", lambda *args, **kwargs: None)

    result = runner.invoke(
        cli, ["check", "--shape", "rectangle", "--a", "1", "--b", "1", "--out", out_file]
    )

    assert result.exit_code == EXIT_VIOLATION
    # the conjecture is reported, not failed
    assert "COUNTEREXAMPLE-CANDIDATE" in result.output
    assert "gap_sum_conjecture" in result.output


def test_check_numerical_failure(runner, monkeypatch):
    def failing(domain, config, k=None):
        raise ConvergenceError("ARPACK did not converge", iterations=7)

    monkeypatch.setattr("eigenbounds.cli.dirichlet_spectrum", failing)

    result = runner.invoke(cli, ["check", "--shape", "rectangle"])

    assert result.exit_code == EXIT_NUMERIC
    assert (
        '{"diagnostics": {"iterations": 7}, "error": "ConvergenceError", '
        '"message": "ARPACK did not converge"}'
    ) in result.output


@pytest.mark.parametrize(
    "args,error_msg",
    [
        (["check"], "give a domain with --shape or --config"),
        (["eigs", "--a", "1"], "shape parameters need --shape"),
        (["eigs", "--shape", "ball", "--radius", "-1"], "radius must be positive"),
        (["eigs", "--shape", "ball", "--k", "13"], "k must lie in [1, 12]"),
        (["check", "--shape", "ball", "--k", "2"], "k must be at least 3 for this run"),
        (["eigs", "--shape", "blob"], "Invalid value"),
        (["integrate"], "No such command"),
    ],
)
def test_usage_errors(runner, args, error_msg):
    result = runner.invoke(cli, args)

    assert result.exit_code == EXIT_USAGE
    assert error_msg in result.output


def test_proofcheck_ball(runner, out_file):
    result = runner.invoke(
        cli, ["proofcheck", "--shape", "ball", "--format", "csv", "--out", out_file]
    )

    assert result.exit_code == EXIT_OK
    res = pd.read_csv(out_file).set_index("item")
    assert res.loc["gap_sum_bound", "holds"]
    npt.assert_allclose(
        res.loc["gap_sum_bound", "lhs"], res.loc["gap_sum_bound", "rhs"], rtol=1e-9
    )
    assert list(res.columns) == ["label", "lhs", "rhs", "holds"]


def test_proofcheck_square(runner, out_file):
    result = runner.invoke(
        cli,
        ["proofcheck", "--shape", "rectangle", "--h", "0.0625", "--h", "0.03125"]
        + ["--format", "jsonl", "--out", out_file],
    )

    assert result.exit_code == EXIT_OK
    with open(out_file) as fh:
        res = json.loads(fh.readline())
    assert res["holds"]
    assert res["label"] == "domain"
    assert res["h_list"] == [0.0625, 0.03125]


def test_sweep(runner, out_file):
    result = runner.invoke(
        cli,
        ["sweep", "--family", "rectangle", "--samples", "2", "--h", "0.0625", "--h", "0.03125"]
        + ["--format", "csv", "--out", out_file],
    )

    assert result.exit_code == EXIT_OK
    res = pd.read_csv(out_file)
    assert list(res.columns) == list(SWEEP_COLUMNS)
    assert set(res["family"]) == {"rectangle"}
    npt.assert_allclose(sorted(set(res["parameter"])), [1.0, 8.0])
    assert res.loc[res["id"] == "gap_sum_bound", "minimum_margin"].sum() == 1
    # the square comes closest to the ball
    best = res[(res["id"] == "gap_sum_bound") & res["minimum_margin"]]
    assert best["parameter"].iloc[0] == 1.0


def test_main(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bessel", "0", "1", "--format", "csv"])

    assert exc.value.code == EXIT_OK
    assert capsys.readouterr().out.startswith("order,k,j_zero,jp_zero\n")
