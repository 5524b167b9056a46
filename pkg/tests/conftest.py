import math
import os.path

import numpy as np
import pandas as pd
import pytest

from eigenbounds import Ball, Rectangle
from eigenbounds.eigensolver import extrapolate, solve

TEST_DATA_ROOT_DIR = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "test-data"
)


@pytest.fixture
def test_data_root_dir():
    if not os.path.isdir(TEST_DATA_ROOT_DIR):
        pytest.skip("test data required")

    return TEST_DATA_ROOT_DIR


@pytest.fixture
def test_cli_output_dir(test_data_root_dir):
    return os.path.join(test_data_root_dir, "cli-output")


def pytest_addoption(parser):
    parser.addoption(
        "--update-expected-files",
        action="store_true",
        default=False,
        help="Overwrite expected files",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: fine-grid numerical suites")


@pytest.fixture
def update_expected_files(request):
    return request.config.getoption("--update-expected-files")


def assert_csv_outputs_allclose(res, expected):
    res_df = pd.read_csv(res)
    exp_df = pd.read_csv(expected)

    pd.testing.assert_frame_equal(
        res_df, exp_df, check_exact=False, rtol=1e-9, check_dtype=False
    )


@pytest.fixture
def run_output_comparison(tmpdir):
    def _do_comparison(res, expected, update=False):
        """
        Run test that CSV output matches expected output

        Parameters
        ----------
        res : str
            CSV text produced by the command line

        expected : str
            Path containing expected output

        update : bool
            If True, don't perform the test and instead simply
            overwrite ``expected`` with ``res``

        Raises
        ------
        AssertionError
            If ``update`` is ``False`` and ``res`` and ``expected``
            do not agree.
        """
        if update:
            print("Updating {}".format(expected))
            with open(expected, "w") as fh:
                fh.write(res)
            pytest.skip("Updated {}".format(expected))

        if not os.path.isfile(expected):
            pytest.skip("{} missing, run with --update-expected-files".format(expected))

        tmpfile = os.path.join(tmpdir, "res.csv")
        with open(tmpfile, "w") as fh:
            fh.write(res)

        assert_csv_outputs_allclose(tmpfile, expected)

    return _do_comparison


@pytest.fixture(scope="session")
def unit_square():
    return Rectangle(1.0, 1.0)


@pytest.fixture(scope="session")
def unit_disk():
    return Ball(2, 1.0)


@pytest.fixture(scope="session")
def unit_area_disk():
    return Ball(2, 1.0 / math.sqrt(math.pi))


@pytest.fixture(scope="session")
def square_spectrum(unit_square):
    return solve(unit_square, "dirichlet", k=3, h=1.0 / 32)


@pytest.fixture(scope="session")
def disk_spectrum(unit_disk):
    return solve(unit_disk, "dirichlet", k=3, h=1.0 / 32)


@pytest.fixture(scope="session")
def square_extrapolated(unit_square):
    return extrapolate(unit_square, "dirichlet", 3, h_list=(1.0 / 32, 1.0 / 64))


@pytest.fixture(scope="session")
def disk_extrapolated(unit_disk):
    return extrapolate(unit_disk, "dirichlet", 3, h_list=(1.0 / 32, 1.0 / 64))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
