import os.path
import re

import pytest

from eigenbounds.config import (
    DEFAULT_H,
    RunConfig,
    domain_to_section,
    format_config,
    parse_config,
    read_config,
    write_config,
)
from eigenbounds.errors import ConfigError
from eigenbounds.geometry import Ball, Polygon, Rectangle

CONFIG_TEXT = """
[run]
h = 0.0625, 0.03125
k = 4
format = csv
seed = 7
jobs = -1
numeric_balls = yes
boundary = staircase

[domain:square]
shape = rectangle
a = 1
b = 1

[domain:disk]
shape = ball
radius = 0.5
translation = 0.3, -0.2
"""


def test_defaults():
    res = RunConfig()

    assert res.domains == []
    assert res.h == DEFAULT_H
    assert res.k == 3
    assert res.tol == 1e-10
    assert res.fmt == "table"
    assert res.out is None
    assert res.seed == 0
    assert res.jobs == 1
    assert not res.numeric_balls
    assert res.boundary == "linear"


def test_parse_config():
    res = parse_config(CONFIG_TEXT)

    assert res.h == (0.0625, 0.03125)
    assert res.k == 4
    assert res.fmt == "csv"
    assert res.seed == 7
    assert res.jobs == -1
    assert res.numeric_balls
    assert res.boundary == "staircase"
    assert res.domains == [
        ("square", Rectangle(1.0, 1.0)),
        ("disk", Ball(2, 0.5, translation=(0.3, -0.2))),
    ]


def test_parse_config_overrides():
    res = parse_config(CONFIG_TEXT, k=6, fmt="jsonl", out=None)

    assert res.k == 6
    assert res.fmt == "jsonl"
    # None leaves the file value in place
    assert res.seed == 7


def test_parse_config_unlabelled_domain():
    res = parse_config("[domain]\nshape = ellipse\na = 1\nb = 0.5\n")

    assert res.domains[0][0] == "domain"
    assert res.domains[0][1].shape == "ellipse"


@pytest.mark.parametrize(
    "text,error_msg",
    [
        ("[run]\nspeed = 3\n", "unknown key 'speed' in [run]"),
        ("[output]\nformat = csv\n", "unknown section [output]"),
        ("[domain:]\nshape = ball\nradius = 1\n", "unknown section [domain:]"),
        ("[run]\nk = 0\n", "k must lie in [1, 12], got 0"),
        ("[run]\nk = 2.5\n", "k must be an integer, got '2.5'"),
        ("[domain:a]\nshape = blob\n", "unknown shape 'blob'"),
        ("k = 3\n", "invalid configuration file"),
        (
            "[domain:a]\nshape = ball\nradius = 1\n[domain:a]\nshape = ball\nradius = 2\n",
            "invalid configuration file",
        ),
    ],
)
def test_parse_config_errors(text, error_msg):
    with pytest.raises(ConfigError, match=re.escape(error_msg)):
        parse_config(text)


@pytest.mark.parametrize(
    "h,error_msg",
    [
        ("0.03125, 0.0625", "strictly decreasing"),
        ((0.1, 0.1), "strictly decreasing"),
        ("0.1, -0.05", "must be positive"),
        ("", "at least one grid spacing"),
        ("a, b", "h must be a list of numbers"),
    ],
)
def test_h_validation(h, error_msg):
    with pytest.raises(ConfigError, match=error_msg):
        RunConfig(h=h)


def test_h_from_string():
    assert RunConfig(h="0.25 0.125").h == (0.25, 0.125)
    assert RunConfig(h=[0.1]).h == (0.1,)


@pytest.mark.parametrize(
    "kwargs,error_msg",
    [
        ({"k": 13}, "k must lie in [1, 12]"),
        ({"tol": 1e-13}, "tol must lie in [1e-12, 1)"),
        ({"tol": 1.0}, "tol must lie in [1e-12, 1)"),
        ({"tol": "tiny"}, "tol must be numeric"),
        ({"fmt": "xml"}, "format must be one of table, csv, jsonl"),
        ({"seed": -1}, "seed must be non-negative"),
        ({"jobs": 0}, "jobs must be positive or -1"),
        ({"jobs": -2}, "jobs must be positive or -1"),
        ({"numeric_balls": "maybe"}, "numeric_balls must be a boolean"),
        ({"boundary": "smooth"}, "boundary must be one of linear, staircase"),
        (
            {"domains": [("a", Rectangle()), ("a", Ball())]},
            "domain labels must be unique",
        ),
    ],
)
def test_setter_validation(kwargs, error_msg):
    with pytest.raises(ConfigError, match=re.escape(error_msg)):
        RunConfig(**kwargs)


def test_choices_are_normalised():
    res = RunConfig(fmt=" CSV ", boundary="Staircase")

    assert res.fmt == "csv"
    assert res.boundary == "staircase"


@pytest.mark.parametrize("out", [None, "", "-"])
def test_out_standard_output(out):
    assert RunConfig(out=out).out is None


def test_require_eigenpairs():
    config = RunConfig(k=3)
    config.require_eigenpairs(3)

    with pytest.raises(ConfigError, match="k must be at least 4 for this run, got 3"):
        config.require_eigenpairs(4)


def test_domain_to_section():
    res = domain_to_section(Polygon([(0, 0), (1, 0), (0, 1)], rotation=0.5))

    assert res == {
        "shape": "polygon",
        "vertices": "0.0 0.0; 1.0 0.0; 0.0 1.0",
        "translation": "0.0, 0.0",
        "rotation": "0.5",
    }


def test_format_config_round_trip():
    config = RunConfig(
        domains=[
            ("square", Rectangle(1.0, 1.0)),
            ("kite", Polygon([(0, 0), (2, 1), (0, 3), (-1, 1)], translation=(0.1, 0.2))),
            ("ball", Ball(3, 1.5)),
        ],
        h=(0.1, 0.05),
        k=5,
        tol=1e-9,
        fmt="jsonl",
        out="result.jsonl",
        seed=3,
        jobs=2,
        numeric_balls=True,
        boundary="staircase",
    )

    res = parse_config(format_config(config))

    assert res.domains == config.domains
    assert res.to_dict() == config.to_dict()


def test_read_write_config(tmpdir):
    path = os.path.join(tmpdir, "run.ini")
    config = parse_config(CONFIG_TEXT)

    write_config(config, path)
    res = read_config(path, k=5)

    assert res.k == 5
    assert res.domains == config.domains


def test_read_missing_config(tmpdir):
    with pytest.raises(ConfigError, match="cannot read"):
        read_config(os.path.join(tmpdir, "missing.ini"))


def test_repr():
    res = repr(RunConfig(domains=[("square", Rectangle())]))

    assert res.startswith("RunConfig(domains=['square'], h=0.03125, 0.015625")
