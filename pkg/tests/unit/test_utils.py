import json
import os.path
import re

import numpy as np
import pandas as pd
import pytest

from eigenbounds.errors import ConfigError
from eigenbounds.utils import format_frame, format_records, to_record, write_output


@pytest.fixture
def frame():
    return pd.DataFrame(
        {"id": ["ppw", "hile_protter"], "margin": [0.25, np.inf], "holds": [True, False]}
    )


def test_to_record():
    res = to_record(
        {
            "values": np.array([1.0, 2.0]),
            "k": np.int64(3),
            "margin": np.float64(-np.inf),
            "nested": {"pair": (np.float32(0.5), float("nan"))},
        }
    )

    assert res == {
        "values": [1.0, 2.0],
        "k": 3,
        "margin": "-inf",
        "nested": {"pair": [0.5, "nan"]},
    }
    assert isinstance(res["k"], int)
    json.dumps(res)


def test_format_records():
    res = format_records([{"b": 1, "a": np.float64(2.5)}, {"c": np.inf}])

    assert res == '{"a": 2.5, "b": 1}\n{"c": "inf"}\n'


def test_format_records_empty():
    assert format_records([]) == ""


def test_format_frame_csv(frame):
    res = format_frame(frame, "csv")

    assert res == "id,margin,holds\nppw,0.25,True\nhile_protter,inf,False\n"


def test_format_frame_jsonl(frame):
    res = [json.loads(line) for line in format_frame(frame, "jsonl").splitlines()]

    assert res == [
        {"holds": True, "id": "ppw", "margin": 0.25},
        {"holds": False, "id": "hile_protter", "margin": "inf"},
    ]


def test_format_frame_table(frame):
    res = format_frame(frame, "table")

    assert res.endswith("\n")
    assert res.splitlines()[0].split() == ["id", "margin", "holds"]
    assert len(res.splitlines()) == 3


def test_format_frame_unknown(frame):
    with pytest.raises(ConfigError, match=re.escape("unknown format 'xml'")):
        format_frame(frame, "xml")


def test_write_output_to_stdout():
    assert write_output("text\n") == "text\n"


def test_write_output_to_file(tmpdir):
    out = os.path.join(tmpdir, "out.csv")

    assert write_output("a,b\n1,2\n", out) == ""
    with open(out) as fh:
        assert fh.read() == "a,b\n1,2\n"
