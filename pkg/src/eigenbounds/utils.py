"""
Utility functions
"""
import json
import math

import numpy as np
import pandas as pd

from .errors import ConfigError


def _plain(value):
    # numpy scalars and arrays to builtins, non-finite floats to strings
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}

    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]

    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]

    if isinstance(value, np.generic):
        value = value.item()

    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)

    return value


def to_record(mapping):
    """
    Convert a mapping to a JSON-serialisable record

    Parameters
    ----------
    mapping : dict
        Mapping with numpy values, nested containers or dataclass dictionaries

    Returns
    -------
    dict
    """
    return _plain(mapping)


def format_records(records):
    """
    Line-delimited JSON, one record per line with sorted keys
    """
    return "".join(
        json.dumps(to_record(r), sort_keys=True) + "\n" for r in records
    )


def format_frame(frame, fmt):
    """
    Render a table in one of the output formats

    Parameters
    ----------
    frame : :obj:`pd.DataFrame`
        Table to render

    fmt : str
        ``"table"`` (human readable), ``"csv"`` or ``"jsonl"``

    Returns
    -------
    str

    Raises
    ------
    ConfigError
        Unknown format
    """
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")

    if fmt == "jsonl":
        return format_records(frame.to_dict(orient="records"))

    if fmt == "table":
        with pd.option_context("display.max_colwidth", 60, "display.width", 200):
            return frame.to_string(index=False) + "\n"

    raise ConfigError("unknown format {!r}".format(fmt))


def write_output(text, out=None):
    """
    Write ``text`` to ``out`` or, if ``out`` is ``None``, return it unchanged for
    printing
    """
    if out is None:
        return text

    with open(out, "w") as fh:
        fh.write(text)

    return ""
