"""CSV and JSON serialisation of samples, curves and reports.

Floats are written with 17 significant digits so every value survives a round
trip. CSV outputs may start with ``#`` lines carrying the run configuration;
readers skip them.
"""

import csv
import json
import math

import numpy as np

from .exceptions import NegativeResponse, SampleFormatError
from .frontier import Flag, FrontierCurve
from .local_fit import Sample

__all__ = [
    "format_float",
    "read_sample_csv",
    "write_sample_csv",
    "read_curve_csv",
    "write_curve_csv",
    "curve_to_dict",
    "write_json",
]


def format_float(v):
    v = float(v)
    return "nan" if math.isnan(v) else f"{v:.17g}"


def _write_header_comment(fh, config):
    if config is not None:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")


def _data_lines(fh):
    """Yield ``(line_number, stripped_text)`` skipping comments and blanks."""
    for lineno, raw in enumerate(fh, start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            yield lineno, text


def read_sample_csv(path):
    """Read a sample from a CSV file with header ``x,y``.

    Raises
    ------
    OSError
        If the file cannot be opened.
    SampleFormatError
        On a bad header or a non-numeric / non-finite value (with line number).
    NegativeResponse
        On a negative ``y`` (with line number).
    """
    xs, ys = [], []
    with open(path, newline="") as fh:
        lines = _data_lines(fh)
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise SampleFormatError("empty file, expected header 'x,y'") from None
        if [c.strip() for c in header.split(",")] != ["x", "y"]:
            raise SampleFormatError(f"expected header 'x,y', got {header!r}", lineno)
        for lineno, text in lines:
            fields = text.split(",")
            if len(fields) != 2:
                raise SampleFormatError(f"expected 2 fields, got {len(fields)}", lineno)
            try:
                x, y = float(fields[0]), float(fields[1])
            except ValueError:
                raise SampleFormatError(f"non-numeric row {text!r}", lineno) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise SampleFormatError(f"non-finite value in {text!r}", lineno)
            if y < 0:
                raise NegativeResponse(f"negative response y={fields[1].strip()}", lineno)
            xs.append(x)
            ys.append(y)
    if not xs:
        raise SampleFormatError("no observations after the header")
    return Sample(np.array(xs), np.array(ys))


def write_sample_csv(sample, path, config=None):
    with open(path, "w", newline="") as fh:
        _write_header_comment(fh, config)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in zip(sample.x, sample.y):
            w.writerow([format_float(x), format_float(y)])


def write_curve_csv(curve, path, config=None):
    with open(path, "w", newline="") as fh:
        _write_header_comment(fh, config)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["grid", "value", "flag"])
        for g, v, f in zip(curve.grid, curve.values, curve.flags):
            w.writerow([format_float(g), format_float(v), f])


def read_curve_csv(path):
    grid, values, flags = [], [], []
    valid = {f.value for f in Flag}
    with open(path, newline="") as fh:
        lines = _data_lines(fh)
        lineno, header = next(lines)
        if header.split(",") != ["grid", "value", "flag"]:
            raise SampleFormatError(f"expected header 'grid,value,flag', got {header!r}", lineno)
        for lineno, text in lines:
            g, v, f = text.split(",")
            if f not in valid:
                raise SampleFormatError(f"unknown flag {f!r}", lineno)
            grid.append(float(g))
            values.append(float(v))
            flags.append(f)
    return FrontierCurve(np.array(grid), np.array(values), np.array(flags, dtype=str))


def curve_to_dict(curve):
    return {
        "grid": curve.grid.tolist(),
        "value": [None if math.isnan(v) else float(v) for v in curve.values],
        "flag": curve.flags.tolist(),
    }


def write_json(doc, path):
    """Write ``doc`` deterministically (sorted keys, no timestamps)."""
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")
