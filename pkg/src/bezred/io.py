"""Curve files and report serialization.

A curve file is UTF-8 JSON of the form

    {"degree": 3, "dimension": 2, "points": [[0, 0], [1, 2], [3, 2], [4, 0]]}

Floats are always written with 17 significant digits, so a save/load round
trip reproduces every coordinate bit for bit (negative zero included).
"""
from __future__ import annotations

import json
import math
from numbers import Integral, Real
from pathlib import Path

import numpy as np

from .bernstein import BezierCurve
from .errors import DomainError


class CurveFormatError(DomainError):
    """A curve file is malformed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def format_float(x: float) -> str:
    """Shortest-unambiguous is not enough here: always emit 17 digits."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"cannot serialize non-finite value {x!r}")
    s = "%.17g" % x
    if not any(c in s for c in ".e"):
        s += ".0"  # keeps -0.0 and integral values typed as floats
    return s


def to_json(obj, indent: int | None = None, _level: int = 0) -> str:
    """JSON text with every float at 17 significant digits.

    Non-finite floats become ``null``.  numpy scalars and arrays, tuples and
    dicts with string keys are accepted; other objects raise TypeError.
    """
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    elif isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, Integral):
        return str(int(obj))
    if isinstance(obj, Real):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _reject_constant(name):
    raise CurveFormatError("file", f"non-finite number {name} is not allowed")


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def parse_curve(data) -> BezierCurve:
    """Validate a decoded curve object and build the curve."""
    if not isinstance(data, dict):
        raise CurveFormatError("file", "top level must be a JSON object")
    for key in ("degree", "dimension", "points"):
        if key not in data:
            raise CurveFormatError(key, "missing")
    degree, dim, points = data["degree"], data["dimension"], data["points"]
    if not _is_int(degree) or degree < 0:
        raise CurveFormatError("degree", f"expected a nonnegative integer, got {degree!r}")
    if not _is_int(dim) or dim < 1:
        raise CurveFormatError("dimension", f"expected a positive integer, got {dim!r}")
    if not isinstance(points, list):
        raise CurveFormatError("points", "expected an array of arrays")
    if len(points) != degree + 1:
        raise CurveFormatError("points", f"expected degree + 1 = {degree + 1} points, got {len(points)}")
    for i, p in enumerate(points):
        if not isinstance(p, list) or len(p) != dim:
            got = len(p) if isinstance(p, list) else type(p).__name__
            raise CurveFormatError(f"points[{i}]", f"expected {dim} coordinates, got {got}")
        for h, c in enumerate(p):
            if not _is_number(c) or not math.isfinite(c):
                raise CurveFormatError(f"points[{i}][{h}]", f"expected a finite number, got {c!r}")
    return BezierCurve(np.array(points, dtype=float).reshape(degree + 1, dim))


def load_curve(path) -> BezierCurve:
    """Read and validate a curve file.

    Content problems raise CurveFormatError; OSError propagates unchanged.
    """
    raw = Path(path).read_bytes()
    try:
        data = json.loads(raw.decode("utf-8"), parse_constant=_reject_constant)
    except UnicodeDecodeError as exc:
        raise CurveFormatError("file", f"not valid UTF-8 ({exc.reason})") from None
    except json.JSONDecodeError as exc:
        raise CurveFormatError("file", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_curve(data)


def curve_to_json(curve: BezierCurve) -> str:
    body = to_json({"degree": curve.degree, "dimension": curve.dim, "points": curve.points}, indent=None)
    return body + "\n"


def save_curve(curve: BezierCurve, path) -> None:
    Path(path).write_text(curve_to_json(curve), encoding="utf-8")
