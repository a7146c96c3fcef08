"""Static SVG comparison plot of an input curve and its reduction.

Coordinates are written with y negated so the picture is upright; the
viewBox is expressed in those flipped coordinates.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from .bernstein import BezierCurve, evaluate
from .errors import UnsupportedPlotError

DEFAULTS = {
    "samples": 500,
    "width": 640,
    "margin": 0.05,
    "source_color": "#1f4e9c",
    "reduced_color": "#c0392b",
    "title": None,
}


def _fmt(v: float) -> str:
    return "%.10g" % v


def _points_attr(xy: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in xy)


def view_box(P: BezierCurve, R: BezierCurve, margin: float = 0.05) -> tuple:
    """(x, y, width, height) of the flipped-coordinate box around both polygons."""
    pts = np.vstack([P.points, R.points])
    # sampled curves stay inside the convex hull of their control points
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    size = float(span.max()) if span.max() > 0 else 1.0
    span = np.where(span > 0, span, size)
    pad = margin * span
    x0, x1 = lo[0] - pad[0], hi[0] + pad[0]
    y0, y1 = lo[1] - pad[1], hi[1] + pad[1]
    return (x0, -y1, x1 - x0, y1 - y0)


def build_svg(P: BezierCurve, R: BezierCurve, options: dict | None = None) -> ET.Element:
    opts = dict(DEFAULTS, **(options or {}))
    if P.dim != 2 or R.dim != 2:
        raise UnsupportedPlotError(f"SVG plots need planar curves, got dimensions {P.dim} and {R.dim}")
    vx, vy, vw, vh = view_box(P, R, opts["margin"])
    width = int(opts["width"])
    height = max(1, int(round(width * vh / vw)))
    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": str(width),
        "height": str(height),
        "viewBox": " ".join(_fmt(v) for v in (vx, vy, vw, vh)),
    })
    if opts["title"]:
        ET.SubElement(root, "title").text = str(opts["title"])
    radius = 0.006 * max(vw, vh)
    t = np.linspace(0.0, 1.0, int(opts["samples"]))
    layers = (
        ("source", P, opts["source_color"], None),
        ("reduced", R, opts["reduced_color"], "6 4"),
    )
    for name, curve, color, dash in layers:
        group = ET.SubElement(root, "g", {"id": f"{name}-polygon", "fill": "none", "stroke": color})
        ET.SubElement(group, "polyline", {
            "points": _points_attr(curve.points),
            "stroke-width": "0.6", "stroke-opacity": "0.6",
            "vector-effect": "non-scaling-stroke",
        })
        for x, y in curve.points:
            ET.SubElement(group, "circle", {
                "cx": _fmt(x), "cy": _fmt(-y), "r": _fmt(radius),
                "fill": color, "stroke": "none",
            })
    for name, curve, color, dash in layers:
        attrs = {
            "id": f"{name}-curve",
            "points": _points_attr(evaluate(curve, t)),
            "fill": "none", "stroke": color, "stroke-width": "1.8",
            "vector-effect": "non-scaling-stroke",
        }
        if dash:
            attrs["stroke-dasharray"] = dash
        ET.SubElement(root, "polyline", attrs)
    return root


def emit_svg(P: BezierCurve, R: BezierCurve, path, options: dict | None = None) -> None:
    """Write a comparison plot: P solid, R dashed, both control polygons thin.

    Raises UnsupportedPlotError unless both curves are planar.
    """
    root = build_svg(P, R, options)
    ET.indent(root)
    text = ET.tostring(root, encoding="unicode")
    Path(path).write_text('<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n", encoding="utf-8")
