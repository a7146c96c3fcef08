"""Reducing one curve in the three continuity modes.

Parametric C^{2,2}, hybrid C^{1,1}/G^{2,2} and full G^{2,2} reductions of the
same degree-12 curve; the geometric modes trade parametric equality for a
smaller error.  Writes an SVG per mode next to this script.

Run:  python demos/04_reduction_modes.py
"""
import pathlib

import numpy as np

from bezred import BezierCurve, ContinuitySpec, ReductionProblem, degree_elevate, emit_svg, reduce

rng = np.random.default_rng(7)
shape = degree_elevate(BezierCurve([[0, 0], [1, 3], [4, 3], [5, 0]]), 12)
P = BezierCurve(shape.points + 0.4 * rng.normal(size=shape.points.shape))
problem = ReductionProblem(P, 7, ContinuitySpec(2, 2))

out = pathlib.Path(__file__).with_name("output")
out.mkdir(exist_ok=True)
print(f"{'mode':>4}  {'e2':>10}  {'einf':>10}  lambda / mu")
for mode in ("c", "cg", "g"):
    res = reduce(problem, mode)
    print(f"{mode:>4}  {res.e2:10.6f}  {res.einf:10.6f}  "
          f"{np.round(res.params.lambdas, 4).tolist()} / {np.round(res.params.mus, 4).tolist()}")
    emit_svg(P, res.reduced, out / f"modes_{mode}.svg", {"title": f"mode {mode}"})
print(f"\nplots written to {out}")
