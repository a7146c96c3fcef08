"""Effect of the Jacobi weight on a reduction.

Weights with negative exponents stress the ends of the parameter interval,
positive ones the middle.  The error is always measured in the weight that
was optimized, so we also report the unweighted sampled maximum error.

Run:  python demos/05_weights.py
"""
import numpy as np

from bezred import WEIGHT_PRESETS, BezierCurve, ContinuitySpec, JacobiWeight, ReductionProblem, reduce

rng = np.random.default_rng(3)
P = BezierCurve(np.cumsum(rng.normal(size=(11, 2)), axis=0))

print(f"{'weight':>14}  {'alpha':>5} {'beta':>5}  {'e2':>9}  {'einf':>9}")
for name, (a, b) in WEIGHT_PRESETS.items():
    res = reduce(ReductionProblem(P, 6, ContinuitySpec(1, 1), JacobiWeight(a, b)), "g")
    print(f"{name:>14}  {a:5.1f} {b:5.1f}  {res.e2:9.5f}  {res.einf:9.5f}")
