"""Bernstein basics: evaluation, degree elevation and weighted inner products.

Run:  python demos/01_bernstein_basics.py
"""
import numpy as np

from bezred import BezierCurve, JacobiWeight, bernstein_gram, degree_elevate, endpoint_derivatives, evaluate

# A planar cubic
P = BezierCurve([[0, 0], [1, 2], [3, 2], [4, 0]])
t = np.linspace(0, 1, 5)
print("cubic sampled at", t)
print(evaluate(P, t))

# Elevation changes the control polygon but not the curve
E = degree_elevate(P, 7)
print("\nelevated to degree 7, max deviation on a fine grid:",
      np.abs(evaluate(E, np.linspace(0, 1, 201)) - evaluate(P, np.linspace(0, 1, 201))).max())

# Endpoint derivatives come straight from forward differences
print("\nderivatives 0..3 at t=0:\n", endpoint_derivatives(P, 3, end=0))

# The Gram matrix of the degree-3 basis under two different weights
for w in (JacobiWeight(0, 0), JacobiWeight(-0.5, -0.5)):
    print(f"\nGram matrix, alpha={w.alpha}, beta={w.beta}")
    print(np.array2string(bernstein_gram(3, 3, w), precision=5))
