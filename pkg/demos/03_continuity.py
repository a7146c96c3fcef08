"""Endpoint continuity in terms of control points.

A reparametrization with phi'(0) = lambda_1, phi''(0) = lambda_2 ... changes
the first control points of the reduced curve while keeping tangent
direction and curvature of the input at t=0.

Run:  python demos/03_continuity.py
"""
import numpy as np

from bezred import BezierCurve, endpoint_derivatives, start_boundary

P = BezierCurve([[0, 0], [1, 0.5], [2, 2], [3, 2.5], [4, 1], [5, 0], [6, 0.5]])
m = 4


def curvature(d):
    return (d[1, 0] * d[2, 1] - d[1, 1] * d[2, 0]) / np.hypot(*d[1]) ** 3


for lambdas in ([1.0, 0.0], [0.7, 0.0], [1.3, -0.8]):
    head = start_boundary(P, m, 2, lambdas)
    # fill the rest of a degree-4 curve arbitrarily; r_0..r_2 fix the 2-jet
    R = BezierCurve(np.vstack([head, [[3, 1], [6, 0.5]]]))
    dP, dR = endpoint_derivatives(P, 2), endpoint_derivatives(R, 2)
    print(f"lambda={lambdas}: r0..r2 = {np.round(head, 4).tolist()}")
    print(f"   tangent ratio {np.linalg.norm(dR[1]) / np.linalg.norm(dP[1]):.3f}, "
          f"curvature P {curvature(dP):.6f}  R {curvature(dR):.6f}")
