"""Constrained dual bases and the projection table.

The dual polynomials are biorthogonal to B_{k+1}^m..B_{m-l-1}^m; contracting
them with the degree-n Bernstein basis gives the table used to project a
degree-n curve onto the constrained degree-m space.

Run:  python demos/02_dual_basis.py
"""
import numpy as np

from bezred import JacobiWeight, constrained_gram, dual_coeffs, phi_table

w = JacobiWeight(0.5, 0.5)
m, k, l = 7, 1, 2
g = constrained_gram(m, k, l, w)
c = dual_coeffs(g)
print(f"constrained indices {list(g.indices)}, Gram condition {g.condition():.3g}")
print("C @ G == I:", np.allclose(c @ g.entries, np.eye(len(g.indices))))

phi = phi_table(12, m, k, l, w)
print(f"\nphi table: rows {list(phi.rows)}, {phi.entries.shape[1]} columns")
print(np.array2string(phi.entries, precision=3, suppress_small=True, max_line_width=110))
