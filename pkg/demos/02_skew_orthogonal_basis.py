"""Skew-orthogonal polynomials behind the Pfaffian structure."""

import numpy as np

from gmeander import ModelParams, SkewBasis, TimeGrid
from gmeander.skeworth import (poly_coeffs_mp, poly_eval, r_q, rstar, skew_inner_elementary, skew_inner_full,
                               skew_laguerre_table)

p = ModelParams(1.0, 1.0, N=4, T=1.0)
basis = SkewBasis.build(p, K=8)

# α expands Q_k in Laguerre polynomials L_j^ν; β is its inverse
np.set_printoptions(precision=4, suppress=True, linewidth=120)
print("alpha (first rows):\n", basis.alpha[:5, :5])
print("||alpha.beta - I||_max =", basis.inverse_residual())

# The elementary skew product pairs F_2q with G_2l+1 diagonally
a = p.a_frak
F = [poly_coeffs_mp("F", 2 * q, a) for q in range(4)]
G = [poly_coeffs_mp("G", 2 * l + 1, a) for l in range(4)]
M = np.array([[skew_inner_elementary(f, g, a) for g in G] for f in F])
print("<F_2q, G_2l+1>_*:\n", M)
print("r*_q:", rstar(np.arange(4), a))

# Laguerre skew table from the basis: antisymmetric by construction
S = skew_laguerre_table(basis, 5)
print("antisymmetry defect:", np.max(np.abs(S + S.T)))

# The full skew product at the first observation time reproduces r_q
g = TimeGrid(1.0, [0.5])
for q in (0, 1):
    f = lambda x, k=2 * q: poly_eval("R", k, x, basis=basis, c1=g.c(1), chi1=g.chi(1))
    h = lambda x, k=2 * q + 1: poly_eval("R", k, x, basis=basis, c1=g.c(1), chi1=g.chi(1))
    print(f"r_{q}: closed form {float(r_q(q, p, g.t(1))):.10e}   quadrature {skew_inner_full(f, h, p, g, route='quadrature'):.10e}")
