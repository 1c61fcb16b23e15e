"""A single generalized meander: transition density, terminal law and exact sampling."""

import numpy as np
from scipy import integrate

from gmeander import ModelParams, meander_density, simulate_paths
from gmeander.meander import h_weight, meander_cdf_terminal

# One particle, Bessel index ν = 1/2, drift exponent κ = 1, horizon T = 1.
# κ = 0 is the plain Bessel process; κ > 0 tilts paths towards larger values
# at the horizon through the weight h(t, x).
p = ModelParams(0.5, 1.0, N=1, T=1.0, require_even=False)
print(p, "a =", p.a_frak, "b =", p.b_frak)

# h(t, x) in closed (Kummer) form and by quadrature
for t, x in [(0.0, 0.0), (0.5, 1.0), (0.9, 2.0)]:
    print(f"h({t}, {x}) = {float(h_weight(p, t, x, 'kummer')):.12f}  quad {float(h_weight(p, t, x, 'quad')):.12f}")

# The transition density is a probability density in y
mass = integrate.quad(lambda y: float(meander_density(p, 0.2, 0.6, 0.9, y)), 0, 40)[0]
print("integral of the transition density:", mass)

# Exact samples: Bessel proposals with rejection against h, then CDF inversion at T
paths = simulate_paths(p, "exact_1particle", 20_000, 4, seed=1)
yT = paths.x[:, -1, 0]
qs = np.quantile(yT, [0.1, 0.5, 0.9])
print("empirical quantiles at T:", np.round(qs, 4))
print("model CDF at those points:", np.round(meander_cdf_terminal(p, 0.0, 0.0, qs), 4))

# The drift exponent moves mass outwards
for kappa in (0.0, 1.0, 2.0):
    q = ModelParams(0.5, kappa, N=1, require_even=False)
    m = integrate.quad(lambda y: y * float(meander_density(q, 0.0, 0.0, 1.0, y)), 0, 40)[0]
    print(f"kappa = {kappa}: mean terminal position {m:.6f}")
