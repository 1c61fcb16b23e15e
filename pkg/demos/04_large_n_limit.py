"""From N particles to the infinite system and the extended Bessel kernel."""

from gmeander import ModelParams
from gmeander.kernels import (asymptotic_validate, homogeneous_kernel, homogeneous_limit_check, kernel_convergence,
                              kernel_D, kernel_S_tilde)

nu, kappa = 1.0, 1.0

# Scaled building blocks of the finite kernel against their limits (T = N, t = N + s)
for mode in ("R_even", "R_odd", "Phi_even", "Phi_odd"):
    r = asymptotic_validate(nu, kappa, (50, 100, 200), mode)
    print(mode, [f"{e:.3e}" for e in r.errors])

# Kernel entries at two shifted times.  Errors fall roughly like 1/N.
reps = kernel_convergence(nu, kappa, (50, 100, 200), shifts=(-1.0, -0.5), points=(1.0, 2.0))
for r in reps[:6]:
    print(f"{r.name:24s}", [f"{e:.3e}" for e in r.errors])

# Infinite kernel at a pair of points
p = ModelParams(nu, kappa)
print("D(-1,1;-0.5,2) =", kernel_D(p, -1.0, 1.0, -0.5, 2.0))
print("S~(-1,1;-0.5,2) =", kernel_S_tilde(p, -1.0, 1.0, -0.5, 2.0))

# Far in the past the D and I~ parts die out and S~ becomes the gauged
# extended Bessel kernel, so correlations turn determinantal.
h = homogeneous_limit_check(0.5, 1.0, shifts=(-5.0, -10.0, -20.0), points=(1.0,))
print("|D I~| :", [f"{abs(v):.2e}" for v in h["DI"]])
print("S gap  :", [f"{v:.2e}" for v in h["S_gap"]])

# Equal-time extended Bessel kernel is the hard-edge Bessel kernel
for x, y in ((0.5, 0.5), (0.5, 2.0)):
    print(f"K({x},{y}) =", homogeneous_kernel(0.0, 0.0, x, 0.0, y))
