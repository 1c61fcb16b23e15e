"""Small quadrature helpers shared across modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import integrate, special as sp

__all__ = ["power_grid", "ordered_pair_matrix", "gauss_jacobi01", "gen_laguerre"]


def power_grid(hi: float, n: int, p: float):
    """Uniform grid in v ∈ [0, 1] mapped to z = hi·v^q.

    q is chosen so that an integrand behaving like z^{p−1} at the origin
    becomes at least v^{1} after the Jacobian.  Returns (z, dz/dv, v).
    """
    q = max(2.0, 2.0 / p) if p > 0 else 2.0
    v = np.linspace(0.0, 1.0, n)
    z = hi * v ** q
    jac = hi * q * v ** (q - 1)
    return z, jac, v


def ordered_pair_matrix(fvals, v):
    """M[i, j] = ∫∫ sgn(w − z) f_i(z) f_j(w) for samples on a uniform grid.

    ``fvals`` has shape (n_funcs, n_nodes) and already includes the Jacobian.
    Cumulative Simpson gives F_i(w) = ∫_0^w f_i; then
    M[i, j] = ∫ F_i f_j − ∫ F_j f_i.
    """
    F = integrate.cumulative_simpson(fvals, x=v, axis=-1, initial=0.0)
    P = integrate.simpson(F[:, None, :] * fvals[None, :, :], x=v, axis=-1)
    return P - P.T


@lru_cache(maxsize=64)
def gauss_jacobi01(n: int, a: float, b: float = 0.0):
    """Nodes/weights on [0, 1] for the weight u^a (1−u)^b."""
    t, w = sp.roots_jacobi(n, b, a)  # weight (1−t)^b (1+t)^a on [−1, 1]
    return (t + 1) / 2, w / 2 ** (a + b + 1)


@lru_cache(maxsize=64)
def gen_laguerre(n: int, a: float):
    """Nodes/weights on [0, ∞) for the weight u^a e^{−u}."""
    return sp.roots_genlaguerre(n, a)
