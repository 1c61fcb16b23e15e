"""Special functions: Gamma, generalized binomials, Bessel J/I, Laguerre.

Everything here is real-valued.  The Gamma function and the generalized
binomial follow the case-by-case definitions used throughout the package
(in particular Γ at negative non-integers is obtained by upward recursion,
and the binomial never passes through a singular Γ-ratio).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special as sp

__all__ = [
    "PoleError",
    "gamma_fn",
    "log_abs_gamma",
    "gen_binomial",
    "gen_binomial_array",
    "bessel_j",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j_series",
    "laguerre",
    "laguerre_all",
    "laguerre_explicit",
    "laguerre_coefficients",
    "incomplete_gamma_lower",
]

SERIES_RTOL = 1e-17
SERIES_CAP = 500


class PoleError(ValueError):
    """Raised when a Gamma function is requested at a nonpositive integer."""


def _is_nonpos_int(c: float) -> bool:
    return c <= 0 and float(c).is_integer()


def gamma_fn(c: float) -> float:
    """Γ(c) for real c outside the nonpositive integers.

    For c < 0 the value is ``Γ(c + m + 1) / (c (c+1) ... (c+m))`` with
    ``m = floor(-c)``, so the argument handed to the positive-axis Gamma lies
    in (0, 1).
    """
    c = float(c)
    if not math.isfinite(c):
        raise ValueError(f"gamma_fn: non-finite argument {c!r}")
    if _is_nonpos_int(c):
        raise PoleError(f"Gamma has a pole at {c:g}")
    if c > 0:
        return math.gamma(c) if c < 171.6 else math.inf
    m = math.floor(-c)
    den = 1.0
    for i in range(m + 1):
        den *= c + i
    return math.gamma(c + m + 1) / den


def log_abs_gamma(c: float) -> tuple[float, int]:
    """Return (log|Γ(c)|, sign Γ(c))."""
    if _is_nonpos_int(c):
        raise PoleError(f"Gamma has a pole at {c:g}")
    return float(sp.gammaln(c)), int(sp.gammasgn(c))


def _is_int(x: float) -> bool:
    return float(x).is_integer()


def gen_binomial(n: int, alpha: float) -> float:
    """Generalized binomial coefficient C(n + alpha, n).

    Five branches:

    * n = 0: 1;
    * n < 0: 0;
    * n > 0, alpha not a negative integer: Γ(n+α+1) / (Γ(n+1) Γ(α+1));
    * n > 0, alpha and n+alpha negative integers: (−1)^n Γ(−α) / (Γ(n+1) Γ(−n−α));
    * n > 0, alpha a negative integer, n+alpha ≥ 0: 0.
    """
    n = int(n)
    alpha = float(alpha)
    if n == 0:
        return 1.0
    if n < 0:
        return 0.0
    if _is_int(alpha) and alpha < 0:
        a = int(alpha)
        if n + a >= 0:
            return 0.0
        # (-1)^n Γ(-a) / (n! Γ(-n-a)) = (-1)^n C(-a-1, n), an exact integer
        return float((-1) ** n * math.comb(-a - 1, n))
    # rising product (α+1)(α+2)...(α+n)/n! keeps full precision for moderate n
    if n <= 60:
        val = 1.0
        for i in range(1, n + 1):
            val *= (alpha + i) / i
        return val
    lg = sp.gammaln(n + alpha + 1) - sp.gammaln(n + 1) - sp.gammaln(alpha + 1)
    sgn = sp.gammasgn(n + alpha + 1) * sp.gammasgn(alpha + 1)
    return float(sgn * np.exp(lg))


def gen_binomial_array(nmax: int, alpha: float) -> np.ndarray:
    """Vector ``[C(n + alpha, n) for n in 0..nmax]`` by the ratio recursion.

    C(n+α, n) = C(n−1+α, n−1)·(n+α)/n is exact branch-wise: the product hits
    zero at n = −α for a negative integer α and stays there.
    """
    out = np.empty(nmax + 1)
    out[0] = 1.0
    for n in range(1, nmax + 1):
        out[n] = out[n - 1] * (n + alpha) / n
    return out


def _check_bessel_args(nu, z):
    if np.any(np.asarray(nu) <= -1):
        raise ValueError("Bessel order must satisfy nu > -1")
    if np.any(np.asarray(z) < 0):
        raise ValueError("Bessel argument must be nonnegative")


def bessel_j(nu, z):
    """J_ν(z) for ν > −1 and z ≥ 0 (array friendly)."""
    _check_bessel_args(nu, z)
    return sp.jv(nu, z)


def bessel_i(nu, z):
    """I_ν(z) for ν > −1 and z ≥ 0."""
    _check_bessel_args(nu, z)
    return sp.iv(nu, z)


def bessel_i_scaled(nu, z):
    """e^{−z} I_ν(z); finite for large z where I_ν itself overflows."""
    _check_bessel_args(nu, z)
    return sp.ive(nu, z)


def bessel_j_series(nu: float, z: float, sign: int = -1) -> float:
    """Power series Σ (sign·z²/4)^ℓ (z/2)^ν / (ℓ! Γ(ν+ℓ+1)).

    ``sign=-1`` gives J_ν, ``sign=+1`` gives I_ν.  Intended for small and
    moderate z; for J the alternating terms lose roughly log10(e^z) digits.
    """
    q = sign * z * z / 4.0
    term = 1.0 / gamma_fn(nu + 1) if nu + 1 > 0 else 0.0
    total = term
    prev = abs(term)
    for ell in range(1, SERIES_CAP):
        term *= q / (ell * (nu + ell))
        total += term
        if abs(term) < SERIES_RTOL * abs(total) and abs(term) <= prev:
            break
        prev = abs(term)
    else:
        raise ArithmeticError("bessel_j_series: series did not converge in 500 terms")
    return total * (z / 2.0) ** nu if z > 0 else (total if nu == 0 else 0.0)


def laguerre_all(jmax: int, alpha: float, x):
    """Array of L_j^α(x) for j = 0..jmax, stacked on axis 0.

    Uses the three-term recurrence, which is a polynomial identity in α and
    therefore valid for every real superscript.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((jmax + 1,) + x.shape)
    out[0] = 1.0
    if jmax >= 1:
        out[1] = 1.0 + alpha - x
    for j in range(1, jmax):
        out[j + 1] = ((2 * j + 1 + alpha - x) * out[j] - (j + alpha) * out[j - 1]) / (j + 1)
    return out


def laguerre(j: int, alpha: float, x):
    """L_j^α(x) for integer j ≥ 0 and any real α."""
    if j < 0:
        raise ValueError("laguerre: degree must be nonnegative")
    return laguerre_all(j, alpha, x)[j]


@lru_cache(maxsize=256)
def _laguerre_coef_cached(j: int, alpha: float) -> tuple:
    return tuple(
        (-1) ** ell / math.factorial(ell) * gen_binomial(j - ell, alpha + ell)
        for ell in range(j + 1)
    )


def laguerre_coefficients(j: int, alpha: float) -> np.ndarray:
    """Monomial coefficients of L_j^α from the explicit sum

    L_j^α(x) = Σ_ℓ (−1)^ℓ/ℓ! · C(j+α, j−ℓ) x^ℓ,

    with C(j+α, j−ℓ) = gen_binomial(j−ℓ, α+ℓ).
    """
    return np.array(_laguerre_coef_cached(int(j), float(alpha)))


def laguerre_explicit(j: int, alpha: float, x):
    """L_j^α(x) from the explicit sum.  Cancels badly for large j·x."""
    coef = laguerre_coefficients(j, alpha)
    return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), coef)


def incomplete_gamma_lower(c: float, y):
    """γ(c, y) = ∫_0^y e^{−x} x^{c−1} dx for c > 0, y ≥ 0."""
    if c <= 0:
        raise ValueError("incomplete_gamma_lower requires c > 0")
    if np.any(np.asarray(y) < 0):
        raise ValueError("incomplete_gamma_lower requires y >= 0")
    return sp.gammainc(c, y) * math.gamma(c)
