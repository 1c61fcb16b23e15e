"""Infinite-N kernels 𝒟, 𝒮, ℐ̃, 𝒮̃, 𝒢 and the homogeneous extended Bessel kernel 𝕊̃.

With 𝔞 = ν − κ/2, 𝔟 = ν − κ and s, t < 0::

    𝒟(s,x;t,y) = −1/(4(xy)^{κ/2}) ∫_0^1 θ^{1−κ} [A_x B_y − B_x A_y] dθ,
    ℐ̃(s,x;t,y) = (xy)^{κ/2} ∫_1^∞ θ^{κ−1} [Ξ_x C_y − C_x Ξ_y] dθ,
    𝒮(s,x;t,y) = ½ (x/y)^{κ/2} ∫_0^1 [C_x A_y − (𝔞A_y − B_y) Ξ_x] dθ,

where A_x = J̃^{(−𝔟−1)}(θ,1,x,−s), B_x = J̃^{(−𝔟)}(θ,1,x,−s),
C_x = Ĵ^{(𝔟+1)}(θ,1,x,s) and Ξ_x = ∫_1^∞ ξ^𝔞 Ĵ^{(𝔟+1)}(θ,ξ,x,s) dξ
(y-quantities use t).  The overall sign of ℐ̃ is the one inherited from the
finite kernel Ĩ_N = I_N + ⟨p̃Jp̃⟩, which is fixed independently by brute-force
multitime integration; with it Ĩ_N → ℐ̃ as N → ∞.  The Weber integral gives 𝒢 in closed form::

    𝒢(s,x;t,y) = ∫_0^∞ J_ν(2√(θx)) J_ν(2√(θy)) e^{2(s−t)θ} dθ
               = e^{−(x+y)/(2(t−s))} I_ν(√(xy)/(t−s)) / (2(t−s)),   s < t.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special as sp

from ..differint import jhat_diff_reduced, jhat_diff_xi_integral, jtilde_diff_reduced
from ..params import ModelParams
from .finite import KernelBlock

__all__ = [
    "kernel_D",
    "kernel_S",
    "kernel_S_tilde",
    "kernel_I_tilde",
    "kernel_G",
    "kernel_G_quad",
    "homogeneous_kernel",
    "bessel_head_integral",
    "InfiniteKernel",
    "HomogeneousKernel",
    "infinite_kernel",
    "jtilde_m1_single_integral",
    "half_order_forms",
    "kernel_S_half_order",
]

QUAD_OPTS = dict(limit=200, epsabs=1e-13, epsrel=1e-10)


def _exponent_check(params: ModelParams):
    # small-θ exponent of the 𝒟 integrand: θ^{1−κ} (θx)^ν (θy)^ν → θ^{2𝔞+1}
    if 2 * params.a_frak + 1 <= -1:
        raise ArithmeticError("θ-integrand not integrable at 0 (2𝔞+1 ≤ −1)")


# θ-functions, cached on (θ, x, shift) so that quadratures sharing nodes reuse them

@lru_cache(maxsize=200000)
def _tilde_pair(nu, b_frak, theta, x, sigma):
    """(A, B) / (θx)^ν with A = J̃^{(−𝔟−1)}(θ,1,x,σ), B = J̃^{(−𝔟)}(θ,1,x,σ)."""
    A = float(jtilde_diff_reduced(nu, -b_frak - 1, theta, 1.0, x, sigma))
    B = float(jtilde_diff_reduced(nu, -b_frak, theta, 1.0, x, sigma))
    return A, B


@lru_cache(maxsize=200000)
def _hat_pair(nu, b_frak, a_frak, theta, x, s):
    """(C, Ξ) · e^{−2sθ}: Ĵ^{(𝔟+1)}(θ,1,x,s) and ∫_1^∞ ξ^𝔞 Ĵ^{(𝔟+1)}(θ,ξ,x,s) dξ."""
    C = float(jhat_diff_reduced(nu, b_frak + 1, theta, 1.0, x, s))
    Xi = float(jhat_diff_xi_integral(nu, b_frak + 1, theta, x, s, a_frak, reduced=True))
    return C, Xi


def kernel_D(params: ModelParams, s, x, t, y) -> float:
    """𝒟(s,x;t,y); the factor (θx)^ν(θy)^ν θ^{1−κ} is carried as θ^{2𝔞+1}."""
    _exponent_check(params)
    nu, b = params.nu, params.b_frak
    if s == t and x == y:
        return 0.0

    def f(th):
        Ax, Bx = _tilde_pair(nu, b, th, x, -s)
        Ay, By = _tilde_pair(nu, b, th, y, -t)
        return Ax * By - Bx * Ay

    val = integrate.quad(f, 0.0, 1.0, weight="alg", wvar=(2 * params.a_frak + 1, 0.0), **QUAD_OPTS)[0]
    return -0.25 * (x * y) ** params.a_frak * val


def kernel_S(params: ModelParams, s, x, t, y) -> float:
    """𝒮(s,x;t,y), s < 0."""
    if s >= 0:
        raise ValueError("𝒮 needs s < 0")
    nu, a, b = params.nu, params.a_frak, params.b_frak

    def f(th):
        C, Xi = _hat_pair(nu, b, a, th, x, s)
        Ay, By = _tilde_pair(nu, b, th, y, -t)
        # (θy)^ν restores the tilde normalization; e^{2sθ} restores the hat one
        return (C * Ay - (a * Ay - By) * Xi) * (th * y) ** nu * math.exp(2 * s * th)

    val = integrate.quad(f, 0.0, 1.0, **QUAD_OPTS)[0]
    return 0.5 * (x / y) ** (params.kappa / 2) * val


def kernel_I_tilde(params: ModelParams, s, x, t, y) -> float:
    """ℐ̃(s,x;t,y), s, t < 0; integrand decays like e^{2(s+t)θ}."""
    if s >= 0 or t >= 0:
        raise ValueError("ℐ̃ needs s, t < 0")
    if s == t and x == y:
        return 0.0
    nu, a, b, kappa = params.nu, params.a_frak, params.b_frak, params.kappa
    rate = 2 * (s + t)

    def f(th):
        Cx, Xx = _hat_pair(nu, b, a, th, x, s)
        Cy, Xy = _hat_pair(nu, b, a, th, y, t)
        return th ** (kappa - 1) * (Xx * Cy - Cx * Xy) * math.exp(rate * (th - 1))

    hi = 1.0 + 40.0 / abs(rate)
    val = integrate.quad(f, 1.0, hi, **QUAD_OPTS)[0]
    return (x * y) ** (kappa / 2) * val * math.exp(rate)


def kernel_G(nu: float, s, x, t, y) -> float:
    """𝒢(s,x;t,y) for s < t by the Weber closed form."""
    d = t - s
    if d <= 0:
        raise ValueError("𝒢 needs s < t")
    z = math.sqrt(x * y) / d
    # e^{−(x+y)/2d} I_ν(z) = e^{−(√x−√y)²/2d} ive(ν, z)
    return math.exp(-(math.sqrt(x) - math.sqrt(y)) ** 2 / (2 * d)) * sp.ive(nu, z) / (2 * d)


def kernel_G_quad(nu: float, s, x, t, y) -> float:
    """𝒢 by direct quadrature of its defining integral (cross-check)."""
    d = t - s
    f = lambda th: sp.jv(nu, 2 * math.sqrt(th * x)) * sp.jv(nu, 2 * math.sqrt(th * y)) * math.exp(-2 * d * th)
    return integrate.quad(f, 0, 60.0 / d, limit=2000, epsabs=1e-14, epsrel=1e-12)[0]


def kernel_S_tilde(params: ModelParams, s, x, t, y) -> float:
    """𝒮̃ = 𝒮 − 1_{s<t} (y/x)^{𝔟/2} 𝒢; at s = t there is no subtraction."""
    val = kernel_S(params, s, x, t, y)
    if s < t:
        val -= (y / x) ** (params.b_frak / 2) * kernel_G(params.nu, s, x, t, y)
    return val


def _jj(nu, th, x, y):
    return sp.jv(nu, 2 * np.sqrt(th * x)) * sp.jv(nu, 2 * np.sqrt(th * y))


def _equal_time_closed(nu, x, y):
    u, v = 2 * math.sqrt(x), 2 * math.sqrt(y)
    dJ = lambda z: 0.5 * (sp.jv(nu - 1, z) - sp.jv(nu + 1, z))
    return (sp.jv(nu, u) * math.sqrt(y) * dJ(v) - sp.jv(nu, v) * math.sqrt(x) * dJ(u)) / (x - y)


def _equal_time_diag(nu, x):
    """x = y limit J'_ν(u)² + (1 − ν²/u²) J_ν(u)², u = 2√x.

    L'Hôpital on the closed form gives J'² − J J'' − J J'/u; the Bessel ODE
    removes J''.
    """
    u = 2 * math.sqrt(x)
    J = sp.jv(nu, u)
    dJ = 0.5 * (sp.jv(nu - 1, u) - sp.jv(nu + 1, u))
    return dJ * dJ + (1 - nu * nu / (u * u)) * J * J


def bessel_head_integral(nu: float, d: float, x, y) -> float:
    """∫_0^1 J_ν(2√(θx)) J_ν(2√(θy)) e^{2dθ} dθ."""
    f = lambda th: _jj(nu, th, x, y) * math.exp(2 * d * th)
    return integrate.quad(f, 0, 1, limit=200, epsabs=1e-15, epsrel=1e-12)[0]


def homogeneous_kernel(nu: float, s, x, t, y, method: str = "auto") -> float:
    """𝕊̃(s,x;t,y), the temporally homogeneous extended Bessel kernel."""
    if s > t:
        return bessel_head_integral(nu, s - t, x, y)
    if s == t:
        if x == y:
            return _equal_time_diag(nu, x)
        if method == "integral" or abs(x - y) < 1e-5 * (1 + abs(x)):
            f = lambda th: _jj(nu, th, x, y)
            return integrate.quad(f, 0, 1, limit=200, epsabs=1e-15, epsrel=1e-12)[0]
        return _equal_time_closed(nu, x, y)
    # s < t: −∫_1^∞ = ∫_0^1 − 𝒢
    return bessel_head_integral(nu, s - t, x, y) - kernel_G(nu, s, x, t, y)


@dataclass
class InfiniteKernel:
    """Block provider for the infinite system at shifted times s_1 < … < s_M ≤ 0."""

    params: ModelParams
    shifts: tuple

    def __post_init__(self):
        sh = tuple(float(s) for s in self.shifts)
        if any(b <= a for a, b in zip(sh, sh[1:])):
            raise ValueError("shifted times must be strictly increasing")
        if sh and sh[-1] > 0:
            raise ValueError("shifted times must be nonpositive")
        self.shifts = sh
        self._cache = {}

    def s(self, m: int) -> float:
        return self.shifts[m - 1]

    def block(self, m, x, n, y) -> KernelBlock:
        key = (m, x, n, y)
        if key not in self._cache:
            p, s, t = self.params, self.s(m), self.s(n)
            same = (m == n and x == y)
            self._cache[key] = KernelBlock(
                d=0.0 if same else kernel_D(p, s, x, t, y),
                s_fwd=kernel_S_tilde(p, s, x, t, y),
                s_bwd=kernel_S_tilde(p, t, y, s, x),
                i=0.0 if same else kernel_I_tilde(p, s, x, t, y),
            )
        return self._cache[key]


@dataclass
class HomogeneousKernel:
    nu: float
    shifts: tuple

    def entry(self, m, x, n, y) -> float:
        return homogeneous_kernel(self.nu, self.shifts[m - 1], x, self.shifts[n - 1], y)


def infinite_kernel(params: ModelParams, s, x, t, y) -> KernelBlock:
    """One KernelBlock of the infinite-N kernel at (s, x), (t, y)."""
    same = (s == t and x == y)
    return KernelBlock(
        d=0.0 if same else kernel_D(params, s, x, t, y),
        s_fwd=kernel_S_tilde(params, s, x, t, y),
        s_bwd=kernel_S_tilde(params, t, y, s, x),
        i=0.0 if same else kernel_I_tilde(params, s, x, t, y),
    )


# ------------------------------------------------------- single-integral forms

def jtilde_m1_single_integral(nu, theta, x, s) -> float:
    """J̃^{(−1)}(θ,1,x,s) = θ^{−1} x^{ν/2} ∫_0^θ u^{ν/2} J_ν(2√(ux)) e^{2su} du."""
    f = lambda u: u ** (nu / 2) * sp.jv(nu, 2 * math.sqrt(u * x)) * math.exp(2 * s * u)
    return x ** (nu / 2) / theta * integrate.quad(f, 0, theta, limit=200, epsabs=1e-15, epsrel=1e-12)[0]


def _quad_quiet(f, a, b, **kw):
    # the η^{-3/4} endpoint of the derivative forms trips QUADPACK's roundoff
    # detector although the result is accurate
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, a, b, **kw)[0]


def half_order_forms(theta, x, s):
    """Single-integral forms at (ν, κ) = (1/2, 1), where 𝔞 = 0 and 𝔟 = −1/2.

    Returns (J̃^{(−1/2)}(θ,1,x,−s), J̃^{(1/2)}(θ,1,x,−s), Ĵ^{(1/2)}(θ,1,x,s),
    ∫_1^∞ Ĵ^{(1/2)}(θ,ξ,x,s) dξ) for s < 0, each by adaptive quadrature with the
    (1−η)^{−1/2} or (ξ−1)^{−1/2} endpoint handled through the algebraic weight.
    """
    sig = -s
    rp = math.sqrt(math.pi)
    q = lambda u: math.sqrt(theta * u * x)
    j12 = lambda z: sp.jv(0.5, z)
    dj12 = lambda z: 0.5 * (sp.jv(-0.5, z) - sp.jv(1.5, z))

    g = lambda eta: eta ** 0.25 * j12(2 * q(eta)) * math.exp(2 * sig * theta * eta)

    def dg(eta):
        z = 2 * q(eta)
        dz = theta * x / q(eta)
        e = math.exp(2 * sig * theta * eta)
        return (0.25 * eta ** -0.75 * j12(z) + eta ** 0.25 * dj12(z) * dz + eta ** 0.25 * j12(z) * 2 * sig * theta) * e

    opts = dict(weight="alg", wvar=(0.0, -0.5), limit=200, epsabs=1e-15, epsrel=1e-12)
    pre = (theta * x) ** 0.25 / rp
    jt_m = pre * _quad_quiet(g, 0, 1, **opts)
    jt_p = pre * _quad_quiet(dg, 0, 1, **opts)

    h = lambda xi: xi ** -0.25 * j12(2 * q(xi)) * math.exp(2 * s * theta * xi)

    def dh(xi):
        z = 2 * q(xi)
        dz = theta * x / q(xi)
        e = math.exp(2 * s * theta * xi)
        return (-0.25 * xi ** -1.25 * j12(z) + xi ** -0.25 * dj12(z) * dz + xi ** -0.25 * j12(z) * 2 * s * theta) * e

    L = 40.0 / (2 * abs(s) * theta)
    wopts = dict(weight="alg", wvar=(-0.5, 0.0), limit=400, epsabs=1e-15, epsrel=1e-12)
    pre_h = (theta * x) ** -0.25 / rp
    jh = -pre_h * _quad_quiet(dh, 1.0, 1.0 + L, **wopts)
    xi_int = pre_h * _quad_quiet(h, 1.0, 1.0 + L, **wopts)
    return jt_m, jt_p, jh, xi_int


def kernel_S_half_order(s, x, t, y) -> float:
    """𝒮(s,x;t,y) at (ν,κ) = (1/2,1) built from the single-integral forms."""
    def f(th):
        _, _, C, Xi = half_order_forms(th, x, s)
        Ay, By, _, _ = half_order_forms(th, y, t)
        return C * Ay - (0.0 * Ay - By) * Xi

    val = integrate.quad(f, 0.0, 1.0, limit=100, epsabs=1e-12, epsrel=1e-9)[0]
    return 0.5 * (x / y) ** 0.5 * val
