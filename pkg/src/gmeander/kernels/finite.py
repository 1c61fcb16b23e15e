"""Finite-N matrix-kernel elements D, S, Ĩ and S̃.

All R and Φ values are carried in the scaled form

    R̃_k^{(m)} = R_k^{(m)} / (k! (c_1/χ_1)^k),   Φ̃_k^{(m)} = Φ_k^{(m)} / (k! (c_1/χ_1)^k),

so that 1/r_ℓ · R_{2ℓ}R_{2ℓ+1} = R̃_{2ℓ}R̃_{2ℓ+1}/r̃_ℓ with
r̃_ℓ = 2^{−2ν−2} T^{−κ} r*_ℓ / Γ(ν+1)² and no factorials ever appear.

Closed forms (m = 1..M+1, ξ = x/c_m)::

    R̃_k^{(m)}(x) = t_m^{−ν−1} x^𝔞 e^{(−1+t_m/2T)ξ} / (2^{ν+1}Γ(ν+1)) · Σ_j α_{k,j} L_j^ν(ξ) χ_m^j,
    Φ̃_k^{(m)}(x) = c_m^{−ν−1} t_m^{ν+1} T^{−κ} x^{κ/2} e^{−t_m ξ/2T} / (2^{ν+1}Γ(ν+1))
                   · Σ_j ⟨Q_k, L_j⟩_* L̂_j(ξ),    L̂_j = j!/Γ(j+1+ν) L_j^ν(ξ) χ_m^{−j}.

For m = M+1 (χ = 1) the j-series does not converge; there
Φ^{(M+1)}(x) = ∫ R^{(M+1)}(y) sgn(x−y) dy is evaluated with the closed-form
incomplete integrals of Q_k against e^{−u/2}u^𝔞.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special as sp

from ..differint import ConvergenceError
from ..meander import ptilde
from ..params import ModelParams, TimeGrid
from ..quadrature import gen_laguerre
from ..skeworth import SkewBasis, _odd_cumprod, b_factor, rstar
from ..specfun import gen_binomial_array, laguerre_all

__all__ = [
    "KernelBlock",
    "FiniteKernel",
    "finite_kernel",
    "r_im",
    "phi_im",
    "incomplete_q_integrals",
]


@dataclass(frozen=True)
class KernelBlock:
    """D(m,x;n,y), S̃(m,x;n,y), S̃(n,y;m,x) and Ĩ(m,x;n,y) at one point pair."""

    d: float
    s_fwd: float
    s_bwd: float
    i: float

    def __post_init__(self):
        for name in ("d", "s_fwd", "s_bwd", "i"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def matrix(self) -> np.ndarray:
        """[[D, S̃(n,y;m,x)], [−S̃(m,x;n,y), −Ĩ]]."""
        return np.array([[self.d, self.s_bwd], [-self.s_fwd, -self.i]])


def incomplete_q_integrals(kmax: int, a_frak: float, z: float):
    """Λ_k(z) = ∫_0^z e^{−u/2} u^𝔞 Q_k(u) du for k = 0..kmax, and Λ_k(∞).

    Odd k:  Λ_k(z) = 2 e^{−z/2} z^𝔞 W_k(z),  Λ_k(∞) = 0.
    Even k = 2ℓ:  Λ_k(z) = C_ℓ [2^{𝔞+1} γ(𝔞+1, z/2) − 2 e^{−z/2} z^𝔞 Σ_{i=1}^ℓ W_{2i}(z)/C_i],
    with C_i = C(i+𝔞, i), and Λ_k(∞) = 2^{𝔞+1} C_ℓ Γ(𝔞+1).
    """
    a = a_frak
    L = laguerre_all(kmax + 1, 2 * a, z)
    W = np.zeros(kmax + 2)
    j = np.arange(1, kmax + 2)
    W[1:] = L[1:] - (j + 2 * a) / j * L[:-1]
    pref = 2 * math.exp(-z / 2) * z ** a if z > 0 else 0.0
    C = gen_binomial_array(kmax // 2 + 1, a)
    lam = np.empty(kmax + 1)
    lam_inf = np.zeros(kmax + 1)
    gam = 2 ** (a + 1) * sp.gammainc(a + 1, z / 2) * math.gamma(a + 1)
    acc = 0.0
    for k in range(kmax + 1):
        if k % 2:
            lam[k] = pref * W[k]
        else:
            ell = k // 2
            if ell >= 1:
                acc += W[2 * ell] / C[ell]
            lam[k] = C[ell] * (gam - pref * acc)
            lam_inf[k] = 2 ** (a + 1) * C[ell] * math.gamma(a + 1)
    return lam, lam_inf


def _tail_length(chi: float) -> int:
    """Index span over which χ^{−j} (times polynomial factors) drops below 1e−18."""
    return int(math.ceil(45.0 / math.log(chi))) + 20


@dataclass
class FiniteKernel:
    """Request-scoped evaluator of the finite-N kernel elements.

    Caches R̃ and Φ̃ arrays per (m, x); the cache lives only as long as the
    evaluator object.
    """

    params: ModelParams
    grid: TimeGrid
    basis: SkewBasis | None = None
    tail_tol: float = 1e-14
    max_tail: int = 20000
    _R: dict = field(default_factory=dict, repr=False)
    _Phi: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        p = self.params
        if p.N % 2:
            raise ValueError("finite kernels need even N")
        if abs(self.grid.T - p.T) > 1e-12 * p.T:
            raise ValueError("grid horizon differs from params.T")
        if self.basis is None:
            self.basis = SkewBasis.build(p, K=max(p.N, 2))
        if self.basis.K < p.N - 1:
            raise ValueError("degree cap below N-1")
        self._g = None

    # -------------------------------------------------------------- scalars
    @property
    def M(self) -> int:
        return self.grid.M

    def rtilde(self, ell):
        p = self.params
        return (2.0 ** (-2 * p.nu - 2) * p.T ** (-p.kappa)
                * rstar(np.asarray(ell), p.a_frak) / math.gamma(p.nu + 1) ** 2)

    def scale(self, k: int) -> float:
        """k! (c_1/χ_1)^k, the factor removed from R and Φ."""
        t1 = self.grid.t(1)
        return math.exp(math.lgamma(k + 1) + k * math.log(t1 * t1 / self.params.T))

    # ------------------------------------------------------------------ R
    def R(self, m: int, x: float) -> np.ndarray:
        """R̃_k^{(m)}(x) for k = 0..N−1."""
        key = (m, float(x))
        if key in self._R:
            return self._R[key]
        p, g = self.params, self.grid
        N = p.N
        t, c, chi = g.t(m), g.c(m), g.chi(m)
        xi = x / c
        # L_j(ξ) χ^j by the rescaled recurrence
        Lc = np.empty(N)
        Lc[0] = 1.0
        if N > 1:
            Lc[1] = (1 + p.nu - xi) * chi
        for j in range(1, N - 1):
            Lc[j + 1] = ((2 * j + 1 + p.nu - xi) * Lc[j] * chi - (j + p.nu) * Lc[j - 1] * chi * chi) / (j + 1)
        A = self.basis.alpha[:N, :N]
        with np.errstate(divide="ignore"):
            pref = (t ** (-p.nu - 1) * x ** p.a_frak * math.exp((-1 + t / (2 * p.T)) * xi)
                    / (2 ** (p.nu + 1) * math.gamma(p.nu + 1)))
        out = pref * (A @ Lc)
        out.setflags(write=False)
        self._R[key] = out
        return out

    # ------------------------------------------------------------------ Φ
    def _phi_prefactor(self, m, x):
        p, g = self.params, self.grid
        t, c = g.t(m), g.c(m)
        return (c ** (-p.nu - 1) * t ** (p.nu + 1) * p.T ** (-p.kappa) * x ** (p.kappa / 2)
                * math.exp(-t * x / (2 * p.T * c)) / (2 ** (p.nu + 1) * math.gamma(p.nu + 1)))

    def _phi_series(self, m: int, x: float, kmax: int) -> np.ndarray:
        p, g = self.params, self.grid
        a, nu = p.a_frak, p.nu
        chi = g.chi(m)
        xi = x / g.c(m)
        Jt = _tail_length(chi)
        P = kmax + 2 + Jt
        J = P + Jt
        # M_j = L_j(ξ) χ^{−j}
        Mv = np.empty(J + 1)
        Mv[0] = 1.0
        Mv[1] = (1 + nu - xi) / chi
        for j in range(1, J):
            Mv[j + 1] = ((2 * j + 1 + nu - xi) * Mv[j] / chi - (j + nu) * Mv[j - 1] / (chi * chi)) / (j + 1)
        jj = np.arange(J + 1)
        Lhat = Mv * np.exp(sp.gammaln(jj + 1) - sp.gammaln(jj + 1 + nu))
        gcoef = gen_binomial_array(Jt, -p.b_frak - 2)
        E = np.correlate(Lhat, gcoef, mode="valid")  # E[q] = Σ_i g_i L̂_{q+i}, q = 0..P
        nl = kmax // 2 + 1
        rmax = (P + 1) // 2
        B = _odd_cumprod(a, rmax + 1)
        # U[ℓ] = Σ_{r ≥ ℓ+1} B[r] E(2r−1)
        r = np.arange(1, rmax + 1)
        terms = B[r] * E[2 * r - 1]
        suffix = np.cumsum(terms[::-1])[::-1]  # suffix[r−1] = Σ_{r' ≥ r}
        ell = np.arange(nl)
        U = suffix[ell]  # Σ_{r ≥ ℓ+1}
        rs = rstar(ell, a)
        pref = self._phi_prefactor(m, x)
        out = np.empty(2 * nl)
        out[0::2] = -pref * rs * U / B[ell + 1]
        out[1::2] = -pref * rs * E[2 * ell]
        return out[: kmax + 1]

    def _phi_terminal(self, x: float, kmax: int) -> np.ndarray:
        p = self.params
        lam, lam_inf = incomplete_q_integrals(kmax, p.a_frak, x / p.T)
        return p.T ** (-p.kappa / 2) / (2 ** (p.nu + 1) * math.gamma(p.nu + 1)) * (2 * lam - lam_inf)

    def Phi(self, m: int, x: float, kmax: int | None = None) -> np.ndarray:
        """Φ̃_k^{(m)}(x) for k = 0..kmax (default N−1)."""
        kmax = self.params.N - 1 if kmax is None else kmax
        key = (m, float(x))
        hit = self._Phi.get(key)
        if hit is not None and len(hit) > kmax:
            return hit[: kmax + 1]
        if m == self.M + 1:
            out = self._phi_terminal(x, kmax)
        else:
            out = self._phi_series(m, x, kmax)
        out.setflags(write=False)
        self._Phi[key] = out
        return out

    def Phi_direct(self, m: int, x: float, k: int, n_nodes: int = 200) -> float:
        """Φ̃_k^{(m)}(x) = ∫ p̃(T−t_m, w|x) Φ̃_k^{(M+1)}(w) dw by quadrature (test route)."""
        if m == self.M + 1:
            return float(self._phi_terminal(x, k)[k])
        p = self.params
        tau = p.T - self.grid.t(m)
        f = lambda w: float(ptilde(p, tau, x, w)) * float(self._phi_terminal(w, k)[k])
        hi = (math.sqrt(x) + 14 * math.sqrt(tau)) ** 2 + 20 * tau
        return integrate.quad(f, 0, hi, limit=400, epsabs=1e-15, epsrel=1e-12, points=[x])[0]

    # ----------------------------------------------------------- elements
    def D(self, m, x, n, y) -> float:
        Rm, Rn = self.R(m, x), self.R(n, y)
        rt = self.rtilde(np.arange(self.params.N // 2))
        return float(np.sum((Rm[0::2] * Rn[1::2] - Rm[1::2] * Rn[0::2]) / rt))

    def S(self, m, x, n, y) -> float:
        Pm, Rn = self.Phi(m, x), self.R(n, y)
        rt = self.rtilde(np.arange(self.params.N // 2))
        return float(np.sum((Pm[0::2] * Rn[1::2] - Pm[1::2] * Rn[0::2]) / rt))

    def S_tilde(self, m, x, n, y) -> float:
        val = self.S(m, x, n, y)
        if m < n:
            val -= float(ptilde(self.params, self.grid.t(n) - self.grid.t(m), x, y))
        return val

    def I_head(self, m, x, n, y) -> float:
        """I_N: the finite part −Σ_{ℓ<N/2} (1/r̃)[Φ̃Φ̃ − Φ̃Φ̃]."""
        Pm, Pn = self.Phi(m, x), self.Phi(n, y)
        rt = self.rtilde(np.arange(self.params.N // 2))
        return float(-np.sum((Pm[0::2] * Pn[1::2] - Pm[1::2] * Pn[0::2]) / rt))

    def I_tilde(self, m, x, n, y) -> float:
        """Ĩ = Σ_{ℓ ≥ N/2} (1/r̃_ℓ)[Φ̃_{2ℓ}(x)Φ̃_{2ℓ+1}(y) − Φ̃_{2ℓ+1}(x)Φ̃_{2ℓ}(y)].

        The sum is truncated once a geometric bound on the remainder falls
        below ``tail_tol`` relative to the partial sum.  When both times are
        the terminal one the series diverges; there Ĩ = I_N + sgn(y − x).
        """
        N, M = self.params.N, self.M
        if m == M + 1 and n == M + 1:
            return self.I_head(m, x, n, y) + float(np.sign(y - x))
        chis = [self.grid.chi(k) for k in (m, n) if k <= M]
        extra = max(64, int(math.ceil(2 * 45.0 / math.log(max(chis) if len(chis) == 1 else chis[0] * chis[1]))))
        while True:
            kmax = N + 2 * extra + 1
            Pm, Pn = self.Phi(m, x, kmax), self.Phi(n, y, kmax)
            ell = np.arange(N // 2, (kmax + 1) // 2)
            t = (Pm[2 * ell] * Pn[2 * ell + 1] - Pm[2 * ell + 1] * Pn[2 * ell]) / self.rtilde(ell)
            total = float(np.sum(t))
            tail = np.abs(t[-5:])
            if tail[0] > 0 and np.all(tail > 0):
                q = (tail[-1] / tail[0]) ** 0.25
            else:
                q = 0.0
            bound = tail[-1] * q / (1 - q) if q < 1 else math.inf
            scale = max(abs(total), float(np.max(np.abs(t))) if len(t) else 0.0, 1e-300)
            if bound <= self.tail_tol * scale:
                return total
            if 2 * extra > self.max_tail:
                raise ConvergenceError(f"I-tilde tail did not converge (bound {bound:.3g})")
            extra *= 2

    def I_direct(self, m, x, n, y, n_nodes: int = 200) -> float:
        """I_N + ⟨p̃ J p̃⟩ by quadrature, with ⟨pJp⟩ = ∫∫ sgn(w−z) p̃(τ_m, z|x) p̃(τ_n, w|y)."""
        from ..quadrature import ordered_pair_matrix, power_grid

        p = self.params
        head = self.I_head(m, x, n, y)
        tm, tn = p.T - self.grid.t(m), p.T - self.grid.t(n)
        if tm == 0 and tn == 0:
            return head + float(np.sign(y - x))
        if tm == 0 or tn == 0:
            # one side is a point mass: ∫ sgn(w − z) p̃(τ, ·)
            if tm == 0:
                tau, pt, other, sgn = tn, x, y, 1.0
            else:
                tau, pt, other, sgn = tm, y, x, -1.0
            hi = (math.sqrt(other) + 14 * math.sqrt(tau)) ** 2 + 20 * tau
            f = lambda w: float(ptilde(p, tau, other, w))
            below = integrate.quad(f, 0, pt, limit=400, epsabs=1e-15)[0] if pt > 0 else 0.0
            above = integrate.quad(f, pt, max(hi, pt + 1), limit=400, epsabs=1e-15)[0]
            return head + sgn * (above - below)
        hi = max((math.sqrt(x) + 14 * math.sqrt(tm)) ** 2 + 20 * tm, (math.sqrt(y) + 14 * math.sqrt(tn)) ** 2 + 20 * tn)
        z, jac, v = power_grid(hi, 8001, 2 * p.a_frak + 2)
        fx = ptilde(p, tm, x, z) * jac
        fy = ptilde(p, tn, y, z) * jac
        fx[0] = fy[0] = 0.0
        Mx = ordered_pair_matrix(np.vstack([fx, fy]), v)
        return head + float(Mx[0, 1])

    def block(self, m, x, n, y) -> KernelBlock:
        return KernelBlock(
            d=self.D(m, x, n, y),
            s_fwd=self.S_tilde(m, x, n, y),
            s_bwd=self.S_tilde(n, y, m, x),
            i=self.I_tilde(m, x, n, y),
        )


def finite_kernel(params: ModelParams, grid: TimeGrid, m: int, x: float, n: int, y: float,
                  basis: SkewBasis | None = None) -> KernelBlock:
    """One KernelBlock of the finite-N Pfaffian kernel (1-based time indices)."""
    return FiniteKernel(params, grid, basis).block(m, x, n, y)


def r_im(params: ModelParams, grid: TimeGrid, i: int, m: int, x: float, basis: SkewBasis | None = None) -> float:
    """R_i^{(m)}(x) (unscaled)."""
    fk = FiniteKernel(params, grid, basis)
    if i >= params.N:
        raise ValueError("index must be below N")
    return float(fk.R(m, x)[i]) * fk.scale(i)


def phi_im(params: ModelParams, grid: TimeGrid, i: int, m: int, x: float, basis: SkewBasis | None = None) -> float:
    """Φ_i^{(m)}(x) (unscaled)."""
    fk = FiniteKernel(params, grid, basis)
    return float(fk.Phi(m, x, max(i, params.N - 1))[i]) * fk.scale(i)
