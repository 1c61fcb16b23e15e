"""Skew-orthogonal Laguerre machinery.

Polynomials (with 𝔞 = ν − κ/2, 𝔟 = ν − κ)::

    F_j = Σ_{n≤j} L_n^{2𝔞},        G_j = −F_j + b(j) F_{j−2},
    W_j = L_j^{2𝔞} − b(j) L_{j−1}^{2𝔞},   b(j) = (j + 2𝔞)/j,
    Q_{2ℓ} = F_{2ℓ},  Q_{2ℓ+1} = G_{2ℓ+1},

and the expansion Q_k = Σ_j α_{k,j} L_j^ν with inverse L_j^ν = Σ_k β_{j,k} Q_k.
The elementary skew product

    ⟨f, g⟩_* = ∫_0^∞ dw e^{−w/2} w^𝔞 ∫_0^w dz e^{−z/2} z^𝔞 {f(z)g(w) − f(w)g(z)}

satisfies ⟨F_{2q}, G_{2ℓ+1}⟩_* = r*_q δ_{qℓ} with r*_q = 4Γ(2q+2𝔞+2)/(2q+1)!,
all other pairings between Q's vanishing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy import integrate, special as sp

from .params import ModelParams, TimeGrid
from .quadrature import ordered_pair_matrix, power_grid
from .specfun import gen_binomial, gen_binomial_array, incomplete_gamma_lower, laguerre_all

__all__ = [
    "SkewBasis",
    "alpha_coeffs",
    "beta_coeffs",
    "beta_by_inversion",
    "b_factor",
    "b_product",
    "rstar",
    "r_q",
    "log_r_q",
    "poly_eval",
    "poly_coeffs_mp",
    "skew_inner_elementary",
    "skew_laguerre_table",
    "skew_inner_full",
    "lemma_b1_check",
    "w_f_orthogonality_check",
]


def b_factor(n: int, a_frak: float) -> float:
    return (n + 2 * a_frak) / n


def b_product(m: int, n: int, a_frak: float) -> float:
    """b(m, n) = b(m) b(m+2) ... b(n) for odd m ≤ n; 1 for odd m > n; else 0."""
    if m % 2 == 0 or n % 2 == 0:
        return 0.0
    if m > n:
        return 1.0
    out = 1.0
    for i in range(m, n + 1, 2):
        out *= b_factor(i, a_frak)
    return out


def alpha_coeffs(b_frak: float, a_frak: float, K: int) -> np.ndarray:
    """Lower-triangular table α_{k,j}, 0 ≤ j ≤ k ≤ K, with Q_k = Σ_j α_{k,j} L_j^ν."""
    g = gen_binomial_array(K, b_frak)  # g[i] = C(i + 𝔟, i)
    A = np.zeros((K + 1, K + 1))
    for k in range(K + 1):
        j = np.arange(k + 1)
        A[k, : k + 1] = g[k - j]
        if k % 2 == 1:
            A[k, : k + 1] *= -1.0
            if k >= 2:
                A[k, : k - 1] += b_factor(k, a_frak) * g[k - 2 - j[: k - 1]]
    return A


def _odd_cumprod(a_frak: float, rmax: int) -> np.ndarray:
    """B[r] = Π_{odd i = 3}^{2r−1} b(i) for r = 0..rmax (B[0] = B[1] = 1).

    Starting at i = 3 avoids the only possible zero factor b(1) = 1 + 2𝔞.
    """
    B = np.ones(rmax + 1)
    for r in range(2, rmax + 1):
        B[r] = B[r - 1] * b_factor(2 * r - 1, a_frak)
    return B


def beta_coeffs(a_frak: float, b_frak: float, K: int) -> np.ndarray:
    """Closed-form inverse table β_{j,k} (rows j, columns k).

    even k:  β_{j,k} = C(j−k−𝔟−2, j−k);
    odd k:   β_{j,k} = −Σ_{r=(k+1)/2}^{⌊(j+1)/2⌋} b(k+2, 2r−1) C(j−2r−𝔟−1, j−2r+1).
    """
    g = gen_binomial_array(K + 1, -b_frak - 2)  # g[i] = C(i − 𝔟 − 2, i)
    B = _odd_cumprod(a_frak, K // 2 + 2)
    Bt = np.zeros((K + 1, K + 1))
    for k in range(K + 1):
        if k % 2 == 0:
            for j in range(k, K + 1):
                Bt[j, k] = g[j - k]
        else:
            r0 = (k + 1) // 2
            for j in range(k, K + 1):
                acc = 0.0
                for r in range(r0, (j + 1) // 2 + 1):
                    acc += B[r] / B[r0] * g[j - 2 * r + 1]
                Bt[j, k] = -acc
    return Bt


def beta_by_inversion(alpha: np.ndarray) -> np.ndarray:
    """Numerical inverse of the α table (row j of the result expands L_j)."""
    from scipy.linalg import solve_triangular

    return solve_triangular(alpha, np.eye(alpha.shape[0]), lower=True)


def rstar(q, a_frak: float):
    """r*_q = 4Γ(2q+2𝔞+2)/(2q+1)!."""
    q = np.asarray(q)
    return 4.0 * np.exp(sp.gammaln(2 * q + 2 * a_frak + 2) - sp.gammaln(2 * q + 2))


def log_r_q(q, params: ModelParams, t1: float):
    """log r_q with r_q = 2^{−2ν} T^{−κ} (t_1²/T)^{4q+1} (2q)! Γ(2q+2+2𝔞) / Γ(ν+1)²."""
    nu, kappa, T = params.nu, params.kappa, params.T
    q = np.asarray(q, dtype=float)
    return (
        -2 * nu * math.log(2)
        - kappa * math.log(T)
        + (4 * q + 1) * math.log(t1 * t1 / T)
        + sp.gammaln(2 * q + 1)
        + sp.gammaln(2 * q + 2 + 2 * params.a_frak)
        - 2 * sp.gammaln(nu + 1)
    )


def r_q(q, params: ModelParams, t1: float):
    return np.exp(log_r_q(q, params, t1))


@dataclass(frozen=True)
class SkewBasis:
    """α, β and r* tables up to degree cap K (default 2N)."""

    a_frak: float
    b_frak: float
    K: int
    alpha: np.ndarray
    beta: np.ndarray
    rstar: np.ndarray

    @classmethod
    def build(cls, params: ModelParams | None = None, K: int | None = None, *,
              a_frak: float | None = None, b_frak: float | None = None) -> "SkewBasis":
        if params is not None:
            a_frak, b_frak = params.a_frak, params.b_frak
            K = 2 * params.N if K is None else K
        if a_frak is None or b_frak is None or K is None:
            raise ValueError("SkewBasis.build needs params or (a_frak, b_frak, K)")
        if K > 400:
            raise ValueError("degree cap above 400 is outside the tabulated range")
        alpha = alpha_coeffs(b_frak, a_frak, K)
        beta = beta_coeffs(a_frak, b_frak, K)
        rs = rstar(np.arange(K // 2 + 1), a_frak)
        for arr in (alpha, beta, rs):
            arr.setflags(write=False)
        return cls(a_frak, b_frak, K, alpha, beta, rs)

    @property
    def nu(self) -> float:
        # ν = 2𝔞 − 𝔟
        return 2 * self.a_frak - self.b_frak

    def b_table(self, kmax: int | None = None) -> np.ndarray:
        """Matrix of b(m, n) for 0 ≤ m, n ≤ kmax."""
        kmax = self.K if kmax is None else kmax
        out = np.zeros((kmax + 1, kmax + 1))
        for m in range(1, kmax + 1, 2):
            for n in range(1, kmax + 1, 2):
                out[m, n] = b_product(m, n, self.a_frak)
        return out

    def inverse_residual(self) -> float:
        return float(np.max(np.abs(self.alpha @ self.beta - np.eye(self.K + 1))))


# ---------------------------------------------------------------- polynomials

def _F_all(kmax, a_frak, x):
    return np.cumsum(laguerre_all(kmax, 2 * a_frak, x), axis=0)


def poly_eval(kind: str, index: int, x, *, a_frak: float | None = None, nu: float | None = None,
              basis: SkewBasis | None = None, c1: float = 1.0, chi1: float = 1.0):
    """Evaluate F, G, W, Q, R or L (= L^ν) of the given index at x.

    R_k(x) = k! (c1/χ1)^k Σ_j α_{k,j} L_j^ν(x/c1) χ1^j is monic of degree k.
    """
    kind = kind.upper()
    if basis is not None:
        a_frak = basis.a_frak if a_frak is None else a_frak
        nu = basis.nu if nu is None else nu
    x = np.asarray(x, dtype=float)
    k = int(index)
    if k < 0:
        raise ValueError("negative index")
    if kind == "F":
        return _F_all(k, a_frak, x)[k]
    if kind == "G":
        if k < 1:
            raise ValueError("G_j needs j >= 1")
        F = _F_all(k, a_frak, x)
        return -F[k] + (b_factor(k, a_frak) * F[k - 2] if k >= 2 else 0.0)
    if kind == "W":
        if k < 1:
            raise ValueError("W_j needs j >= 1")
        L = laguerre_all(k, 2 * a_frak, x)
        return L[k] - b_factor(k, a_frak) * L[k - 1]
    if kind == "Q":
        return poly_eval("F" if k % 2 == 0 else "G", k, x, a_frak=a_frak)
    if kind == "L":
        return laguerre_all(k, nu, x)[k]
    if kind == "R":
        if basis is None or basis.K < k:
            basis = SkewBasis.build(a_frak=a_frak, b_frak=2 * a_frak - nu, K=max(k, 1))
        L = laguerre_all(k, nu, x / c1)
        w = chi1 ** np.arange(k + 1)
        s = np.tensordot(basis.alpha[k, : k + 1] * w, L, axes=(0, 0))
        return math.exp(math.lgamma(k + 1) + k * math.log(c1 / chi1)) * s
    raise ValueError(f"unknown polynomial kind {kind!r}")


# ------------------------------------------------- extended-precision moments

def _mp_binom(n, alpha):
    """gen_binomial in mpmath arithmetic (rising product, exact branches)."""
    if n < 0:
        return mp.mpf(0)
    out = mp.mpf(1)
    for i in range(1, n + 1):
        out *= (alpha + i) / mp.mpf(i)
    return out


def _mp_laguerre_coeffs(j, alpha):
    return [(-1) ** l / mp.factorial(l) * _mp_binom(j - l, alpha + l) for l in range(j + 1)]


def poly_coeffs_mp(kind: str, index: int, a_frak: float, nu: float | None = None, dps: int = 40):
    """Monomial coefficients (mpmath) of F, G, W, Q or L^ν."""
    with mp.workdps(dps):
        a = mp.mpf(a_frak)
        kind = kind.upper()
        k = int(index)

        def pad(c, n):
            return list(c) + [mp.mpf(0)] * (n - len(c))

        def F(j):
            out = [mp.mpf(0)] * (j + 1)
            for n in range(j + 1):
                for i, c in enumerate(_mp_laguerre_coeffs(n, 2 * a)):
                    out[i] += c
            return out

        if kind == "F":
            return F(k)
        if kind == "G":
            out = [-c for c in F(k)]
            if k >= 2:
                bk = (k + 2 * a) / k
                for i, c in enumerate(F(k - 2)):
                    out[i] += bk * c
            return out
        if kind == "W":
            bk = (k + 2 * a) / k
            out = pad(_mp_laguerre_coeffs(k, 2 * a), k + 1)
            for i, c in enumerate(_mp_laguerre_coeffs(k - 1, 2 * a)):
                out[i] -= bk * c
            return out
        if kind == "Q":
            return poly_coeffs_mp("F" if k % 2 == 0 else "G", k, a_frak, dps=dps)
        if kind == "L":
            return _mp_laguerre_coeffs(k, mp.mpf(nu))
        raise ValueError(kind)


@lru_cache(maxsize=64)
def _moment_table(a_frak: float, pmax: int, dps: int):
    """M[p][q] = ∫_0^∞ dw e^{−w/2} w^{𝔞+q} ∫_0^w dz e^{−z/2} z^{𝔞+p}.

    With z = 2u, w = 2v this is 2^{2𝔞+p+q+2} ∫ e^{−v} v^{b−1} γ(a, v) dv,
    a = 𝔞+p+1, b = 𝔞+q+1, and
    ∫_0^∞ e^{−v} v^{b−1} γ(a,v) dv = Γ(a+b) / (a 2^{a+b}) ₂F₁(1, a+b; a+1; 1/2).
    """
    with mp.workdps(dps):
        am = mp.mpf(a_frak)
        M = [[None] * (pmax + 1) for _ in range(pmax + 1)]
        for p in range(pmax + 1):
            a = am + p + 1
            for q in range(pmax + 1):
                b = am + q + 1
                val = mp.gamma(a + b) / (a * mp.power(2, a + b)) * mp.hyp2f1(1, a + b, a + 1, mp.mpf(1) / 2)
                M[p][q] = mp.power(2, 2 * am + p + q + 2) * val
        return M


def _skew_exact(fc, gc, a_frak, dps=40):
    n = max(len(fc), len(gc))
    M = _moment_table(float(a_frak), n, dps)
    with mp.workdps(dps):
        tot = mp.mpf(0)
        for p, fp in enumerate(fc):
            if fp == 0:
                continue
            for q, gq in enumerate(gc):
                if gq == 0:
                    continue
                tot += fp * gq * (M[p][q] - M[q][p])
        return tot


@lru_cache(maxsize=32)
def _gj_nodes(n, alpha):
    return sp.roots_jacobi(n, 0.0, alpha)  # weight (1+t)^alpha on [-1,1]


@lru_cache(maxsize=32)
def _gl_nodes(n, alpha):
    return sp.roots_genlaguerre(n, alpha)


def _skew_quadrature(f, g, a_frak, n_inner=96, n_outer=160):
    """⟨f,g⟩_* by Gauss rules: inner ∫_0^w via Gauss–Jacobi, outer Gauss–Laguerre.

    With z = wu the inner integral is w^{𝔞+1} times a smooth function of w, so the
    outer rule carries the weight w^{2𝔞+1} e^{−w/2}.
    """
    v, wv = _gl_nodes(n_outer, 2 * a_frak + 1)  # weight v^{2𝔞+1} e^{−v}
    w = 2 * v
    t, wt = _gj_nodes(n_inner, a_frak)
    u = (t + 1) / 2  # weight u^𝔞 on [0,1] after 2^{−𝔞−1} scaling
    z = w[:, None] * u[None, :]
    kern = np.exp(-z / 2) * (wt / 2 ** (a_frak + 1))[None, :]
    Af = np.sum(kern * f(z), axis=1)
    Ag = np.sum(kern * g(z), axis=1)
    return 2 ** (2 * a_frak + 2) * np.sum(wv * (g(w) * Af - f(w) * Ag))


def skew_inner_elementary(f, g, a_frak: float, method: str = "exact", dps: int = 40):
    """Elementary skew product ⟨f, g⟩_*.

    ``method="exact"``: f, g are monomial coefficient sequences (floats or
    mpmath numbers), evaluated through closed-form ordered moments in
    ``dps``-digit arithmetic.  ``method="quadrature"``: f, g are vectorized
    callables and the double integral is done with Gauss rules.
    """
    if a_frak <= -1:
        raise ValueError("skew product requires a_frak > -1")
    if method == "exact":
        return float(_skew_exact(list(f), list(g), a_frak, dps))
    if method == "quadrature":
        return float(_skew_quadrature(f, g, a_frak))
    raise ValueError(method)


def skew_laguerre_table(basis: SkewBasis, jmax: int | None = None) -> np.ndarray:
    """S[j, k] = ⟨L_j^ν, L_k^ν⟩_* from L_j = Σ β_{j,q} Q_q and the skew-orthogonality relations."""
    jmax = basis.K if jmax is None else jmax
    B = basis.beta[: jmax + 1, :]
    K = basis.K
    even = np.arange(0, K + 1, 2)
    odd = even + 1
    keep = odd <= K
    even, odd = even[keep], odd[keep]
    rs = basis.rstar[: len(even)]
    Be, Bo = B[:, even], B[:, odd]
    return (Be * rs) @ Bo.T - (Bo * rs) @ Be.T


# ------------------------------------------------------ full skew product

def skew_inner_full(f, g, params: ModelParams, grid: TimeGrid, route: str = "reduced",
                    n_nodes: int = 80):
    """Full skew product ⟨f, g⟩ attached to the first observation time.

    route="reduced": f and g are sequences of coefficients in the basis
    {L_j^ν(x/c_1)}; uses the Laguerre-expansion reduction onto ⟨L_j, L_k⟩_*.

    route="quadrature": f and g are vectorized callables of x; evaluates
    ∫∫ sgn(w−z) P_f(z) P_g(w) dz dw with P_f(z) = ∫ f(x) p̃(t_1,x|0) p̃(T−t_1,z|x) dx,
    which is the defining double-ordered kernel after integrating out x, y.
    """
    from .meander import ptilde

    t1 = grid.t(1)
    T = params.T
    nu = params.nu
    if route == "reduced":
        fc = np.asarray(f, dtype=float)
        gc = np.asarray(g, dtype=float)
        K = max(len(fc), len(gc)) + 1
        K += K % 2
        basis = SkewBasis.build(a_frak=params.a_frak, b_frak=params.b_frak, K=K)
        S = skew_laguerre_table(basis, K)
        chi = grid.chi(1)
        jf = np.arange(len(fc))
        jg = np.arange(len(gc))
        # coefficient of L_j against e^{−x} x^ν: f_j Γ(j+ν+1)/j!, times Γ(j+1)/Γ(j+1+ν)
        wf = fc * chi ** (-jf)
        wg = gc * chi ** (-jg)
        val = wf @ S[: len(fc), : len(gc)] @ wg
        return float(val * 2 ** (-2 * nu - 2) * T ** (-params.kappa) / math.gamma(nu + 1) ** 2)
    if route != "quadrature":
        raise ValueError(route)
    a, kappa = params.a_frak, params.kappa
    pref = 1.0 / (2 ** (nu + 1) * math.gamma(nu + 1) * t1 ** (nu + 1))
    if t1 >= T:
        # F(x, y) = sgn(y − x): ordered pair integral of f, g against p̃(t1, ·|0)
        hi = 2 * t1 * (60.0 + 4 * abs(a))
        z, jac, u = power_grid(hi, 4001, a + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(z > 0, z ** a, 0.0) * np.exp(-z / (2 * t1)) * pref * jac
        fw, gw = f(z) * w, g(z) * w
        fw[0] = gw[0] = 0.0
        return float(ordered_pair_matrix(np.vstack([fw, gw]), u)[0, 1])
    # x-nodes: weight x^ν e^{−x/(2 t1)}, i.e. p̃(t1, x|0) with the x^{κ/2} of
    # p̃(τ, z|x) moved into the rule
    v, wv = _gl_nodes(n_nodes, nu)
    keep = wv > 1e-200 * wv.max()
    v, wv = v[keep], wv[keep]
    x = 2 * t1 * v
    px = wv * (2 * t1) ** (nu + 1) * pref
    tau = T - t1
    zmax = (math.sqrt(x.max()) + 14 * math.sqrt(tau)) ** 2 + 20 * tau
    # p̃(τ, z|x) ~ z^𝔞 at the origin
    z, jac, u = power_grid(zmax, 4001, a + 1)
    # the integrand vanishes at the origin node after the Jacobian
    P = np.zeros((len(x), len(z)))
    P[:, 1:] = ptilde(params, tau, x[:, None], z[None, 1:]) / x[:, None] ** (kappa / 2)
    Pf = (px * f(x)) @ P * jac
    Pg = (px * g(x)) @ P * jac
    return float(ordered_pair_matrix(np.vstack([Pf, Pg]), u)[0, 1])


# ----------------------------------------------------- incomplete integrals

def lemma_b1_check(a_frak: float, j: int, z: float, branch: str = "G"):
    """Both sides of the incomplete-integral identities for G_j and F_{2ℓ}.

    branch "G":  ∫_0^z e^{−x/2} x^𝔞 G_j(x) dx  =  2 e^{−z/2} z^𝔞 W_j(z),  j ≥ 1;
    branch "F":  ∫_0^z e^{−x/2} x^𝔞 F_{2ℓ}(x) dx
                 = 2^{𝔞+1} C(ℓ+𝔞, ℓ) γ(𝔞+1, z/2)
                   − 2 e^{−z/2} z^𝔞 C(ℓ+𝔞, ℓ) Σ_{r<ℓ} W_{2ℓ−2r}(z) / C(ℓ−r+𝔞, ℓ−r),
    with j = 2ℓ for the F branch.  The left side is computed by adaptive
    quadrature with the algebraic endpoint weight handled exactly.
    """
    branch = branch.upper()
    if z == 0:
        return 0.0, 0.0
    if branch == "G":
        f = lambda x: poly_eval("G", j, x, a_frak=a_frak) * math.exp(-x / 2)
    else:
        if j % 2:
            raise ValueError("F branch needs even j = 2ℓ")
        f = lambda x: poly_eval("F", j, x, a_frak=a_frak) * math.exp(-x / 2)
    with warnings.catch_warnings():
        # QUADPACK flags roundoff when it cannot beat epsrel=1e-13; the value is still good
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        lhs = integrate.quad(f, 0, z, weight="alg", wvar=(a_frak, 0.0), epsabs=0, epsrel=1e-13, limit=200)[0]
    if branch == "G":
        rhs = 2 * math.exp(-z / 2) * z ** a_frak * float(poly_eval("W", j, z, a_frak=a_frak))
    else:
        ell = j // 2
        cl = gen_binomial(ell, a_frak)
        acc = sum(float(poly_eval("W", 2 * ell - 2 * r, z, a_frak=a_frak)) / gen_binomial(ell - r, a_frak)
                  for r in range(ell))
        rhs = (2 ** (a_frak + 1) * cl * float(incomplete_gamma_lower(a_frak + 1, z / 2))
               - 2 * math.exp(-z / 2) * z ** a_frak * cl * acc)
    return lhs, rhs


def w_f_orthogonality_check(a_frak: float, k: int, j: int, n_nodes: int = 80):
    """(W_k, F_j) under e^{−x} x^{2𝔞} against −Γ(j+2𝔞+2)/(j+1)! δ_{k−1,j}."""
    x, w = _gl_nodes(n_nodes, 2 * a_frak)
    lhs = float(np.sum(w * poly_eval("W", k, x, a_frak=a_frak) * poly_eval("F", j, x, a_frak=a_frak)))
    rhs = -math.exp(math.lgamma(j + 2 * a_frak + 2) - math.lgamma(j + 2)) if k - 1 == j else 0.0
    return lhs, rhs
