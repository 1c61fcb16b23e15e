"""Riemann–Liouville differintegrals and the Bessel families J̃ν, Ĵν.

Left and right operators of order c, with n = [c+1]_+ = max(⌊c⌋+1, 0)::

    ₀D_x^c f = 1/Γ(n−c) (d/dx)^n ∫_0^x (x−y)^{n−c−1} f(y) dy,
    ₓD_∞^c f = 1/Γ(n−c) (−d/dx)^n ∫_x^∞ (y−x)^{n−c−1} f(y) dy.

The Bessel families (θ, η > 0, x ≥ 0)::

    J̃ν(θ,η,x,s) = (θηx)^{ν/2} J_ν(2√(θηx)) e^{2sθη},
    Ĵν(θ,η,x,s) = (θηx)^{−ν/2} J_ν(2√(θηx)) e^{2sθη},

and J̃ν^(c) = ₀D_η^c J̃ν, Ĵν^(c) = _ηD_∞^c Ĵν (the latter for s < 0).

Every Bessel factor is written through the entire function
E_μ(w) = w^{−μ/2} J_μ(2√w) = Σ_ℓ (−w)^ℓ / (Γ(μ+ℓ+1) ℓ!), whose derivative is
E_μ' = −E_{μ+1}.  Hence all integer η-derivatives are exact finite sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special as sp

from .quadrature import gauss_jacobi01, gen_laguerre

__all__ = [
    "DifferintOrder",
    "ConvergenceError",
    "entire_bessel",
    "rl_left",
    "rl_right",
    "jtilde",
    "jhat",
    "jtilde_deriv",
    "jhat_deriv",
    "jtilde_diff",
    "jhat_diff",
    "jhat_diff_xi_integral",
]


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its tolerance."""


@dataclass(frozen=True)
class DifferintOrder:
    """Order c of a differintegral with n = [c+1]_+."""

    c: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError("order must be finite")

    @property
    def n(self) -> int:
        return max(math.floor(self.c) + 1, 0)

    @property
    def is_integer(self) -> bool:
        return float(self.c).is_integer()

    @property
    def beta(self) -> float:
        """n − c, the order of the fractional integral inside the definition."""
        return self.n - self.c


def _order(c) -> DifferintOrder:
    return c if isinstance(c, DifferintOrder) else DifferintOrder(float(c))


# ------------------------------------------------------------ generic operators

def _richardson_derivative(g, x, n, h0=None, levels=5):
    """n-th derivative of g at x by central differences + Richardson."""
    h = h0 if h0 is not None else 0.1 * max(abs(x), 1e-2)
    h = min(h, 0.45 * x / n) if x > 0 else h
    coeff = [(-1) ** k * math.comb(n, k) for k in range(n + 1)]

    def D(hh):
        # central n-th difference with step hh, order h^2
        return sum(c * g(x + (n / 2 - k) * hh) for k, c in enumerate(coeff)) / hh ** n

    T = [[D(h / 2 ** i)] for i in range(levels)]
    for i in range(1, levels):
        for j in range(1, i + 1):
            T[i].append(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (4 ** j - 1))
    return T[-1][-1]


def _frac_integral_left(f, beta, x):
    """I^β f(x) = 1/Γ(β) ∫_0^x (x−y)^{β−1} f(y) dy via u = (x−y)^β."""
    if x == 0:
        return 0.0
    umax = x ** beta
    val, err = integrate.quad(lambda u: f(x - u ** (1.0 / beta)), 0.0, umax,
                              epsabs=0, epsrel=1e-12, limit=400)
    if not np.isfinite(val):
        raise ConvergenceError("fractional integral did not converge")
    return val / (beta * math.gamma(beta))


def rl_left(f, c, x: float, derivs=None):
    """₀D_x^c f at x > 0.

    For c ∈ N_0 this is f^{(c)}(x) (``derivs(k, x)`` is used when supplied,
    otherwise Richardson-extrapolated differences).  For c < 0 it is the
    fractional/iterated integral.  Otherwise the fractional integral of order
    n − c is differentiated n times; when ``derivs`` is given this is done
    analytically via ₀D^c f = Σ_{k<n} f^{(k)}(0) x^{k−c}/Γ(k−c+1) + I^{n−c} f^{(n)}.
    """
    o = _order(c)
    if x <= 0:
        raise ValueError("rl_left needs x > 0")
    if o.c == 0:
        return f(x)
    if o.is_integer and o.c > 0:
        k = int(o.c)
        return derivs(k, x) if derivs is not None else _richardson_derivative(f, x, k)
    beta = o.beta
    if o.n == 0:
        return _frac_integral_left(f, beta, x)
    if derivs is not None:
        head = sum(derivs(k, 0.0) * x ** (k - o.c) / math.gamma(k - o.c + 1) for k in range(o.n))
        return head + _frac_integral_left(lambda y: derivs(o.n, y), beta, x)
    g = lambda xx: _frac_integral_left(f, beta, xx)
    return _richardson_derivative(g, x, o.n)


def _frac_integral_right(f, beta, x, scale):
    """1/Γ(β) ∫_x^∞ (y−x)^{β−1} f(y) dy, tail cut at x + 40·scale."""
    L = 40.0 * scale
    umax = L ** beta
    val = integrate.quad(lambda u: f(x + u ** (1.0 / beta)), 0.0, umax, epsabs=0, epsrel=1e-12, limit=400)[0]
    # remainder bound: integrand envelope at the cut relative to the bulk
    tail = abs(f(x + L)) * scale * L ** (beta - 1) if beta != 1 else abs(f(x + L)) * scale
    if not np.isfinite(val) or tail > 1e-10 * max(abs(val), 1e-300) and tail > 1e-14:
        raise ConvergenceError("right differintegral: integrand does not decay fast enough")
    return val / (beta * math.gamma(beta))


def rl_right(f, c, x: float, derivs=None, scale: float = 1.0):
    """ₓD_∞^c f at x ≥ 0 for rapidly decaying f (decay length ``scale``).

    Integer c ≥ 0 gives (−1)^c f^{(c)}(x); negative c the right-tail integral.
    """
    o = _order(c)
    if o.c == 0:
        return f(x)
    if o.is_integer and o.c > 0:
        k = int(o.c)
        d = derivs(k, x) if derivs is not None else _richardson_derivative(f, x, k, h0=0.05 * scale)
        return (-1) ** k * d
    beta = o.beta
    if o.n == 0:
        return _frac_integral_right(f, beta, x, scale)
    if derivs is not None:
        return _frac_integral_right(lambda y: (-1) ** o.n * derivs(o.n, y), beta, x, scale)
    g = lambda xx: _frac_integral_right(f, beta, xx, scale)
    return (-1) ** o.n * _richardson_derivative(g, x, o.n, h0=0.05 * scale)


# ------------------------------------------------------------- Bessel families

def entire_bessel(mu: float, w):
    """E_μ(w) = w^{−μ/2} J_μ(2√w) = Σ (−w)^ℓ/(Γ(μ+ℓ+1) ℓ!), entire in w ≥ 0."""
    w = np.asarray(w, dtype=float)
    out = np.empty(w.shape)
    small = w < 1.0
    ws = w[small]
    acc = np.zeros(ws.shape)
    term = np.ones(ws.shape)
    for ell in range(40):
        acc += term * sp.rgamma(mu + ell + 1)
        term = term * (-ws) / (ell + 1)
    out[small] = acc
    wb = w[~small]
    out[~small] = wb ** (-mu / 2) * sp.jv(mu, 2 * np.sqrt(wb))
    return out[()] if out.ndim == 0 else out


def jtilde(nu, theta, eta, x, s):
    """J̃ν(θ,η,x,s) = (θηx)^ν E_ν(θηx) e^{2sθη}."""
    w = np.asarray(theta, dtype=float) * eta * x
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(w > 0, np.abs(w) ** nu, 1.0 if nu == 0 else (0.0 if nu > 0 else np.inf))
    return pw * entire_bessel(nu, w) * np.exp(2 * s * np.asarray(theta) * eta)


def jhat(nu, theta, eta, x, s):
    """Ĵν(θ,η,x,s) = E_ν(θηx) e^{2sθη}; equals e^{2sθη}/Γ(ν+1) at x = 0."""
    w = np.asarray(theta, dtype=float) * eta * x
    return entire_bessel(nu, w) * np.exp(2 * s * np.asarray(theta) * eta)


def _leibniz_E(nu, n, a, tx, u, sign_shift):
    """d^n/du^n [e^{a u} E_ν(tx·u)] without the exponential factor.

    E_ν^{(i)}(w) = (−1)^i E_{ν+i}(w).  ``sign_shift`` is unused (kept for
    symmetry with the J̃ variant).
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    for i in range(n + 1):
        out = out + math.comb(n, i) * a ** (n - i) * (-tx) ** i * entire_bessel(nu + i, tx * u)
    return out


def jhat_deriv(nu, n: int, theta, eta, x, s):
    """d^n/dη^n Ĵν(θ,η,x,s) (exact)."""
    a = 2 * s * theta
    return _leibniz_E(nu, n, a, theta * x, eta, None) * np.exp(a * np.asarray(eta))


def _phi_deriv(nu, k, tx, u):
    """d^k/du^k [(tx·u)^{ν/2} J_ν(2√(tx·u))] = tx^k · w^{ν−k} E_{ν−k}(w), w = tx·u."""
    w = tx * np.asarray(u, dtype=float)
    mu = nu - k
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(w > 0, np.abs(w) ** mu, 0.0 if mu > 0 else (1.0 if mu == 0 else np.inf))
    e = entire_bessel(mu, w)
    val = pw * e
    # at w = 0 with a negative integer μ the series starts at ℓ = −μ: finite limit
    if mu < 0 and float(mu).is_integer():
        m = int(-mu)
        lim = (-1) ** m / math.factorial(m)
        val = np.where(w == 0, lim, val)
    return tx ** k * val


def jtilde_deriv(nu, n: int, theta, eta, x, s):
    """d^n/dη^n J̃ν(θ,η,x,s) (exact Leibniz sum)."""
    a = 2 * s * theta
    tx = theta * x
    out = 0.0
    for k in range(n + 1):
        out = out + math.comb(n, k) * a ** (n - k) * _phi_deriv(nu, k, tx, eta)
    return out * np.exp(a * np.asarray(eta))


# ----------------------------------------------------------- J̃ differintegral

def _n_nodes(a_eta, tx_eta, base=40):
    return int(min(400, base + 1.5 * abs(a_eta) + 6.0 * math.sqrt(max(tx_eta, 0.0))))


def jtilde_diff_reduced(nu, c, theta, eta, x, s, n_nodes=None):
    """J̃ν^(c)(θ,η,x,s) / (θx)^ν, by the Beta-integral representation.

    Writing J̃ν(θ,u,x,s) = (θx)^ν u^ν Ĵν(θ,u,x,s) and β = n − c,

        I^β[u^ν Ĵ](η) = η^{ν+β} H_0(η),
        H_k(η) = 1/Γ(β) ∫_0^1 (1−v)^{β−1} v^{ν+k} Ĵ^{[k]}(ηv) dv,

    and ₀D^c = d^n/dη^n I^β expands by Leibniz into the H_k, each a
    Gauss–Jacobi rule with an entire integrand.
    """
    o = _order(c)
    n, beta = o.n, o.beta
    theta = np.asarray(theta, dtype=float)
    a = 2 * s * theta
    tx = theta * x
    if n_nodes is None:
        n_nodes = _n_nodes(float(np.max(np.abs(a))) * eta, float(np.max(tx)) * eta)
    p = nu + beta
    total = 0.0
    for k in range(n + 1):
        v, w = gauss_jacobi01(n_nodes, nu + k, beta - 1)
        u = eta * v  # (..., n_nodes)
        uu = u[None, :] if theta.ndim == 0 else u[None, :]
        aa = np.reshape(a, (-1, 1))
        txx = np.reshape(tx, (-1, 1))
        f = _leibniz_E(nu, k, aa, txx, uu, None) * np.exp(aa * uu)
        Hk = (f @ w) / math.gamma(beta)
        # d^{n−k}/dη^{n−k} η^{p} = falling factorial · η^{p−n+k}
        ff = 1.0
        for i in range(n - k):
            ff *= p - i
        total = total + math.comb(n, k) * ff * eta ** (p - n + k) * Hk
    total = np.asarray(total)
    return total.reshape(theta.shape) if theta.ndim else total.reshape(())[()]


def _jtilde_series_Kc(nu, c, theta, eta, x, s, tol=1e-15, nmax=500):
    """Series Σ_n (−1)^n η^{n−c} J̃^{(n)}(η) / (n! (n−c) Γ(−c)), Kahan-summed."""
    total = 0.0
    comp = 0.0
    prev_delta = math.inf
    stagnant = 0
    max_term = 0.0
    lg = 0.0  # log n!
    for n in range(nmax):
        if n > 0:
            lg += math.log(n)
        dn = float(jtilde_deriv(nu, n, theta, eta, x, s))
        term = (-1) ** n * eta ** (n - c) * dn / ((n - c) * math.exp(lg))
        max_term = max(max_term, abs(term))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        delta = abs(term)
        if delta <= tol * abs(total) and n > 2:
            break
        if delta >= prev_delta and n > 4:
            stagnant += 1
            if stagnant >= 2:
                raise ConvergenceError("derivative series stagnates")
        else:
            stagnant = 0
        prev_delta = delta
    else:
        raise ConvergenceError("derivative series exceeded the term cap")
    if max_term > 1e6 * abs(total):
        raise ConvergenceError("derivative series suffers catastrophic cancellation")
    return total / math.gamma(-c)


def jtilde_diff(nu, c, theta, eta, x, s, method: str = "auto"):
    """J̃ν^(c)(θ,η,x,s) = ₀D_η^c J̃ν.

    method: "auto" (integer c: exact derivative; otherwise the derivative series
    when J̃ is entire in η, i.e. integer ν, falling back to quadrature),
    "series", "quadrature" or "rl" (generic rl_left on η ↦ J̃ν).
    """
    o = _order(c)
    if o.is_integer and o.c >= 0 and method in ("auto", "series"):
        return jtilde_deriv(nu, int(o.c), theta, eta, x, s)
    if method == "rl":
        f = lambda e: float(jtilde(nu, theta, e, x, s))
        return rl_left(f, o, eta)
    if method == "series" or (method == "auto" and float(nu).is_integer()):
        try:
            return _jtilde_series_Kc(nu, o.c, theta, eta, x, s)
        except ConvergenceError:
            if method == "series":
                raise
    theta_a = np.asarray(theta, dtype=float)
    return (theta_a * x) ** nu * jtilde_diff_reduced(nu, o, theta, eta, x, s)


# ----------------------------------------------------------- Ĵ differintegral

def _hat_nodes(n_nodes, alpha):
    return gen_laguerre(n_nodes, alpha)


def jhat_diff_reduced(nu, c, theta, eta, x, s, n_nodes=96):
    """Ĵν^(c)(θ,η,x,s) · e^{−2sθη} for s < 0 (vectorized over θ).

    Ĵ^(c)(η) = (−1)^n/Γ(β) ∫_0^∞ w^{β−1} Ĵ^{[n]}(η+w) dw with β = n − c;
    the substitution w = r/|a|, a = 2sθ, turns it into a generalized
    Gauss–Laguerre rule with weight r^{β−1} e^{−r}.
    """
    if s >= 0:
        raise ValueError("jhat_diff needs s < 0")
    o = _order(c)
    theta = np.asarray(theta, dtype=float)
    a = np.reshape(2 * s * theta, (-1, 1))
    tx = np.reshape(theta * x, (-1, 1))
    if o.is_integer and o.c >= 0:
        k = int(o.c)
        val = (-1) ** k * _leibniz_E(nu, k, a, tx, np.full((1, 1), eta), None)[:, 0]
        return val.reshape(theta.shape) if theta.ndim else val[0]
    n, beta = o.n, o.beta
    r, w = _hat_nodes(n_nodes, beta - 1)
    A = np.abs(a)
    u = eta + r[None, :] / A
    f = _leibniz_E(nu, n, a, tx, u, None)  # e^{a(η+w)} factored: e^{aη} e^{−r}
    val = (-1) ** n * (f @ w) / (A[:, 0] ** beta * math.gamma(beta))
    return val.reshape(theta.shape) if theta.ndim else val[0]


def jhat_diff(nu, c, theta, eta, x, s, method: str = "gauss", n_nodes=96):
    """Ĵν^(c)(θ,η,x,s) = _ηD_∞^c Ĵν for s < 0.

    method "gauss": generalized Gauss–Laguerre on the decay scale 1/(2|s|θ);
    method "quad": adaptive quadrature of the defining integral after
    u = (ξ−η)^{n−c}, tail cut at η + 40/(2|s|θ).
    """
    if s >= 0:
        raise ValueError("jhat_diff needs s < 0 (decay condition)")
    o = _order(c)
    if method == "gauss":
        return jhat_diff_reduced(nu, o, theta, eta, x, s, n_nodes) * np.exp(2 * s * np.asarray(theta) * eta)
    if method != "quad":
        raise ValueError(method)
    theta = float(theta)
    scale = 1.0 / (2 * abs(s) * theta)
    if o.is_integer and o.c >= 0:
        return (-1) ** int(o.c) * float(jhat_deriv(nu, int(o.c), theta, eta, x, s))
    d = lambda k, xi: float(jhat_deriv(nu, k, theta, xi, x, s))
    return rl_right(lambda xi: float(jhat(nu, theta, xi, x, s)), o, eta, derivs=d, scale=scale)


def jhat_diff_xi_integral(nu, c, theta, x, s, a_frak, n_nodes=96, reduced=False):
    """∫_1^∞ ξ^𝔞 Ĵν^(c)(θ,ξ,x,s) dξ for s < 0 (vectorized over θ).

    Exchanging the order of integration gives ∫_0^∞ K(1+w) (−1)^n Ĵ^{[n]}(1+w) dw,
    K(1+w) = w^β ₂F₁(−𝔞, 1; β+1; −w) / Γ(β+1).  With ``reduced=True`` the
    factor e^{2sθ} is removed from the result.
    """
    if s >= 0:
        raise ValueError("needs s < 0")
    o = _order(c)
    theta = np.asarray(theta, dtype=float)
    a = np.reshape(2 * s * theta, (-1, 1))
    A = np.abs(a)
    tx = np.reshape(theta * x, (-1, 1))
    if o.is_integer and o.c >= 0:
        n, beta = int(o.c), 0.0
    else:
        n, beta = o.n, o.beta
    # weight r^β e^{−r} (β = 0 for integer orders: K ≡ ξ^𝔞 integrated from 1)
    r, w = gen_laguerre(n_nodes, beta)
    wv = r[None, :] / A
    if beta > 0:
        K = sp.hyp2f1(-a_frak, 1.0, beta + 1, -wv) / math.gamma(beta + 1)
    else:
        K = (1 + wv) ** a_frak
    f = _leibniz_E(nu, n, a, tx, 1 + wv, None) * K
    val = (-1) ** n * (f @ w) / A[:, 0] ** (beta + 1)
    if not reduced:
        val = val * np.exp(a[:, 0])
    return val.reshape(theta.shape) if theta.ndim else val[0]
