"""Transition densities of generalized meanders and their non-colliding systems.

Notation: G^(ν)(t; y|x) is the Bessel-process transition density,
h_T(t, x) = ∫ G^(ν)(T−t; y|x) y^{−κ} dy the space-time harmonic weight, and
the generalized meander is the h-transform

    G_T(s, x; t, y) = G^(ν)(t−s; y|x) h_T(t, y) / h_T(s, x).

The squared-coordinate kernel used in the multitime density is

    p̃(t, y|x) = e^{−(x+y)/2t}/(2t) · (y/x)^{𝔟/2} I_ν(√(xy)/t),   x > 0,
    p̃(t, y|0) = y^𝔞 e^{−y/2t} / (2^{ν+1} Γ(ν+1) t^{ν+1}).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special as sp

from .params import AdmissibilityError, ModelParams, TimeGrid
from .quadrature import ordered_pair_matrix, power_grid
from .specfun import bessel_i_scaled

__all__ = [
    "bessel_density",
    "h_weight",
    "meander_density",
    "meander_cdf_terminal",
    "squared_meander_density",
    "ptilde",
    "ptilde_from_bessel",
    "km_determinant",
    "normalization_constant",
    "initial_density",
    "multitime_density",
    "SamplePaths",
    "simulate_paths",
    "write_paths_csv",
]


def _ratio_iv(nu, z):
    """I_ν(z)/z^ν, finite at z = 0 where it equals 1/(2^ν Γ(ν+1))."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 1e-8
    out[small] = 1.0 / (2.0 ** nu * sp.gamma(nu + 1))
    zz = z[~small]
    out[~small] = sp.iv(nu, zz) / zz ** nu
    return out


def bessel_density(nu: float, t: float, x, y):
    """G^(ν)(t; y|x) for the 2(ν+1)-dimensional Bessel process."""
    if t <= 0:
        raise ValueError("bessel_density needs t > 0")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.zeros(x.shape)
    zero = x == 0
    if np.any(zero):
        yz = y[zero]
        out[zero] = yz ** (2 * nu + 1) * np.exp(-yz * yz / (2 * t)) / (2 ** nu * sp.gamma(nu + 1) * t ** (nu + 1))
    pos = ~zero
    if np.any(pos):
        xp, yp = x[pos], y[pos]
        z = xp * yp / t
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (yp ** (nu + 1) / xp ** nu / t) * np.exp(-(xp - yp) ** 2 / (2 * t)) * bessel_i_scaled(nu, z)
        # y = 0 with ν < −1/2 : y^{ν+1} I_ν(xy/t) → y^{2ν+1} behaviour, keep the limit
        v = np.where(yp == 0, 0.0 if 2 * nu + 1 > 0 else np.inf, v)
        out[pos] = v
    return out[()] if out.ndim == 0 else out


def _h_kummer(params: ModelParams, tau, x):
    nu, kappa = params.nu, params.kappa
    tau = np.asarray(tau, dtype=float)
    x = np.asarray(x, dtype=float)
    pref = (2 * tau) ** (-kappa / 2) * sp.gamma(nu + 1 - kappa / 2) / sp.gamma(nu + 1)
    return pref * sp.hyp1f1(kappa / 2, nu + 1, -x * x / (2 * tau))


def _h_quad(params: ModelParams, tau: float, x: float) -> float:
    nu, kappa = params.nu, params.kappa
    p = 2 * (nu + 1) - kappa  # G(τ; y|x) y^{−κ} ~ y^{p−1} near 0
    # [0,1]: u = y^p removes the endpoint power exactly
    def head(u):
        if u == 0:
            return float(bessel_density(nu, tau, x, 0.0) * 0) if p > 0 else 0.0
        y = u ** (1 / p)
        g = bessel_density(nu, tau, x, y)
        return float(g * y ** (-kappa) * y ** (1 - p) / p)

    # y^{1−p} G y^{−κ} ~ y^{1−p} y^{2ν+1} y^{−κ} x^{...}: smooth since 2ν+1−κ+1−p = 0
    h1 = integrate.quad(head, 0.0, 1.0, epsabs=0, epsrel=1e-12, limit=200)[0]
    hi = max(2.0, x + 40 * math.sqrt(tau))
    tail = integrate.quad(lambda y: float(bessel_density(nu, tau, x, y)) * y ** (-kappa), 1.0, hi,
                          points=[x] if 1 < x < hi else None, epsabs=0, epsrel=1e-12, limit=400)[0]
    return h1 + tail


def h_weight(params: ModelParams, t: float, x, method: str = "quad"):
    """h_T(t, x) = ∫_0^∞ G^(ν)(T−t; y|x) y^{−κ} dy.

    ``method="quad"`` integrates the definition (endpoint power removed by the
    substitution u = y^{2(ν+1)−κ} on [0, 1]); ``method="kummer"`` uses the
    closed form (2τ)^{−κ/2} Γ(ν+1−κ/2)/Γ(ν+1) ₁F₁(κ/2; ν+1; −x²/2τ).
    """
    T = params.T
    if t > T * (1 + 1e-14):
        raise ValueError("h_weight: t must not exceed T")
    tau = T - t
    if params.kappa == 0:
        return np.ones_like(np.asarray(x, dtype=float))[()] * 1.0
    if tau <= 0:
        return np.asarray(x, dtype=float) ** (-params.kappa)
    if method == "kummer":
        return _h_kummer(params, tau, x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.array([_h_quad(params, tau, xi) for xi in xs])
    return vals[0] if np.ndim(x) == 0 else vals.reshape(np.shape(x))


def meander_density(params: ModelParams, s: float, x, t: float, y, h_method: str = "kummer"):
    """G_T^{(ν,κ)}(s, x; t, y) = G^(ν)(t−s; y|x) h(t, y) / h(s, x)."""
    if not 0 <= s < t <= params.T * (1 + 1e-14):
        raise ValueError("meander_density needs 0 <= s < t <= T")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or (s > 0 and np.any(x == 0)):
        raise ValueError("meander_density needs x > 0, or (s, x) = (0, 0)")
    g = bessel_density(params.nu, t - s, x, y)
    return g * h_weight(params, t, y, h_method) / h_weight(params, s, x, h_method)


def squared_meander_density(params: ModelParams, s, x, t, y, h_method: str = "kummer"):
    """p_T(s, x; t, y) = G_T(s, √x; t, √y) · ½ y^{−1/2}."""
    y = np.asarray(y, dtype=float)
    ry = np.sqrt(y)
    with np.errstate(divide="ignore"):
        return meander_density(params, s, np.sqrt(x), t, ry, h_method) / (2 * ry)


def ptilde(params: ModelParams, dt: float, x, y):
    """Weighted squared-coordinate kernel p̃^{(ν,κ)}(dt, y|x) (two branches)."""
    if dt <= 0:
        raise ValueError("ptilde needs dt > 0")
    nu, a, kappa = params.nu, params.a_frak, params.kappa
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.empty(x.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        ya = np.where(y > 0, y ** a, 0.0 if a > 0 else (1.0 if a == 0 else np.inf))
        zero = x == 0
        out[zero] = ya[zero] * np.exp(-y[zero] / (2 * dt)) / (2 ** (nu + 1) * sp.gamma(nu + 1) * dt ** (nu + 1))
        pos = ~zero
        xp, yp = x[pos], y[pos]
        z = np.sqrt(xp * yp) / dt
        big = z > 1.0
        val = np.empty(xp.shape)
        # large z: scaled Bessel keeps the Gaussian-like factor finite
        zb = z[big]
        val[big] = (np.exp(-(np.sqrt(xp[big]) - np.sqrt(yp[big])) ** 2 / (2 * dt)) / (2 * dt)
                    * (yp[big] / xp[big]) ** (params.b_frak / 2) * sp.ive(nu, zb))
        sm = ~big
        val[sm] = (ya[pos][sm] * xp[sm] ** (kappa / 2) * np.exp(-(xp[sm] + yp[sm]) / (2 * dt))
                   / (2 * dt ** (nu + 1)) * _ratio_iv(nu, z[sm]))
        out[pos] = val
    return out[()] if out.ndim == 0 else out


def ptilde_from_bessel(params: ModelParams, dt: float, x, y):
    """p̃ via the unsquared kernel: G(dt; √y|√x) (y/x)^{−κ/2} · ½ y^{−1/2}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    g = bessel_density(params.nu, dt, np.sqrt(x), np.sqrt(y)) / (2 * np.sqrt(y))
    w = np.where(x > 0, (y / np.where(x > 0, x, 1.0)) ** (-params.kappa / 2), y ** (-params.kappa / 2))
    return g * w


# ------------------------------------------------------------------ N particles

def _check_config(c):
    c = np.asarray(c, dtype=float)
    if c.ndim != 1:
        raise ValueError("configuration must be one-dimensional")
    return c


def km_determinant(params: ModelParams, grid: TimeGrid, configs, kernel: str = "bessel"):
    """Product over time steps of Karlin–McGregor determinants.

    ``configs[m]`` is the configuration at time t_{m+1}.  With
    ``kernel="bessel"`` the one-step kernel is G^(ν)(Δt; y_j|x_k) (unsquared
    coordinates); with ``kernel="ptilde"`` it is p̃(Δt, y_j|x_k).
    A single configuration with one time returns 1.
    """
    cfgs = [_check_config(c) for c in configs]
    n = {len(c) for c in cfgs}
    if len(n) != 1:
        raise ValueError("all configurations must have the same size")
    val = 1.0
    for m in range(len(cfgs) - 1):
        dt = grid.t(m + 2) - grid.t(m + 1)
        x, y = cfgs[m], cfgs[m + 1]
        if kernel == "bessel":
            mat = bessel_density(params.nu, dt, x[None, :], y[:, None])
        else:
            mat = ptilde(params, dt, x[None, :], y[:, None])
        val *= np.linalg.det(np.atleast_2d(mat))
    return float(val)


def normalization_constant(params: ModelParams, t: float) -> float:
    """C^{ν,κ}_{N,T}(t) of the one-time density from the origin."""
    N, T, nu, kappa = params.N, params.T, params.nu, params.kappa
    lg = ((N + kappa - 1) * N / 2 * math.log(T) - (N - 1) * N * math.log(t)
          - N * (N - kappa - 1) / 2 * math.log(2))
    for j in range(1, N + 1):
        lg += (math.lgamma(nu + 1) + math.lgamma(0.5) - math.lgamma(j / 2)
               - math.lgamma((j + 1 + 2 * nu - kappa) / 2))
    return math.exp(lg)


def _debruijn(fvals, v):
    """∫_{y_1<…<y_n} det[f_k(y_j)] dy from samples on a uniform grid in v.

    Pfaffian form of de Bruijn's formula, bordered for odd n.  ``fvals`` has
    shape (n, K) and includes the Jacobian of the map v ↦ y.
    """
    from .pfaffian import pfaffian

    n = fvals.shape[0]
    M = ordered_pair_matrix(fvals, v)
    if n % 2:
        tot = integrate.simpson(fvals, x=v, axis=-1)
        Mb = np.zeros((n + 1, n + 1))
        Mb[:n, :n] = M
        Mb[:n, n] = tot
        Mb[n, :n] = -tot
        M = Mb
    return pfaffian(M)


def initial_density(params: ModelParams, t: float, y_config, n_nodes: int = 4001):
    """g_{N,T}(0, 0; t, y) for N ≤ 3 in unsquared coordinates.

    C · Π G(t, y_j|0) · Π_{j<k}(y_k² − y_j²) · Ñ(T−t, y), where Ñ is the
    ordered-cone integral of det[G(T−t; z_j|y_k)] Π z^{−κ}.
    """
    y = _check_config(y_config)
    N, nu, kappa, T = params.N, params.nu, params.kappa, params.T
    if len(y) != N:
        raise ValueError("configuration size must equal N")
    if N > 3:
        raise NotImplementedError("initial_density supports N <= 3; use the Pfaffian route")
    if not 0 < t <= T:
        raise ValueError("need 0 < t <= T")
    C = normalization_constant(params, t)
    vand = 1.0
    for j in range(N):
        for k in range(j + 1, N):
            vand *= y[k] ** 2 - y[j] ** 2
    base = C * np.prod(bessel_density(nu, t, 0.0, y)) * vand
    tau = T - t
    if tau <= 0:
        return float(base * np.prod(y ** (-kappa)))
    # Ñ: functions z ↦ G(τ; z|y_k) z^{−κ}, which behave like z^{2ν+1−κ} at 0
    hi = float(np.max(y) + 40 * math.sqrt(tau) + 5)
    z, jac, v = power_grid(hi, n_nodes, 2 * nu + 2 - kappa)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.array([bessel_density(nu, tau, yk, z) * z ** (-kappa) * jac for yk in y])
    f[:, 0] = 0.0
    Ntil = _debruijn(f, v)
    return float(base * Ntil)


def multitime_density(params: ModelParams, grid: TimeGrid, configs):
    """Symmetric multitime density 𝔭 of the squared system at t_1 < … < t_{M+1} = T.

    𝔭 = C(t_1) h_N(y^{(1)}) sgn(h_N(y^{(M+1)})) Π_k p̃(t_1, y_k^{(1)}|0)
        Π_m det[p̃(t_{m+1} − t_m, y_j^{(m+1)}|y_k^{(m)})],
    with h_N(y) = Π_{j<k}(y_k − y_j).  Integrating against (1/N!)^{M+1} over
    R_+^{N(M+1)} gives total mass one.
    """
    cfgs = [_check_config(c) for c in configs]
    if len(cfgs) != grid.M + 1:
        raise ValueError("need one configuration per observation time")
    N = params.N
    if any(len(c) != N for c in cfgs):
        raise ValueError("every configuration must have N points")

    def hN(c):
        out = 1.0
        for j in range(N):
            for k in range(j + 1, N):
                out *= c[k] - c[j]
        return out

    t1 = grid.t(1)
    val = normalization_constant(params, t1) * hN(cfgs[0]) * float(np.sign(hN(cfgs[-1])))
    val *= float(np.prod(ptilde(params, t1, 0.0, cfgs[0])))
    for m in range(grid.M):
        dt = grid.t(m + 2) - grid.t(m + 1)
        mat = ptilde(params, dt, cfgs[m][None, :], cfgs[m + 1][:, None])
        val *= float(np.linalg.det(np.atleast_2d(mat)))
    return val


# ---------------------------------------------------------------- simulation

@dataclass(frozen=True)
class SamplePaths:
    """Observed positions (unsquared) ``x[path, step, particle]`` at ``t[step]``."""

    t: np.ndarray
    x: np.ndarray
    scheme: str
    seed: int

    @property
    def n_paths(self) -> int:
        return self.x.shape[0]


def _path_rng(seed: int, path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(path)])))


def _terminal_mixture(params: ModelParams, s: float, x, kmax: int | None = None):
    """Shapes a_k − κ/2 and normalized weights of the terminal mixture, shape (..., kmax+1)."""
    nu, kappa = params.nu, params.kappa
    tau = params.T - s
    x = np.asarray(x, dtype=float)
    lam = x * x / (2 * tau)
    if kmax is None:
        lm = float(np.max(lam)) if lam.size else 0.0
        kmax = int(lm + 12 * math.sqrt(lm + 1) + 40)
    k = np.arange(kmax + 1)
    lam = lam[..., None]
    with np.errstate(divide="ignore"):
        logw = -lam + k * np.log(np.where(lam > 0, lam, 1.0)) - sp.gammaln(k + 1)
    logw = np.where((lam == 0) & (k > 0), -np.inf, logw)
    a = nu + 1 + k
    mom = np.exp(logw + sp.gammaln(a - kappa / 2) - sp.gammaln(a))
    return a - kappa / 2, mom / np.sum(mom, axis=-1, keepdims=True), tau


def meander_cdf_terminal(params: ModelParams, s: float, x, y, kmax: int | None = None):
    """P(Y_T ≤ y | Y_s = x) for the one-particle generalized meander.

    In squared coordinates the Bessel kernel is a Poisson(λ)-mixture of
    Gamma(ν+1+k, 2τ) laws with λ = x²/2τ; integrating z^{−κ/2} against each
    Gamma component gives regularized incomplete gamma functions.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape, w, tau = _terminal_mixture(params, s, x, kmax)
    return np.sum(w * sp.gammainc(shape, (y * y / (2 * tau))[..., None]), axis=-1)


def _sample_terminal(params, s, x, u, iters=100):
    """Invert the terminal CDF: Newton steps on the mixture, kept inside a bisection bracket."""
    shape, w, tau = _terminal_mixture(params, s, x)
    lgs = sp.gammaln(shape)

    def cdf_pdf(y, idx):
        z = (y * y / (2 * tau))[:, None]
        sh, ww = shape[idx], w[idx]
        F = np.sum(ww * sp.gammainc(sh, z), axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.exp((sh - 1) * np.log(z) - z - lgs[idx])
        f = np.sum(ww * np.nan_to_num(dens), axis=-1) * y / tau
        return F, f

    n = len(x)
    shape = np.broadcast_to(shape, w.shape)
    lgs = np.broadcast_to(lgs, w.shape)
    lo = np.zeros(n)
    hi = x + 22 * math.sqrt(tau)
    every = np.arange(n)
    while True:
        bad = cdf_pdf(hi, every)[0] < u
        if not np.any(bad):
            break
        hi = np.where(bad, 2 * hi, hi)
    y = 0.5 * (lo + hi)
    act = every
    for _ in range(iters):
        if act.size == 0:
            break
        ya, la, ha, ua = y[act], lo[act], hi[act], u[act]
        F, f = cdf_pdf(ya, act)
        below = F < ua
        la = np.where(below, ya, la)
        ha = np.where(below, ha, ya)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = ya - (F - ua) / f
        inside = np.isfinite(step) & (step > la) & (step < ha)
        ynew = np.where(inside, step, 0.5 * (la + ha))
        done = np.abs(ynew - ya) <= 1e-13 * np.maximum(1.0, ya)
        y[act], lo[act], hi[act] = ynew, la, ha
        act = act[~done]
    return y


def _sim_exact(params: ModelParams, times, n_paths, seed):
    nu, kappa = params.nu, params.kappa
    n_obs = len(times)
    T = params.T
    X = np.zeros((n_paths, n_obs))
    terminal = abs(times[-1] - T) <= 1e-14 * T
    inner = n_obs - 1 if terminal else n_obs
    df = 2 * nu + 2
    u_final = np.zeros(n_paths)
    hmaxes = [_h_kummer(params, T - t, 0.0) if kappa > 0 else 1.0 for t in times[:inner]]
    for i in range(n_paths):
        rng = _path_rng(seed, i)
        u_final[i] = rng.random()
        prev_t, prev_x = 0.0, 0.0
        for k in range(inner):
            t = times[k]
            dt = t - prev_t
            hmax = hmaxes[k]
            for _ in range(100000):
                lam = prev_x * prev_x / dt
                r2 = rng.noncentral_chisquare(df, lam) if lam > 0 else rng.chisquare(df)
                y = math.sqrt(dt * r2)
                if kappa == 0 or rng.random() * hmax <= _h_kummer(params, T - t, y):
                    break
            else:
                raise RuntimeError("rejection sampler failed to accept")
            X[i, k] = y
            prev_t, prev_x = t, y
    if terminal:
        s_prev = times[-2] if n_obs > 1 else 0.0
        x_prev = X[:, -2] if n_obs > 1 else np.zeros(n_paths)
        X[:, -1] = _sample_terminal(params, s_prev, x_prev, u_final)
    return X[:, :, None]


def _laguerre_beta2(rng, N, nu, t):
    """Eigenvalues of the β=2 Laguerre ensemble with weight λ^ν e^{−λ/2t}."""
    a = nu + N  # exponent a − p = ν with p = 1 + (N−1)
    d = np.sqrt(rng.chisquare(2 * a - 2 * np.arange(N)))
    off = np.sqrt(rng.chisquare(2 * np.arange(N - 1, 0, -1))) if N > 1 else np.array([])
    B = np.diag(d) + (np.diag(off, -1) if N > 1 else 0)
    lam = np.linalg.eigvalsh(B @ B.T)
    return np.sort(lam) * t


def _drift_interaction(z):
    n = z.shape[-1]
    if n == 1:
        return np.zeros_like(z)
    d = z[..., :, None] - z[..., None, :]
    s = z[..., :, None] + z[..., None, :]
    with np.errstate(divide="ignore"):
        inv = np.where(np.eye(n, dtype=bool), 0.0, 1.0 / np.where(d == 0, np.inf, d) + 1.0 / s)
    return inv.sum(axis=-1)


def _euler_step(z, dW, dt, nu):
    y = z + _drift_interaction(z) * dt + dW
    c = (2 * nu + 1) / 2
    if c > 0:
        # implicit wall term: z' = y + c dt / z'  →  positive root
        return 0.5 * (y + np.sqrt(y * y + 4 * c * dt))
    return np.abs(y)


def _sim_euler(params: ModelParams, times, n_steps, n_paths, seed, max_depth=12):
    if params.kappa != 0:
        raise AdmissibilityError("sde_euler simulates the kappa = 0 system only")
    N, nu = params.N, params.nu
    T = params.T
    grid_t = np.linspace(0, T, n_steps + 1)
    dt = T / n_steps
    obs_idx = np.searchsorted(grid_t, np.asarray(times) - 1e-12 * T)
    X = np.zeros((n_paths, len(times), N))
    for i in range(n_paths):
        rng = _path_rng(seed, i)
        z = np.sqrt(_laguerre_beta2(rng, N, nu, dt))
        noise = rng.standard_normal((n_steps - 1, N)) * math.sqrt(dt)
        path = np.empty((n_steps + 1, N))
        path[0] = 0.0
        path[1] = z
        for k in range(1, n_steps):
            znew = _euler_step(z, noise[k - 1], dt, nu)
            if N > 1 and np.any(np.diff(znew) <= 0):
                znew = _substep(z, noise[k - 1], dt, nu, rng, max_depth)
            z = znew
            path[k + 1] = z
        X[i] = path[obs_idx]
    return X


def _substep(z, dW, dt, nu, rng, max_depth):
    """Refine one step by Brownian-bridge subdivision until ordering holds."""
    incs = dW[None, :]
    for depth in range(1, max_depth + 1):
        m = incs.shape[0]
        h = dt / (2 * m)
        # split each increment into two bridge halves
        mid = incs / 2 + rng.standard_normal(incs.shape) * math.sqrt(h / 2)
        incs = np.stack([mid, incs - mid], axis=1).reshape(2 * m, -1)
        zz = z.copy()
        ok = True
        for dw in incs:
            zz = _euler_step(zz, dw, h, nu)
            if np.any(np.diff(zz) <= 0):
                ok = False
                break
        if ok:
            return zz
    raise FloatingPointError("step-size instability: ordering inverted at minimum substep")


def simulate_paths(params: ModelParams, scheme: str, n_paths: int, n_steps: int, seed: int,
                   times=None) -> SamplePaths:
    """Sample paths of the one-particle meander or the κ=0 non-colliding system.

    ``exact_1particle``: N = 1, any admissible (ν, κ); observations at
    ``times`` (default: the n_steps equispaced times in (0, T]).  Each step is
    drawn from the exact transition kernel (Bessel proposals accepted with
    probability h(t, y)/h(t, 0) for t < T, and CDF inversion at t = T).

    ``sde_euler``: κ = 0, the N-particle SDE
    dZ_i = dB_i + [(2ν+1)/(2Z_i) + Σ_{j≠i}(1/(Z_i−Z_j) + 1/(Z_i+Z_j))] dt,
    started from the exact β=2 Laguerre law at t = T/n_steps.

    Every path uses its own random stream derived from (seed, path index).
    """
    if times is None:
        times = np.linspace(0, params.T, n_steps + 1)[1:]
    times = np.asarray(times, dtype=float)
    if scheme == "exact_1particle":
        if params.N != 1:
            raise AdmissibilityError("exact_1particle needs N = 1")
        X = _sim_exact(params, times, n_paths, seed)
    elif scheme == "sde_euler":
        X = _sim_euler(params, times, n_steps, n_paths, seed)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return SamplePaths(times, X, scheme, int(seed))


def write_paths_csv(paths: SamplePaths, fh) -> None:
    """CSV with header ``path_id,step,t,x_1..x_N`` and 17 significant digits."""
    n = paths.x.shape[2]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["path_id", "step", "t"] + [f"x_{j + 1}" for j in range(n)])
    for i in range(paths.x.shape[0]):
        for k, t in enumerate(paths.t):
            w.writerow([i, k + 1, f"{t:.17g}"] + [f"{v:.17g}" for v in paths.x[i, k]])
