"""Independent high-precision reference values (mpmath series, no package code)."""

import mpmath as mp


def jtilde_diff_series(nu, c, theta, eta, x, s, dps=40, terms=120):
    """₀D_η^c of (θηx)^{ν/2} J_ν(2√(θηx)) e^{2sθη} from the double power series.

    J̃ = (θx)^ν Σ_{ℓ,k} (−θx)^ℓ (2sθ)^k η^{ν+ℓ+k} / (ℓ! Γ(ν+ℓ+1) k!) and
    ₀D^c η^p = Γ(p+1)/Γ(p+1−c) η^{p−c}.
    """
    with mp.workdps(dps):
        nu, c, theta, eta, x, s = map(mp.mpf, (nu, c, theta, eta, x, s))
        a = 2 * s * theta
        tot = mp.mpf(0)
        for m in range(terms):  # m = ℓ + k
            inner = mp.mpf(0)
            for ell in range(m + 1):
                k = m - ell
                inner += (-theta * x) ** ell * a ** k * mp.rgamma(nu + ell + 1) / (mp.factorial(ell) * mp.factorial(k))
            p = nu + m
            tot += inner * mp.gamma(p + 1) * mp.rgamma(p + 1 - c) * eta ** (p - c)
        return (theta * x) ** nu * tot


def jhat_diff_series(nu, c, theta, eta, x, s, dps=40, terms=120):
    """_ηD_∞^c of (θηx)^{−ν/2} J_ν(2√(θηx)) e^{2sθη}, s < 0.

    Uses Ĵ = Σ_ℓ (−θx)^ℓ η^ℓ e^{aη}/(ℓ! Γ(ν+ℓ+1)) with a = 2sθ and
    _ηD_∞^c [η^ℓ e^{aη}] = ∂_a^ℓ [(−a)^c e^{aη}].
    """
    with mp.workdps(dps):
        nu, c, theta, eta, x, s = map(mp.mpf, (nu, c, theta, eta, x, s))
        a = 2 * s * theta
        tot = mp.mpf(0)
        for ell in range(terms):
            d = mp.mpf(0)
            ff = mp.mpf(1)  # c(c−1)...(c−j+1)
            for j in range(ell + 1):
                d += mp.binomial(ell, j) * (-1) ** j * ff * (-a) ** (c - j) * eta ** (ell - j)
                ff *= c - j
            tot += (-theta * x) ** ell * mp.rgamma(nu + ell + 1) / mp.factorial(ell) * d
        return tot * mp.exp(a * eta)


# --------------------------------------------------------------- N = 2 brute force

def _cutoff(params, grid):
    return 40.0 * params.T + 20.0


def brute_corr_final_pair(params, grid, y1, y2):
    """ρ(T, {y1, y2}) for N = 2: the symmetric density itself at M = 0."""
    from gmeander.meander import multitime_density

    return multitime_density(params, grid, [[y1, y2]])


def brute_corr_final_single(params, grid, y):
    """ρ(T, {y}) = ∫ 𝔭(y, z) dz for N = 2, M = 0."""
    from scipy import integrate
    from gmeander.meander import multitime_density

    f = lambda z: multitime_density(params, grid, [[y, z]])
    hi = _cutoff(params, grid)
    pts = [y] if y < hi else None
    return integrate.quad(f, 0, hi, points=pts, limit=400, epsabs=1e-13, epsrel=1e-10)[0]


def brute_corr_first_pair(params, grid, y1, y2):
    """ρ(t_1, {y1, y2}) = (1/2!) ∫∫ 𝔭(y1, y2; z1, z2) dz for N = 2, M = 1."""
    from scipy import integrate
    from gmeander.meander import multitime_density

    hi = _cutoff(params, grid)
    f = lambda z2, z1: multitime_density(params, grid, [[y1, y2], [z1, z2]])
    # the integrand is symmetric in (z1, z2): integrate over z1 < z2 only
    return integrate.dblquad(f, 0, hi, lambda z1: z1, lambda z1: hi, epsabs=1e-12, epsrel=1e-9)[0]


def brute_corr_pair_and_final(params, grid, y1, y2, z):
    """ρ(t_1, {y1, y2}; T, {z}) = ∫ 𝔭(y1, y2; z, w) dw for N = 2, M = 1."""
    from scipy import integrate
    from gmeander.meander import multitime_density

    hi = _cutoff(params, grid)
    f = lambda w: multitime_density(params, grid, [[y1, y2], [z, w]])
    return integrate.quad(f, 0, hi, points=[z], limit=400, epsabs=1e-13, epsrel=1e-10)[0]
