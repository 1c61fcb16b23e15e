"""Large-N convergence checks for the finite kernels.

All checks put T = N and t_m = N + s_m, as in the infinite-particle limit.
Each finite quantity is paired with its claimed limit, and the report carries
the relative-error sequence over an increasing N-list.  The hatted quantities are

    R̂_k^{(m)} = 2^ν T^ν Γ(ν+1) k!/Γ(k+1+2𝔞) · R̃_k^{(m)},
    Φ̂_k^{(m)} = 2^ν T^{−𝔟} Γ(ν+1) · Φ̃_k^{(m)},

with R̃, Φ̃ the factorial-free values carried by FiniteKernel.  Because the
index k must be an integer of fixed parity, θ is taken as k/N for the nearest
admissible k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..differint import jhat_diff, jhat_diff_xi_integral, jtilde_diff
from ..meander import ptilde
from ..params import ModelParams, TimeGrid
from ..specfun import gen_binomial_array, laguerre_all
from .finite import FiniteKernel
from .infinite import (
    InfiniteKernel,
    bessel_head_integral,
    homogeneous_kernel,
    kernel_D,
    kernel_G,
    kernel_I_tilde,
    kernel_S,
    kernel_S_tilde,
)

__all__ = [
    "ConvergenceReport",
    "MODES",
    "asymptotic_validate",
    "kernel_convergence",
    "homogeneous_limit_check",
    "equal_time_check",
]

MODES = ("R_even", "R_odd", "Phi_even", "Phi_odd", "ptilde", "I2lc")


@dataclass
class ConvergenceReport:
    """Error sequence of a finite quantity against its limit."""

    name: str
    grid: list
    finite: list
    limit: list
    errors: list
    tol: float = 0.05
    extra: dict = field(default_factory=dict)
    # errors below this are round-off; a sequence of them counts as converged
    floor: float = 1e-12

    @property
    def decreasing(self) -> bool:
        e = self.errors
        if max(e) <= self.floor:
            return True
        return all(b < a for a, b in zip(e, e[1:]))

    @property
    def passed(self) -> bool:
        return self.decreasing and self.errors[-1] < self.tol

    def rows(self):
        for g, f, l, e in zip(self.grid, self.finite, self.limit, self.errors):
            yield g, f, l, e


def _rel(a, b) -> float:
    return float(abs(a - b) / abs(b)) if b != 0 else float(abs(a - b))


def _nearest_index(N: int, theta: float, parity: int) -> int:
    k = int(round(N * theta))
    if k % 2 != parity:
        k += 1 if N * theta >= k else -1
    return max(k, parity)


def _setup(nu, kappa, N, shifts):
    p = ModelParams(nu, kappa, N=N, T=float(N))
    return p, TimeGrid.from_shifts(float(N), shifts)


def _one(mode, nu, kappa, N, theta, x, y, shifts, c):
    """Finite value and limit of one mode at one N."""
    if mode == "ptilde":
        p, g = _setup(nu, kappa, N, shifts)
        fin = float(ptilde(p, g.t(2) - g.t(1), x, y))
        lim = (y / x) ** (p.b_frak / 2) * kernel_G(nu, shifts[0], x, shifts[1], y)
        return fin, lim
    if mode == "I2lc":
        p, g = _setup(nu, kappa, N, shifts)
        k = _nearest_index(N, theta, 0)
        th = k / N
        chi = g.chi(1)
        L = laguerre_all(k, nu, x / N) * chi ** np.arange(k + 1)
        fin = float(np.dot(gen_binomial_array(k, c), L[::-1]))
        lim = (N * th) ** (c + nu + 1) * (th * x) ** (-nu) * jtilde_diff(nu, -c - 1, th, 1.0, x, -shifts[0])
        return fin, lim

    p, g = _setup(nu, kappa, N, shifts)
    a, b = p.a_frak, p.b_frak
    s = shifts[0]
    parity = 0 if mode.endswith("even") else 1
    k = _nearest_index(N, theta, parity)
    th = k / N
    if mode.startswith("R"):
        if k > N - 1:
            raise ValueError("R modes need θ < 1")
        fk = FiniteKernel(p, g)
        rt = fk.R(1, x)[k]
        fin = 2 ** nu * p.T ** nu * math.gamma(nu + 1) * math.exp(math.lgamma(k + 1) - math.lgamma(k + 1 + 2 * a)) * rt
        A = jtilde_diff(nu, -b - 1, th, 1.0, x, -s)
        if parity == 0:
            lim = th ** (1 - nu) * x ** (-kappa / 2) / 2 * A
        else:
            B = jtilde_diff(nu, -b, th, 1.0, x, -s)
            lim = th ** (-nu) * x ** (-kappa / 2) / N * (a * A - B)
        return fin, lim
    # Φ modes
    fk = FiniteKernel(p, g)
    pt = fk.Phi(1, x, kmax=k)[k]
    fin = 2 ** nu * p.T ** (-b) * math.gamma(nu + 1) * pt
    if parity == 0:
        lim = -th ** nu * x ** (kappa / 2) * jhat_diff_xi_integral(nu, b + 1, th, x, s, a)
    else:
        lim = -2 * th ** (nu - 1) * x ** (kappa / 2) / N * jhat_diff(nu, b + 1, th, 1.0, x, s)
    return fin, lim


def asymptotic_validate(nu: float, kappa: float, Ns=(50, 100, 200), mode: str = "R_even",
                        theta: float | None = None, x: float = 1.0, y: float = 2.0,
                        shifts=(-2.0, -1.0), c: float = -2.0, tol: float = 0.05) -> ConvergenceReport:
    """Relative error of a finite-N quantity against its N → ∞ limit.

    ``theta`` defaults to 0.5 for the R and I2lc modes and to 1.5 for the Φ
    modes (the range probed by D and Ĩ respectively).  ``c`` is the order used
    by mode I2lc; ``y`` and the second shift are used by mode ptilde only.

    Mode ptilde is exact at every N: p̃ does not involve T and its closed form
    coincides with (y/x)^{𝔟/2}𝒢, so the errors sit at round-off.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    Ns = [int(n) for n in Ns]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N-list must be increasing")
    if theta is None:
        theta = 1.5 if mode.startswith("Phi") else 0.5
    fins, lims, errs = [], [], []
    for N in Ns:
        f, l = _one(mode, nu, kappa, N, theta, x, y, tuple(shifts), c)
        fins.append(float(f))
        lims.append(float(l))
        errs.append(_rel(f, l))
    return ConvergenceReport(mode, Ns, fins, lims, errs, tol,
                             extra=dict(nu=nu, kappa=kappa, theta=theta, x=x))


def kernel_convergence(nu: float, kappa: float, Ns=(50, 100, 200), shifts=(-1.0, -0.5),
                       points=(0.5, 1.0, 2.0), tol: float = 0.05) -> list[ConvergenceReport]:
    """D_N, S̃_N (both orders) and Ĩ_N against 𝒟, 𝒮̃, ℐ̃ on points² × times².

    One report per (element, m, x, n, y) with m ≤ n; same-point diagonal entries
    of D and Ĩ vanish identically and are skipped.
    """
    params = ModelParams(nu, kappa)
    inf = InfiniteKernel(params, tuple(shifts))
    M = len(shifts)
    keys = [(m, x, n, y) for m in range(1, M + 1) for n in range(m, M + 1)
            for x in points for y in points]
    limits = {k: inf.block(*k) for k in keys}
    finite = {}
    for N in Ns:
        p, g = _setup(nu, kappa, N, shifts)
        fk = FiniteKernel(p, g)
        for k in keys:
            finite[N, k] = fk.block(*k)
    reports = []
    for k in keys:
        m, x, n, y = k
        for name in ("d", "s_fwd", "s_bwd", "i"):
            if name in ("d", "i") and m == n and x == y:
                continue
            lim = getattr(limits[k], name)
            fins = [getattr(finite[N, k], name) for N in Ns]
            reports.append(ConvergenceReport(
                f"{name}({m},{x};{n},{y})", list(Ns), [float(v) for v in fins],
                [float(lim)] * len(Ns), [_rel(v, lim) for v in fins], tol))
    return reports


def homogeneous_limit_check(nu: float, kappa: float, shifts=(-5.0, -10.0, -20.0), gap: float = 1.0,
                            x: float = 0.5, y: float = 2.0, points=(0.5, 1.0, 2.0)):
    """Behaviour of the infinite kernels as all times move to −∞ with a fixed gap.

    Returns a dict with
      ``DI``      𝒟·ℐ̃ at (s, x; s+gap, y) along ``shifts``,
      ``S_gap``   max over points² of |𝒮(s,x;s+gap,y) − (y/x)^{𝔟/2}∫₀¹JJe^{2(s−t)θ}| per shift,
      ``S_all``   the same maximum of |𝒮̃ − (y/x)^{𝔟/2}𝕊̃| over the orders s<t, s>t, s=t.
    The gauge (y/x)^{𝔟/2} is a diagonal conjugation and drops out of determinants.
    """
    p = ModelParams(nu, kappa)
    b = p.b_frak
    DI, S_gap, S_all = [], [], []
    for sh in shifts:
        s, t = sh, sh + gap
        DI.append(kernel_D(p, s, x, t, y) * kernel_I_tilde(p, s, x, t, y))
        wg = wa = 0.0
        for xx in points:
            for yy in points:
                g = (yy / xx) ** (b / 2)
                d = abs(kernel_S(p, s, xx, t, yy) - g * bessel_head_integral(nu, s - t, xx, yy))
                wg = max(wg, d)
                wa = max(wa, d)
                for a_, c_ in ((t, s), (s, s)):
                    wa = max(wa, abs(kernel_S_tilde(p, a_, xx, c_, yy) - g * homogeneous_kernel(nu, a_, xx, c_, yy)))
        S_gap.append(wg)
        S_all.append(wa)
    absDI = [abs(v) for v in DI]
    return dict(shifts=list(shifts), DI=DI, S_gap=S_gap, S_all=S_all,
                DI_decreasing=all(b_ < a_ for a_, b_ in zip(absDI, absDI[1:])))


def equal_time_check(nu: float, points=(0.5, 1.0, 2.0, 5.0)) -> float:
    """Max |closed form − ∫₀¹ JJ dθ| for the equal-time 𝕊̃ over distinct pairs."""
    worst = 0.0
    for x in points:
        for y in points:
            if x != y:
                a = homogeneous_kernel(nu, 0.0, x, 0.0, y)
                b = homogeneous_kernel(nu, 0.0, x, 0.0, y, method="integral")
                worst = max(worst, abs(a - b))
    return worst
