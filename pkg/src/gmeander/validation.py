"""Identity and convergence checks run by ``gmeander validate``.

Each check returns a :class:`Check` with the measured value, the expected value
and a tolerance.  ``paper_ref`` names the statement being checked in words.
Suites are plain functions so the test-suite can call them directly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import mpmath as mp
import numpy as np
from scipy import integrate, special as sp

from .params import ModelParams, TimeGrid

__all__ = ["Check", "SUITES", "run_suites"]


@dataclass
class Check:
    name: str
    paper_ref: str
    measured: float
    expected: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = bool(d.pop("passed"))
        for k in ("measured", "expected", "tolerance"):
            d[k] = float(d[k])
        return d


def _abs(name, ref, measured, expected, tol) -> Check:
    ok = bool(np.isfinite(measured) and abs(measured - expected) <= tol)
    return Check(name, ref, float(measured), float(expected), float(tol), ok)


def _rel(name, ref, measured, expected, tol) -> Check:
    ok = bool(np.isfinite(measured) and abs(measured - expected) <= tol * abs(expected))
    return Check(name, ref, float(measured), float(expected), float(tol), ok)


def _bound(name, ref, measured, tol) -> Check:
    """measured is an error; passes when it is at most tol."""
    return _abs(name, ref, measured, 0.0, tol)


# ------------------------------------------------------------------ specfun

def suite_specfun():
    from . import specfun as sf

    out = []
    err = max(abs(sf.gen_binomial(n, a) - sp.binom(n + a, n)) / abs(sp.binom(n + a, n))
              for n in range(12) for a in (-0.4, 0.3, 2.5))
    out.append(_bound("gen_binomial vs scipy binom", "generalized binomial coefficient", err, 1e-12))
    x = np.linspace(0.1, 30, 25)
    err = max(float(np.max(np.abs(sf.laguerre_all(j, al, x)[j] - sp.eval_genlaguerre(j, al, x))
                           / (1 + np.abs(sp.eval_genlaguerre(j, al, x)))))
              for j in (0, 3, 10, 25) for al in (-0.5, 0.0, 1.7))
    out.append(_bound("Laguerre recurrence vs scipy", "generalized Laguerre polynomials", err, 1e-10))
    # degree shift L_j^β = Σ_k C(j−k+β−α−1, j−k) L_k^α
    worst = 0.0
    for be, al in ((1.5, 0.2), (0.2, 1.5)):
        for j in (4, 9):
            Lb = sf.laguerre_all(j, be, x)[j]
            La = sf.laguerre_all(j, al, x)
            cf = sf.gen_binomial_array(j, be - al - 1)[::-1]
            worst = max(worst, float(np.max(np.abs(cf @ La - Lb) / (1 + np.abs(Lb)))))
    out.append(_bound("Laguerre degree-shift identity", "Laguerre degree-shift expansion", worst, 1e-9))
    z = np.array([0.3, 4.0, 25.0, 80.0])
    err = max(float(np.max(np.abs(sf.bessel_j(nu, z) - np.array([float(mp.besselj(nu, zz)) for zz in z]))))
              for nu in (0.0, 0.5, 2.3))
    out.append(_bound("Bessel J vs mpmath", "Bessel function of the first kind", err, 1e-12))
    err = max(abs(float(sf.incomplete_gamma_lower(c, y)) - sp.gammainc(c, y) * sp.gamma(c)) / (sp.gammainc(c, y) * sp.gamma(c))
              for c in (0.4, 1.0, 3.2) for y in (0.2, 2.0, 15.0))
    out.append(_bound("lower incomplete gamma", "lower incomplete gamma function", err, 1e-12))
    return out


# ---------------------------------------------------------------- differint

def suite_differint():
    from .differint import jhat_diff, jhat_diff_xi_integral, jtilde_diff
    from .kernels.infinite import jtilde_m1_single_integral, half_order_forms

    out = []
    worst = 0.0
    for nu in (0, 1, 2):
        for th, x, s in ((0.3, 1.0, -1.0), (1.0, 2.0, -0.5), (0.7, 4.0, 1.0)):
            a, b = jtilde_diff(nu, -1, th, 1.0, x, s), jtilde_m1_single_integral(nu, th, x, s)
            worst = max(worst, abs(a - b) / abs(b))
    out.append(_bound("J~^(-1) single-integral reduction", "Laguerre ensemble with beta=1 initial condition reduction",
                      worst, 1e-8))
    worst = 0.0
    for th, x, s in ((0.3, 1.0, -1.0), (1.0, 2.0, -0.5), (0.7, 4.0, -2.0)):
        ref = half_order_forms(th, x, s)
        got = (jtilde_diff(0.5, -0.5, th, 1.0, x, -s), jtilde_diff(0.5, 0.5, th, 1.0, x, -s),
               jhat_diff(0.5, 0.5, th, 1.0, x, s), jhat_diff_xi_integral(0.5, 0.5, th, x, s, 0.0))
        worst = max(worst, max(abs(g - r) / abs(r) for g, r in zip(got, ref)))
    out.append(_bound("half-order differintegrals at (nu,kappa)=(1/2,1)", "vicious walkers with a wall reduction",
                      worst, 1e-8))
    # integer ν: closed series and quadrature routes agree
    worst = 0.0
    for c in (-1.5, -0.5, 0.5, 1.5):
        a = jtilde_diff(1, c, 0.8, 1.0, 1.5, 0.7, method="series")
        b = jtilde_diff(1, c, 0.8, 1.0, 1.5, 0.7, method="quadrature")
        worst = max(worst, abs(a - b) / abs(b))
    out.append(_bound("left differintegral: series vs Beta quadrature", "left Riemann-Liouville differintegral of the Bessel family",
                      worst, 1e-10))
    worst = 0.0
    for c in (-0.5, 0.5, 1.5):
        a = jhat_diff(0.5, c, 0.6, 1.2, 2.0, -1.0)
        b = jhat_diff(0.5, c, 0.6, 1.2, 2.0, -1.0, method="quad")
        worst = max(worst, abs(a - b) / abs(b))
    out.append(_bound("right differintegral: Laguerre rule vs adaptive quadrature",
                      "right Riemann-Liouville differintegral of the Bessel family", worst, 1e-10))
    return out


# ------------------------------------------------------------------ meander

def suite_meander():
    from .meander import meander_density, multitime_density, ptilde

    out = []
    worst = 0.0
    for nu, ka in ((0.5, 0.0), (0.5, 1.0), (1.0, 1.5)):
        p = ModelParams(nu, ka, N=1, T=1.0, require_even=False)
        for s, x in ((0.0, 0.0), (0.3, 0.8)):
            v = integrate.quad(lambda y: float(meander_density(p, s, x, 0.7, y)), 0, 40, limit=400)[0]
            worst = max(worst, abs(v - 1))
    out.append(_bound("meander transition density normalization", "generalized meander transition density",
                      worst, 1e-8))
    p = ModelParams(0.7, 0.9)
    lhs = integrate.quad(lambda y: float(ptilde(p, 0.3, 1.1, y) * ptilde(p, 0.5, y, 2.0)), 0, 80, limit=400)[0]
    rhs = float(ptilde(p, 0.8, 1.1, 2.0))
    out.append(_rel("Chapman-Kolmogorov for the weighted kernel", "Chapman-Kolmogorov equation", lhs, rhs, 1e-8))
    # N=2 one-time density integrates to 1 over the ordered cone
    p = ModelParams(0.5, 1.0, N=2, T=1.0)
    g = TimeGrid(1.0, [])
    f = lambda y2, y1: float(multitime_density(p, g, [[y1, y2]]))
    v = integrate.dblquad(f, 0, 60, lambda y: y, lambda y: 60, epsabs=1e-12)[0]
    out.append(_rel("N=2 density normalization", "non-colliding generalized meanders", v, 1.0, 1e-6))
    return out


# ---------------------------------------------------------------- skeworth

def _rel_or_abs(lhs, rhs):
    # a right side that vanishes exactly (e.g. W_2(2) at 𝔞 = 0) is compared absolutely
    return abs(lhs - rhs) / abs(rhs) if abs(rhs) > 1e-12 else abs(lhs - rhs)


def suite_skeworth():
    from .skeworth import (SkewBasis, lemma_b1_check, w_f_orthogonality_check, poly_coeffs_mp, poly_eval,
                           r_q, rstar, skew_inner_elementary, skew_inner_full)

    out = []
    for a in (-0.4, 0.0, 0.5, 1.3):
        F = [poly_coeffs_mp("F", 2 * q, a) for q in range(9)]
        G = [poly_coeffs_mp("G", 2 * l + 1, a) for l in range(9)]
        M = np.array([[skew_inner_elementary(F[q], G[l], a) for l in range(9)] for q in range(9)])
        rs = rstar(np.arange(9), a)
        err = float(np.max(np.abs(M - np.diag(rs))) / rs.max())
        out.append(_bound(f"skew-orthogonality a={a}", "skew-orthogonality of F_2q and G_2l+1", err, 1e-8))
    for nu, ka in ((0.0, 0.0), (1.0, 1.0), (0.5, 1.0), (-0.5, 0.0)):
        res = SkewBasis.build(ModelParams(nu, ka), K=40).inverse_residual()
        out.append(_bound(f"alpha.beta = I, (nu,kappa)=({nu},{ka})", "inverse coefficient matrices", res, 1e-9))
    worst = 0.0
    for a in (-0.4, 0.0, 1.0):
        for z in (0.5, 2.0, 8.0):
            for j in range(1, 7):
                worst = max(worst, _rel_or_abs(*lemma_b1_check(a, j, z, "G")))
            for j in (2, 4, 6):
                worst = max(worst, _rel_or_abs(*lemma_b1_check(a, j, z, "F")))
    out.append(_bound("incomplete integrals of F and G", "incomplete integral identities for F and G", worst, 1e-8))
    worst = 0.0
    for a in (-0.4, 0.5):
        for k in range(1, 7):
            for j in range(6):
                l, r = w_f_orthogonality_check(a, k, j)
                worst = max(worst, abs(l - r))
    out.append(_bound("(W_k, F_j) orthogonality", "orthogonality of W and F", worst, 1e-9))
    # r_q normalization against the defining double integral
    p = ModelParams(1.0, 1.0, N=4, T=1.0)
    g = TimeGrid(1.0, [0.5])
    c1, chi1 = g.c(1), g.chi(1)
    basis = SkewBasis.build(p, K=6)
    for q in (0, 1):
        f = lambda x, k=2 * q: poly_eval("R", k, x, basis=basis, c1=c1, chi1=chi1)
        h = lambda x, k=2 * q + 1: poly_eval("R", k, x, basis=basis, c1=c1, chi1=chi1)
        meas = skew_inner_full(f, h, p, g, route="quadrature")
        out.append(_rel(f"r_{q} constant vs quadrature", "normalization r_q of the skew-orthogonal polynomials",
                        meas, float(r_q(q, p, g.t(1))), 1e-6))
    return out


# ----------------------------------------------------------------- kernels

def suite_kernels():
    from .kernels import FiniteKernel, equal_time_check, homogeneous_kernel, kernel_D, kernel_G, kernel_S_tilde
    from .kernels.infinite import kernel_G_quad, kernel_S, kernel_S_half_order

    out = []
    for N in (2, 4):
        p = ModelParams(0.5, 1.0, N=N, T=1.0)
        g = TimeGrid(1.0, [0.5])
        fk = FiniteKernel(p, g)
        for m in (1, 2):
            v = integrate.quad(lambda y: fk.S_tilde(m, y, m, y), 0, np.inf, limit=400, epsabs=1e-12)[0]
            out.append(_abs(f"one-point normalization N={N} m={m}", "one-point correlation integrates to N", v, N, 1e-4))
    p = ModelParams(0.5, 1.0, N=2, T=1.0)
    fk = FiniteKernel(p, TimeGrid(1.0, [0.5]))
    out.append(_bound("D(m,x;m,x) = 0", "antisymmetry of the D kernel", abs(fk.D(1, 0.7, 1, 0.7)), 1e-15))
    pi = ModelParams(1.0, 1.0)
    out.append(_bound("D_inf(s,x;s,x) = 0", "antisymmetry of the D kernel", abs(kernel_D(pi, -1.0, 0.7, -1.0, 0.7)), 1e-15))
    out.append(_abs("G symmetry", "Bessel heat kernel G", kernel_G(1.0, -2, 0.5, -1, 2.0), kernel_G(1.0, -2, 2.0, -1, 0.5), 1e-15))
    out.append(_rel("G closed form vs quadrature", "Bessel heat kernel G", kernel_G(0.5, -2, 1.0, -1, 2.0),
                    kernel_G_quad(0.5, -2, 1.0, -1, 2.0), 1e-10))
    a = kernel_S_tilde(ModelParams(0.5, 1.0), -1.0, 1.0, -1.0, 1.0)
    b = kernel_S_half_order(-1.0, 1.0, -1.0, 1.0)
    out.append(_rel("equal-argument S~ at (1/2,1) vs single-integral forms", "vicious walkers with a wall reduction",
                    a, b, 1e-6))
    out.append(_bound("equal-time extended Bessel kernel: closed form vs integral",
                      "temporally homogeneous extended Bessel kernel", equal_time_check(0.0), 1e-8))
    # ν=0 diagonal: J₀² + J₁²
    u = 2 * math.sqrt(1.3)
    out.append(_rel("equal-time diagonal at nu=0", "temporally homogeneous extended Bessel kernel",
                    homogeneous_kernel(0.0, -1.0, 1.3, -1.0, 1.3), sp.j0(u) ** 2 + sp.j1(u) ** 2, 1e-12))
    lo = min(fk.S_tilde(1, y, 1, y) for y in np.linspace(0, 50, 51))
    out.append(Check("one-point density positivity", "one-point correlation function", float(lo), 0.0, 1e-10, bool(lo >= -1e-10)))
    return out


# ---------------------------------------------------------------- pfaffian

def suite_pfaffian():
    from .pfaffian import Window, block_j2, fredholm_det, fredholm_pfaffian, pfaffian
    from .kernels import FiniteKernel

    out = []
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(200):
        n = 2 * int(rng.integers(1, 21))
        X = rng.standard_normal((n, n))
        A = X - X.T
        d = np.linalg.det(A)
        worst = max(worst, abs(pfaffian(A) ** 2 - d) / abs(d))
    out.append(_bound("Pf^2 = det on random skew matrices", "Pfaffian definition", worst, 1e-10))
    out.append(_abs("Pf(block-diag J2) = 1", "Pfaffian definition", pfaffian(block_j2(20)), 1.0, 0.0))
    p = ModelParams(0.5, 1.0, N=2, T=1.0)
    fk = FiniteKernel(p, TimeGrid(1.0, [0.5]))
    wins = [Window(1, 0.2, 1.5, -0.7), Window(2, 0.5, 2.5, 0.4)]
    pf = fredholm_pfaffian(fk, wins, 12)
    det = fredholm_det(fk, wins, 12)
    out.append(_rel("discretized Fredholm PF^2 = Det", "Fredholm Pfaffian representation", pf * pf, det, 1e-8))
    out.append(_abs("Fredholm PF at chi=0", "Fredholm Pfaffian representation",
                    fredholm_pfaffian(fk, [Window(1, 0.2, 1.5, 0.0)], 12), 1.0, 0.0))
    return out


# ------------------------------------------------------------- asymptotics

def suite_asymptotics():
    from .kernels import asymptotic_validate, homogeneous_limit_check

    out = []
    for mode in ("R_even", "R_odd", "Phi_even", "Phi_odd", "ptilde", "I2lc"):
        r = asymptotic_validate(1.0, 1.0, (50, 100, 200), mode)
        c = _bound(f"{mode} large-N limit (final relative error)", "large-N asymptotics of the finite kernels",
                   r.errors[-1], 0.05)
        c.passed = c.passed and r.decreasing
        out.append(c)
    h = homogeneous_limit_check(0.5, 1.0, shifts=(-5.0, -10.0), points=(1.0,))
    out.append(Check("|D I| decreasing in the homogeneous limit", "temporally homogeneous limit",
                     float(abs(h["DI"][-1])), 0.0, float(abs(h["DI"][0])), bool(h["DI_decreasing"])))
    return out


SUITES = {
    "specfun": suite_specfun,
    "differint": suite_differint,
    "meander": suite_meander,
    "skeworth": suite_skeworth,
    "kernels": suite_kernels,
    "pfaffian": suite_pfaffian,
    "asymptotics": suite_asymptotics,
}


def run_suites(names) -> list[dict]:
    """Run the named suites ("all" expands to every suite) and return check dicts."""
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    out = []
    for n in names:
        for c in SUITES[n]():
            d = c.as_dict()
            d["suite"] = n
            out.append(d)
    return out
