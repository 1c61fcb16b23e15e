import math

import numpy as np
import pytest

from gmeander import differint as d
from oracles import jhat_diff_series, jtilde_diff_series

# double power series in mpmath (tests/oracles.py), frozen
JTILDE = [((0.5, -1.5, 0.7, 1.0, 1.3, 0.4), 0.4535148268077212),
          ((1.0, 0.5, 0.8, 1.0, 1.5, 0.7), 2.360644324731475),
          ((0.0, -1.0, 0.3, 1.0, 1.0, -1.0), 0.6550969020702558),
          ((2.3, 1.5, 1.2, 0.9, 0.6, -0.3), 0.06819722310809073)]
JHAT = [((0.5, 0.5, 0.6, 1.2, 2.0, -1.0), 0.12876211484866604),
        ((1.0, -0.5, 1.5, 1.0, 1.0, -0.5), 0.05533986556145878),
        ((0.0, 1.5, 0.9, 1.0, 0.5, -2.0), 0.13979361010329774)]


def test_order_bookkeeping():
    o = d.DifferintOrder(1.5)
    assert (o.n, o.beta, o.is_integer) == (2, 0.5, False)
    assert d.DifferintOrder(-0.5).n == 0
    assert d.DifferintOrder(2.0).is_integer
    with pytest.raises(ValueError):
        d.DifferintOrder(float("nan"))


@pytest.mark.parametrize("c", [-1.5, -0.5, 0.5, 1.5, 2.0])
def test_rl_left_on_powers(c):
    # ₀D^c x^p = Γ(p+1)/Γ(p+1−c) x^{p−c}
    p, x = 2.5, 1.3
    ref = math.gamma(p + 1) / math.gamma(p + 1 - c) * x ** (p - c)
    derivs = lambda k, y: math.gamma(p + 1) / math.gamma(p + 1 - k) * y ** (p - k)
    assert d.rl_left(lambda y: y ** p, c, x, derivs=derivs) == pytest.approx(ref, rel=1e-10)
    assert d.rl_left(lambda y: y ** p, c, x) == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("c", [-1.5, -0.5, 0.5, 1.5])
def test_rl_right_on_exponential(c):
    # ₓD_∞^c e^{−λy} = λ^c e^{−λx}
    lam, x = 2.0, 0.4
    f = lambda y: math.exp(-lam * y)
    derivs = lambda k, y: (-lam) ** k * math.exp(-lam * y)
    ref = lam ** c * math.exp(-lam * x)
    assert d.rl_right(f, c, x, derivs=derivs, scale=1 / lam) == pytest.approx(ref, rel=1e-10)


def test_rl_right_rejects_slow_decay():
    with pytest.raises(d.ConvergenceError):
        d.rl_right(lambda y: 1.0 / (1.0 + y), -0.5, 0.0)


@pytest.mark.parametrize("args,ref", JTILDE)
def test_jtilde_diff_frozen(args, ref):
    assert d.jtilde_diff(*args) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("args,ref", JHAT)
def test_jhat_diff_frozen(args, ref):
    assert d.jhat_diff(*args) == pytest.approx(ref, rel=1e-10)


def test_jtilde_diff_live_oracle():
    args = (1.7, 0.75, 0.9, 1.1, 2.2, -0.6)
    assert d.jtilde_diff(*args) == pytest.approx(float(jtilde_diff_series(*args)), rel=1e-10)


def test_jhat_diff_live_oracle():
    args = (0.3, 1.25, 1.1, 0.8, 1.4, -0.8)
    assert d.jhat_diff(*args) == pytest.approx(float(jhat_diff_series(*args)), rel=1e-9)


def test_integer_orders_are_derivatives():
    nu, th, eta, x, s = 0.5, 0.7, 1.1, 1.3, -0.4
    for n in (1, 2):
        assert d.jtilde_diff(nu, n, th, eta, x, s) == pytest.approx(d.jtilde_deriv(nu, n, th, eta, x, s), rel=1e-10)
        assert d.jhat_diff(nu, n, th, eta, x, s) == pytest.approx((-1) ** n * d.jhat_deriv(nu, n, th, eta, x, s), rel=1e-10)
    assert d.jtilde_diff(nu, 0, th, eta, x, s) == pytest.approx(d.jtilde(nu, th, eta, x, s), rel=1e-14)


def test_left_semigroup_for_integrals():
    # two half-integrals make one full integral
    nu, th, x, s = 1.0, 0.6, 1.2, 0.5
    f = lambda e: d.jtilde_diff(nu, -0.5, th, e, x, s)
    once = d.rl_left(f, -0.5, 1.0)
    assert once == pytest.approx(d.jtilde_diff(nu, -1.0, th, 1.0, x, s), rel=1e-8)


def test_entire_bessel_matches_bessel_j():
    from scipy import special as sp

    w = np.array([0.3, 2.0, 9.0])
    mu = 1.5
    # Σ (−w)^k / (k! Γ(μ+k+1)) = w^{−μ/2} J_μ(2√w)
    assert np.allclose(d.entire_bessel(mu, w), w ** (-mu / 2) * sp.jv(mu, 2 * np.sqrt(w)), rtol=1e-12)
