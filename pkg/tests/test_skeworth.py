import numpy as np
import pytest

from gmeander import ModelParams, TimeGrid
from gmeander import skeworth as sk

# 4Γ(2q+2𝔞+2)/(2q+1)! in mpmath
RSTAR = {-0.4: [3.6726749695990426, 1.615976986623579, 1.0859365350110453, 0.8335855687799071],
         0.0: [4.0, 4.0, 4.0, 4.0],
         1.3: [53.52514348372977, 229.80128269014645, 576.3416169868873, 1132.9229499627954]}


@pytest.mark.parametrize("a", sorted(RSTAR))
def test_rstar_frozen(a):
    assert np.allclose(sk.rstar(np.arange(4), a), RSTAR[a], rtol=1e-13)


@pytest.mark.parametrize("nu,kappa", [(0.0, 0.0), (1.0, 1.0), (0.5, 1.0), (-0.5, 0.0)])
def test_alpha_beta_inverse(nu, kappa):
    b = sk.SkewBasis.build(ModelParams(nu, kappa), K=40)
    assert b.inverse_residual() <= 1e-9
    assert np.allclose(np.triu(b.alpha, 1), 0) and np.allclose(np.triu(b.beta, 1), 0)


def test_beta_closed_form_matches_inversion():
    b = sk.SkewBasis.build(ModelParams(0.7, 0.4), K=16)
    assert np.allclose(b.beta, sk.beta_by_inversion(b.alpha), rtol=1e-10, atol=1e-12)


def test_basis_tables_are_read_only_and_capped():
    b = sk.SkewBasis.build(ModelParams(0.5, 1.0, N=4))
    assert b.K == 8 and b.nu == pytest.approx(0.5)
    with pytest.raises(ValueError):
        b.alpha[0, 0] = 2.0
    with pytest.raises(ValueError):
        sk.SkewBasis.build(ModelParams(0.5, 1.0), K=401)


@pytest.mark.parametrize("a", [-0.4, 0.5])
def test_skew_orthogonality(a):
    F = [sk.poly_coeffs_mp("F", 2 * q, a) for q in range(5)]
    G = [sk.poly_coeffs_mp("G", 2 * l + 1, a) for l in range(5)]
    M = np.array([[sk.skew_inner_elementary(F[q], G[l], a) for l in range(5)] for q in range(5)])
    rs = sk.rstar(np.arange(5), a)
    assert np.max(np.abs(M - np.diag(rs))) <= 1e-8 * rs.max()
    # even-even pairings vanish
    assert abs(sk.skew_inner_elementary(F[1], F[3], a)) <= 1e-8 * rs.max()


def test_skew_product_exact_vs_quadrature():
    a = 0.3
    f = sk.poly_coeffs_mp("F", 2, a)
    g = sk.poly_coeffs_mp("G", 3, a)
    fx = lambda x: sk.poly_eval("F", 2, x, a_frak=a)
    gx = lambda x: sk.poly_eval("G", 3, x, a_frak=a)
    assert sk.skew_inner_elementary(fx, gx, a, method="quadrature") == pytest.approx(
        sk.skew_inner_elementary(f, g, a), rel=1e-10)


def test_poly_eval_matches_mp_coefficients():
    x = np.array([0.2, 1.5, 6.0])
    for kind, j in (("F", 4), ("G", 5), ("W", 3)):
        c = np.array([float(v) for v in sk.poly_coeffs_mp(kind, j, 0.25)])
        assert np.allclose(sk.poly_eval(kind, j, x, a_frak=0.25), np.polyval(c[::-1], x), rtol=1e-10)


def test_R_is_monic():
    b = sk.SkewBasis.build(ModelParams(1.0, 0.5), K=6)
    for k in range(1, 6):
        big = 1e4
        v = sk.poly_eval("R", k, np.array([big]), basis=b, c1=0.7, chi1=0.4)[0]
        assert v / big ** k == pytest.approx(1.0, rel=1e-2)


@pytest.mark.parametrize("branch,j", [("G", 1), ("G", 4), ("F", 2), ("F", 6)])
def test_incomplete_integrals(branch, j):
    for a in (-0.4, 0.0, 1.0):
        for z in (0.5, 8.0):
            lhs, rhs = sk.lemma_b1_check(a, j, z, branch)
            assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)


def test_w_f_orthogonality():
    for k in range(1, 5):
        for j in range(k - 1):
            l, r = sk.w_f_orthogonality_check(0.5, k, j)
            assert l == pytest.approx(r, abs=1e-9)


def test_r_q_against_defining_integral():
    p = ModelParams(1.0, 1.0, N=4, T=1.0)
    g = TimeGrid(1.0, [0.5])
    basis = sk.SkewBasis.build(p, K=6)
    f = lambda x: sk.poly_eval("R", 2, x, basis=basis, c1=g.c(1), chi1=g.chi(1))
    h = lambda x: sk.poly_eval("R", 3, x, basis=basis, c1=g.c(1), chi1=g.chi(1))
    meas = sk.skew_inner_full(f, h, p, g, route="quadrature")
    assert meas == pytest.approx(float(sk.r_q(1, p, g.t(1))), rel=1e-6)
