import io

import numpy as np
import pytest
from scipy import integrate

from gmeander import AdmissibilityError, ModelParams, TimeGrid
from gmeander import meander as mn

# (y/x)^ν (y/t) e^{−(x²+y²)/2t} I_ν(xy/t) in mpmath, and the x = 0 limit
BESSEL_DENSITY = [((0.5, 0.7, 1.0, 1.4), 0.5845575833015412),
                  ((1.0, 2.0, 0.5, 0.3), 0.0031021591434817275),
                  ((0.5, 0.7, 0.0, 1.1), 0.6945825291254544)]


def one(nu, kappa, T=1.0):
    return ModelParams(nu, kappa, N=1, T=T, require_even=False)


@pytest.mark.parametrize("args,ref", BESSEL_DENSITY)
def test_bessel_density_frozen(args, ref):
    assert float(mn.bessel_density(*args)) == pytest.approx(ref, rel=1e-13)


def test_bessel_density_large_arguments_stay_finite():
    v = mn.bessel_density(0.5, 0.01, 30.0, 30.05)
    assert np.isfinite(v) and v > 0


@pytest.mark.parametrize("method", ["quad", "kummer"])
def test_h_weight_at_horizon_is_power(method):
    p = one(0.5, 1.0)
    # h(T, x) = x^{−κ}
    assert float(mn.h_weight(p, 1.0 - 1e-4, 2.0, method=method)) == pytest.approx(0.5, rel=1e-4)


def test_h_weight_methods_agree():
    p = one(1.2, 1.7)
    for t, x in ((0.0, 0.0), (0.3, 0.9), (0.8, 2.5)):
        assert float(mn.h_weight(p, t, x, "kummer")) == pytest.approx(float(mn.h_weight(p, t, x, "quad")), rel=1e-9)


@pytest.mark.parametrize("nu,kappa", [(0.5, 0.0), (0.5, 1.0), (-0.5, 0.5)])
def test_meander_density_normalized(nu, kappa):
    p = one(nu, kappa)
    v = integrate.quad(lambda y: float(mn.meander_density(p, 0.2, 0.6, 0.9, y)), 0, 40, limit=400)[0]
    assert v == pytest.approx(1.0, abs=1e-8)


def test_squared_density_is_pushforward():
    p = one(0.5, 1.0)
    x, y = 0.8, 1.7
    lhs = float(mn.squared_meander_density(p, 0.1, x, 0.6, y))
    rhs = float(mn.meander_density(p, 0.1, np.sqrt(x), 0.6, np.sqrt(y))) / (2 * np.sqrt(y))
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_ptilde_branches_agree_with_bessel_route():
    for kappa in (0.0, 0.5, 1.0, 2.2):
        p = ModelParams(0.8, kappa)
        for x, y in ((0.3, 1.1), (2.0, 0.4)):
            assert float(mn.ptilde(p, 0.45, x, y)) == pytest.approx(float(mn.ptilde_from_bessel(p, 0.45, x, y)), rel=1e-11)


def test_chapman_kolmogorov():
    p = ModelParams(0.7, 0.9)
    lhs = integrate.quad(lambda y: float(mn.ptilde(p, 0.3, 1.1, y) * mn.ptilde(p, 0.5, y, 2.0)), 0, 80, limit=400)[0]
    assert lhs == pytest.approx(float(mn.ptilde(p, 0.8, 1.1, 2.0)), rel=1e-8)


def test_n2_density_normalized():
    p = ModelParams(0.5, 1.0, N=2, T=1.0)
    g = TimeGrid(1.0, [])
    f = lambda y2, y1: float(mn.multitime_density(p, g, [[y1, y2]]))
    v = integrate.dblquad(f, 0, 60, lambda y: y, lambda y: 60, epsabs=1e-12)[0]
    assert v == pytest.approx(1.0, abs=1e-6)


def test_multitime_density_symmetric_in_each_slice():
    p = ModelParams(1.0, 1.0, N=2, T=1.0)
    g = TimeGrid(1.0, [0.4])
    a = mn.multitime_density(p, g, [[0.3, 1.2], [0.8, 2.0]])
    b = mn.multitime_density(p, g, [[1.2, 0.3], [2.0, 0.8]])
    assert a > 0 and a == pytest.approx(b, rel=1e-13)


def test_terminal_cdf_matches_density():
    p = one(0.5, 1.0)
    s, x, y = 0.4, 0.9, 1.3
    ref = integrate.quad(lambda z: float(mn.meander_density(p, s, x, 1.0, z)), 0, y)[0]
    assert float(mn.meander_cdf_terminal(p, s, x, y)) == pytest.approx(ref, rel=1e-10)


def test_terminal_inversion():
    p = one(0.5, 1.0)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 3, 200)
    u = rng.random(200)
    y = mn._sample_terminal(p, 0.5, x, u)
    assert np.max(np.abs(mn.meander_cdf_terminal(p, 0.5, x, y) - u)) < 1e-12


def test_simulation_is_seed_deterministic():
    p = one(0.5, 1.0)
    a = mn.simulate_paths(p, "exact_1particle", 50, 4, seed=7)
    b = mn.simulate_paths(p, "exact_1particle", 50, 4, seed=7)
    c = mn.simulate_paths(p, "exact_1particle", 50, 4, seed=8)
    assert np.array_equal(a.x, b.x) and not np.array_equal(a.x, c.x)
    assert a.x.shape == (50, 4, 1) and np.all(a.x >= 0)
    # a prefix of the paths does not depend on how many paths are drawn
    d = mn.simulate_paths(p, "exact_1particle", 20, 4, seed=7)
    assert np.array_equal(a.x[:20, :-1], d.x[:, :-1])


def test_euler_keeps_order_and_needs_kappa_zero():
    p = ModelParams(0.5, 0.0, N=3, T=1.0, require_even=False)
    paths = mn.simulate_paths(p, "sde_euler", 20, 50, seed=1)
    assert np.all(np.diff(paths.x, axis=2) > 0)
    with pytest.raises(AdmissibilityError):
        mn.simulate_paths(ModelParams(0.5, 1.0, N=2), "sde_euler", 2, 10, seed=1)
    with pytest.raises(AdmissibilityError):
        mn.simulate_paths(ModelParams(0.5, 1.0, N=2), "exact_1particle", 2, 10, seed=1)


def test_paths_csv_format():
    p = one(0.5, 0.0)
    paths = mn.simulate_paths(p, "exact_1particle", 2, 3, seed=0)
    buf = io.StringIO()
    mn.write_paths_csv(paths, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "path_id,step,t,x_1"
    assert len(lines) == 1 + 2 * 3
    assert float(lines[1].split(",")[3]) == paths.x[0, 0, 0]
