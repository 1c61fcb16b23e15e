"""Multitime correlations of two non-colliding meanders as Pfaffians."""

import sys
from pathlib import Path

import numpy as np

from gmeander import CorrelationRequest, FiniteKernel, ModelParams, TimeGrid, Window, correlation
from gmeander import fredholm_det, fredholm_pfaffian

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from oracles import brute_corr_pair_and_final  # noqa: E402

p = ModelParams(0.5, 1.0, N=2, T=1.0)
grid = TimeGrid(1.0, [0.5])  # observe at t = 0.5 and at the horizon
fk = FiniteKernel(p, grid)

# Two points at t = 0.5 and one at T.  The Pfaffian of the 6×6 block matrix
# equals the density of the system integrated over the unobserved particle.
req = CorrelationRequest("finite", p, grid, [[0.3, 1.2], [0.8]])
res = correlation(req, fk)
print("Pfaffian correlation :", res.value)
print("direct integration   :", brute_corr_pair_and_final(p, grid, 0.3, 1.2, 0.8))
print("condition estimate   :", res.condition_estimate)

# One-point functions are the diagonal of S~
ys = np.linspace(0.05, 4, 6)
print("rho_1 at t = 0.5:", np.round([fk.S_tilde(1, y, 1, y) for y in ys], 6))

# Gap probabilities from the Fredholm Pfaffian: P(no particle in [0, b] at t = 0.5)
for b in (0.5, 1.0, 2.0, 4.0):
    w = [Window(1, 0.0, b, -1.0)]
    pf = fredholm_pfaffian(fk, w, 30)
    print(f"P(no particle in [0,{b}]) = {pf:.8f}   sqrt(det) = {np.sqrt(fredholm_det(fk, w, 30)):.8f}")
