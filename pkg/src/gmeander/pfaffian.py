"""Pfaffians, discretized Fredholm Pfaffians and correlation functions.

A correlation function of the Pfaffian point process is the Pfaffian of the
2×2-block matrix [A^{m_i, m_j}(y_i, y_j)] with blocks

    A^{m,n}(x, y) = [[ D^{m,n}(x, y),    S̃^{n,m}(y, x) ],
                     [ −S̃^{m,n}(x, y),  −Ĩ^{m,n}(x, y) ]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams, TimeGrid

__all__ = [
    "pfaffian",
    "pfaffian_parlett_reid",
    "pfaffian_householder",
    "slog_pfaffian",
    "block_j2",
    "CorrelationRequest",
    "CorrelationResult",
    "assemble_matrix",
    "correlation",
    "fredholm_pfaffian",
    "fredholm_det",
]


def _as_skew(A) -> np.ndarray:
    A = np.array(A)
    A = A.astype(complex if np.iscomplexobj(A) else float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("Pfaffian needs a square matrix")
    if A.shape[0] % 2:
        raise ValueError("Pfaffian of an odd-order matrix is undefined here (it vanishes)")
    # keep the upper triangle, mirror it
    U = np.triu(A, 1)
    return U - U.T


def slog_pfaffian(A):
    """(sign, log|Pf A|) by Parlett–Reid elimination with largest-pivot search.

    For complex input the sign is a unit-modulus phase.
    """
    A = _as_skew(A)
    n = A.shape[0]
    cplx = np.iscomplexobj(A)
    sign = 1.0 + 0j if cplx else 1.0
    logabs = 0.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            sign = -sign
        piv = A[k, k + 1]
        if piv == 0.0:
            return 0.0, -math.inf
        sign *= piv / abs(piv) if cplx else math.copysign(1.0, piv)
        logabs += math.log(abs(piv))
        if k + 2 < n:
            tau = A[k, k + 2:] / piv
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return sign, logabs


def pfaffian_parlett_reid(A):
    s, l = slog_pfaffian(A)
    return s * math.exp(l) if s != 0 else 0.0


def _householder(x):
    sigma = float(np.dot(x[1:], x[1:]))
    if sigma == 0.0:
        return np.zeros_like(x), 0.0, x[0]
    norm = math.sqrt(x[0] ** 2 + sigma)
    v = x.copy()
    if x[0] <= 0:
        v[0] -= norm
        alpha = norm
    else:
        v[0] += norm
        alpha = -norm
    v /= np.linalg.norm(v)
    return v, 2.0, alpha


def pfaffian_householder(A) -> float:
    """Pf(A) by Householder tridiagonalization (independent cross-check)."""
    A = _as_skew(A)
    n = A.shape[0]
    if n == 0:
        return 1.0
    val = 1.0
    for i in range(n - 2):
        v, tau, alpha = _householder(A[i + 1:, i].copy())
        A[i + 1, i] = alpha
        A[i, i + 1] = -alpha
        A[i + 2:, i] = 0.0
        A[i, i + 2:] = 0.0
        w = tau * (A[i + 1:, i + 1:] @ v)
        A[i + 1:, i + 1:] += np.outer(v, w) - np.outer(w, v)
        if tau != 0:
            val *= 1 - tau
        if i % 2 == 0:
            val *= -alpha
    return val * A[n - 2, n - 1]


def pfaffian(A, method: str = "parlett_reid") -> float:
    """Pf(A) of a skew-symmetric matrix of even order (real or complex).

    Orders above 60 are accumulated in log-magnitude form internally; the
    result is returned as a float (it may over/underflow, use slog_pfaffian).
    """
    if method == "householder":
        return pfaffian_householder(A)
    if method != "parlett_reid":
        raise ValueError(method)
    return pfaffian_parlett_reid(A)


def block_j2(n: int) -> np.ndarray:
    """block-diag(J₂, …, J₂) with J₂ = [[0, 1], [−1, 0]], n blocks."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


# ------------------------------------------------------------- correlations

@dataclass(frozen=True)
class CorrelationRequest:
    """Point sets at observation times.

    mode "finite": ``times`` is a TimeGrid and ``points[m−1]`` holds the
    points at t_m, m = 1..M+1.  mode "infinite" / "homogeneous": ``times``
    holds strictly increasing shifted times s_1 < … < s_M ≤ 0 and
    ``points[m−1]`` the points at s_m.  Empty point sets are allowed.
    """

    mode: str
    params: ModelParams
    times: object
    points: tuple

    def __post_init__(self):
        if self.mode not in ("finite", "infinite", "homogeneous"):
            raise ValueError(f"unknown mode {self.mode!r}")
        pts = tuple(tuple(float(y) for y in np.atleast_1d(ps)) for ps in self.points)
        if any(y < 0 for ps in pts for y in ps):
            raise ValueError("points must be nonnegative")
        if not any(pts):
            raise ValueError("at least one point is required")
        ntimes = self.times.M + 1 if self.mode == "finite" else len(self.times)
        if len(pts) != ntimes:
            raise ValueError(f"expected {ntimes} point sets, got {len(pts)}")
        if self.mode == "finite" and sum(map(len, pts)) > 0 and max(map(len, pts)) > self.params.N:
            raise ValueError("a time slice cannot hold more than N points")
        object.__setattr__(self, "points", pts)

    def labeled(self):
        """[(m, y)] in slice order with 1-based time index m."""
        return [(m + 1, y) for m, ps in enumerate(self.points) for y in ps]


@dataclass(frozen=True)
class CorrelationResult:
    value: float
    matrix: np.ndarray
    condition_estimate: float

    def as_dict(self) -> dict:
        return {
            "value": float(self.value),
            "blocks": self.matrix.tolist(),
            "condition_estimate": float(self.condition_estimate),
        }


def kernel_provider(req: CorrelationRequest):
    """Object with ``block(m, x, n, y)`` (or ``entry`` in homogeneous mode)."""
    from .kernels import FiniteKernel

    if req.mode == "finite":
        return FiniteKernel(req.params, req.times)
    from .kernels.infinite import HomogeneousKernel, InfiniteKernel

    if req.mode == "infinite":
        return InfiniteKernel(req.params, tuple(req.times))
    return HomogeneousKernel(req.params.nu, tuple(req.times))


def assemble_matrix(provider, labeled) -> np.ndarray:
    """2n×2n skew matrix of 2×2 blocks; lower blocks mirror the upper ones."""
    n = len(labeled)
    A = np.zeros((2 * n, 2 * n))
    for i, (m, x) in enumerate(labeled):
        for j in range(i, n):
            k, y = labeled[j]
            b = provider.block(m, x, k, y)
            blk = b.matrix()
            if i == j:
                blk = np.array([[0.0, blk[0, 1]], [-blk[0, 1], 0.0]])
            A[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk
            if i != j:
                A[2 * j:2 * j + 2, 2 * i:2 * i + 2] = -blk.T
    return A


def correlation(req: CorrelationRequest, provider=None) -> CorrelationResult:
    """Multitime correlation function: Pf of the block matrix (det in homogeneous mode)."""
    provider = kernel_provider(req) if provider is None else provider
    lab = req.labeled()
    if req.mode == "homogeneous":
        A = np.array([[provider.entry(m, x, k, y) for (k, y) in lab] for (m, x) in lab])
        val = float(np.linalg.det(A))
    else:
        A = assemble_matrix(provider, lab)
        val = float(pfaffian(A))
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(A)) if np.all(np.isfinite(A)) else math.inf
    return CorrelationResult(val, A, cond)


# ---------------------------------------------------------- Fredholm objects

@dataclass(frozen=True)
class Window:
    """Test function χ on [a, b] at time index m (χ may be a constant or callable)."""

    m: int
    a: float
    b: float
    chi: object = -1.0

    def values(self, x):
        return np.broadcast_to(np.asarray(self.chi(x) if callable(self.chi) else self.chi, dtype=float), x.shape)


def _nystrom(provider, windows, n_nodes):
    lab, wchi = [], []
    for w in windows:
        t, q = np.polynomial.legendre.leggauss(n_nodes)
        x = (w.b - w.a) / 2 * t + (w.a + w.b) / 2
        q = q * (w.b - w.a) / 2
        wchi.extend(q * w.values(x))
        lab.extend((w.m, float(xi)) for xi in x)
    return lab, np.asarray(wchi)


def fredholm_pfaffian(provider, windows, n_nodes: int = 24, refine_tol: float | None = None):
    """PF(J δ + √χ A √χ) discretized on Gauss–Legendre nodes in each window.

    The quadrature weight is split symmetrically, λ_i = √(w_i χ(x_i)) (complex
    for negative χ), so the discretized operator stays skew-symmetric.  With
    ``refine_tol`` the computation is repeated with 1.5× the nodes and a
    ConvergenceError is raised when the two values differ by more than it.
    """
    from .differint import ConvergenceError

    windows = list(windows)
    lab, wchi = _nystrom(provider, windows, n_nodes)
    n = len(lab)
    if n == 0 or not np.any(wchi):
        return 1.0
    A = assemble_matrix(provider, lab)
    lam = np.repeat(np.sqrt(wchi.astype(complex)), 2)
    B = block_j2(n) + lam[:, None] * A * lam[None, :]
    val = complex(pfaffian(B))
    if abs(val.imag) > 1e-10 * max(abs(val.real), 1e-300):
        raise ArithmeticError(f"Fredholm Pfaffian has a sizeable imaginary part {val.imag:.3g}")
    out = val.real
    if refine_tol is not None:
        finer = fredholm_pfaffian(provider, windows, int(1.5 * n_nodes) + 1)
        if abs(finer - out) > refine_tol:
            raise ConvergenceError(f"grid too coarse: refinement changed PF by {abs(finer - out):.3g}")
        out = finer
    return out


def fredholm_det(provider, windows, n_nodes: int = 24) -> float:
    """Det(I + K χ) with K^{m,n} = [[S̃^{m,n}(x,y), Ĩ^{m,n}(x,y)], [D^{m,n}(x,y), S̃^{n,m}(y,x)]].

    K = J₂⁻¹ A blockwise, so this is the determinant whose square root is the
    Fredholm Pfaffian on the same discretization.
    """
    windows = list(windows)
    lab, wchi = _nystrom(provider, windows, n_nodes)
    n = len(lab)
    if n == 0:
        return 1.0
    A = assemble_matrix(provider, lab)
    K = -block_j2(n) @ A  # J₂⁻¹ = −J₂
    return float(np.linalg.det(np.eye(2 * n) + K * np.repeat(wchi, 2)[None, :]))
