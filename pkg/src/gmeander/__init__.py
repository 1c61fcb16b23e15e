"""Generalized Bessel meanders: densities, skew-orthogonal bases and Pfaffian kernels."""

from .differint import ConvergenceError, jhat_diff, jtilde_diff
from .kernels import (FiniteKernel, HomogeneousKernel, InfiniteKernel, KernelBlock, asymptotic_validate,
                      finite_kernel, homogeneous_kernel, infinite_kernel)
from .meander import meander_density, multitime_density, simulate_paths
from .params import AdmissibilityError, ModelParams, TimeGrid
from .pfaffian import CorrelationRequest, Window, correlation, fredholm_det, fredholm_pfaffian, pfaffian
from .skeworth import SkewBasis

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "ConvergenceError",
    "CorrelationRequest",
    "FiniteKernel",
    "HomogeneousKernel",
    "InfiniteKernel",
    "KernelBlock",
    "ModelParams",
    "SkewBasis",
    "TimeGrid",
    "Window",
    "asymptotic_validate",
    "correlation",
    "finite_kernel",
    "fredholm_det",
    "fredholm_pfaffian",
    "homogeneous_kernel",
    "infinite_kernel",
    "jhat_diff",
    "jtilde_diff",
    "meander_density",
    "multitime_density",
    "pfaffian",
    "simulate_paths",
    "__version__",
]
