"""Matrix-kernel elements of the Pfaffian processes (finite, infinite, homogeneous)."""

from .asymptotics import (
    ConvergenceReport,
    asymptotic_validate,
    equal_time_check,
    homogeneous_limit_check,
    kernel_convergence,
)
from .finite import FiniteKernel, KernelBlock, finite_kernel, phi_im, r_im
from .infinite import (
    HomogeneousKernel,
    InfiniteKernel,
    homogeneous_kernel,
    infinite_kernel,
    kernel_D,
    kernel_G,
    kernel_I_tilde,
    kernel_S,
    kernel_S_tilde,
)

__all__ = [
    "ConvergenceReport",
    "FiniteKernel",
    "HomogeneousKernel",
    "InfiniteKernel",
    "KernelBlock",
    "asymptotic_validate",
    "equal_time_check",
    "finite_kernel",
    "homogeneous_kernel",
    "homogeneous_limit_check",
    "infinite_kernel",
    "kernel_D",
    "kernel_G",
    "kernel_I_tilde",
    "kernel_S",
    "kernel_S_tilde",
    "kernel_convergence",
    "phi_im",
    "r_im",
]
