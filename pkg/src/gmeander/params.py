"""Parameter containers shared by the density, basis and kernel modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["AdmissibilityError", "ModelParams", "TimeGrid"]


class AdmissibilityError(ValueError):
    """Raised for parameters outside the admissible range."""


@dataclass(frozen=True)
class ModelParams:
    """Exponents (ν, κ) of the generalized meander, particle number and horizon.

    ``a_frak`` and ``b_frak`` are the derived exponents 𝔞 = ν − κ/2 and
    𝔟 = ν − κ.  The admissible range is ν > −1, 0 ≤ κ < 2(ν+1).
    """

    nu: float
    kappa: float
    N: int = 2
    T: float = 1.0
    require_even: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        for name in ("nu", "kappa", "T"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise AdmissibilityError(f"{name} must be finite, got {v!r}")
        if not self.nu > -1:
            raise AdmissibilityError(f"nu must exceed -1, got {self.nu}")
        if not 0 <= self.kappa < 2 * (self.nu + 1):
            raise AdmissibilityError(
                f"kappa must lie in [0, 2(nu+1)) = [0, {2 * (self.nu + 1):g}), got {self.kappa}"
            )
        if self.N < 1:
            raise AdmissibilityError("N must be positive")
        if self.require_even and self.N % 2:
            raise AdmissibilityError(f"N must be even, got {self.N}")
        if not self.T > 0:
            raise AdmissibilityError("T must be positive")

    @property
    def a_frak(self) -> float:
        return self.nu - self.kappa / 2

    @property
    def b_frak(self) -> float:
        return self.nu - self.kappa

    def with_(self, **kw) -> "ModelParams":
        d = dict(nu=self.nu, kappa=self.kappa, N=self.N, T=self.T, require_even=self.require_even)
        d.update(kw)
        return ModelParams(**d)


@dataclass(frozen=True)
class TimeGrid:
    """Observation times t_1 < ... < t_M < t_{M+1} = T.

    ``times`` may be given with or without the final time T; it is appended
    when missing.  Indices used by the kernels are 1-based, as m = 1..M+1.
    """

    T: float
    times: tuple

    def __init__(self, T: float, times):
        ts = [float(t) for t in times]
        if not ts or abs(ts[-1] - T) > 1e-14 * max(1.0, T):
            ts.append(float(T))
        ts[-1] = float(T)
        if ts[0] <= 0:
            raise AdmissibilityError("observation times must be positive")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise AdmissibilityError(f"observation times must be strictly increasing: {ts}")
        object.__setattr__(self, "T", float(T))
        object.__setattr__(self, "times", tuple(ts))

    @classmethod
    def from_shifts(cls, T: float, shifts) -> "TimeGrid":
        """Build from shifted times s_m = t_m − T ≤ 0."""
        return cls(T, [T + s for s in shifts])

    @property
    def M(self) -> int:
        return len(self.times) - 1

    def t(self, m: int) -> float:
        return self.times[m - 1]

    def s(self, m: int) -> float:
        return self.times[m - 1] - self.T

    def c(self, m: int) -> float:
        t = self.t(m)
        return t * (2 * self.T - t) / self.T

    def chi(self, m: int) -> float:
        t = self.t(m)
        return (2 * self.T - t) / t

    @property
    def shifts(self) -> np.ndarray:
        return np.array(self.times) - self.T
