"""Temporal modulation f(t) = cos(w0 t) exp(-|t|/tau) and its Fourier transform.

Transform convention: f~(w) = int f(t) exp(+i w t) dt.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MONOCHROMATIC_WEIGHT = math.pi / 2


@dataclass(frozen=True)
class DriveProfile:
    omega0: float
    tau: float
    monochromatic: bool = False

    def __post_init__(self):
        for name in ("omega0", "tau"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not self.monochromatic and self.omega0 * self.tau < 1:
            warnings.warn(
                f"omega0*tau = {self.omega0 * self.tau:g} < 1: far from the monochromatic regime",
                stacklevel=3,
            )

    @property
    def quality(self) -> float:
        """Number of oscillations per envelope time, w0 tau."""
        return self.omega0 * self.tau


def f_time(d: DriveProfile, t):
    t = np.asarray(t, dtype=float)
    out = np.cos(d.omega0 * t) * np.exp(-np.abs(t) / d.tau)
    return float(out) if out.ndim == 0 else out


def f_tilde_exact(d: DriveProfile, omega):
    """Lorentzian pair tau/(1+(w-w0)^2 tau^2) + tau/(1+(w+w0)^2 tau^2).

    Real, even and positive, so it is returned as a real float/array.
    """
    if d.monochromatic:
        raise DomainError("f_tilde_exact needs a finite-tau drive, got monochromatic")
    w = np.asarray(omega, dtype=float)
    tau = d.tau
    out = tau / (1.0 + ((w - d.omega0) * tau) ** 2) + tau / (1.0 + ((w + d.omega0) * tau) ** 2)
    return float(out) if out.ndim == 0 else out


def f_tilde_squared_area(d: DriveProfile) -> float:
    """Closed form of int |f~(w)|^2 dw / tau over the real line.

    By Parseval this is (2 pi / tau) int f(t)^2 dt = pi [1 + 1/(1 + (w0 tau)^2)],
    which tends to pi, the total delta weight of the monochromatic limit.
    """
    q = d.omega0 * d.tau
    return math.pi * (1.0 + 1.0 / (1.0 + q * q))


def monochromatic_weight(d: DriveProfile) -> float:
    """Weight multiplying each of delta(w -+ w0) in |f~|^2/tau for w0 tau -> infinity."""
    if not d.monochromatic:
        raise DomainError("monochromatic_weight requires a monochromatic drive")
    return MONOCHROMATIC_WEIGHT
