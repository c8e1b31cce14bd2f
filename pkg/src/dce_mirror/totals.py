"""Total number and energy of created particles, integrated over frequency."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .drive import DriveProfile, monochromatic_weight
from .quadrature import integrate
from .scattering import MirrorParams, Side
from .spectrum import (
    DEFAULT_QUAD_TOL,
    _TRUNCATION_WIDTH,
    _inner_integral,
    monochromatic_kernel,
    side_factor,
    upsilon,
)


@dataclass(frozen=True)
class Totals:
    """Side-resolved totals, per unit tau.

    With ``normalized`` set, every field has additionally been multiplied by
    2 pi / epsilon^2, the figure of merit that is independent of epsilon.
    Energy fields are None when only the number was requested.
    """

    n_plus: float
    n_minus: float
    e_plus: Optional[float] = None
    e_minus: Optional[float] = None
    normalized: bool = False

    @property
    def n_total(self) -> float:
        return self.n_plus + self.n_minus

    @property
    def e_total(self) -> Optional[float]:
        if self.e_plus is None or self.e_minus is None:
            return None
        return self.e_plus + self.e_minus

    def as_normalized(self, epsilon: float) -> "Totals":
        if self.normalized:
            return self
        if epsilon == 0:
            raise ZeroDivisionError("normalization by 2 pi/epsilon^2 needs epsilon > 0")
        scale = 2.0 * math.pi / epsilon**2
        return Totals(
            self.n_plus * scale,
            self.n_minus * scale,
            None if self.e_plus is None else self.e_plus * scale,
            None if self.e_minus is None else self.e_minus * scale,
            normalized=True,
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["n_total"] = self.n_total
        out["e_total"] = self.e_total
        return out


def _support_integral(p: MirrorParams, d: DriveProfile, moment: int, rel_tol: float) -> float:
    """Side-independent integral behind the totals, i.e. N_+-/tau with the
    factor epsilon^2 (1 +- lambda0)^2 (1 + lambda0^2) taken out, times w^moment,
    integrated over frequency."""
    if p.mu0 == 0.0:
        return 0.0
    if d.monochromatic:
        w0 = d.omega0
        weight = monochromatic_weight(d) / (2.0 * math.pi**2)

        def integrand(w):
            return weight * w**moment * monochromatic_kernel(p, w0, w)

        res = integrate(integrand, 0.0, w0, rel_tol, points=(0.5 * w0,))
        return res.require("total over the monochromatic support")

    upper = 2.0 * (d.omega0 + _TRUNCATION_WIDTH / d.tau)
    points = [d.omega0 + k / d.tau for k in (-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0)]

    def integrand(w):
        w = np.atleast_1d(w)
        inner = np.array([_inner_integral(p, d, float(x), rel_tol) for x in w])
        return w**moment * upsilon(p, w) * inner / (math.pi * d.tau)

    res = integrate(integrand, 0.0, upper, rel_tol, points=points)
    return res.require("total over the exact-pulse spectrum")


def _side_totals(p: MirrorParams, base: float) -> tuple[float, float]:
    eps2 = p.epsilon**2
    return (
        eps2 * side_factor(p, Side.PLUS) * base,
        eps2 * side_factor(p, Side.MINUS) * base,
    )


def total_number(p: MirrorParams, d: DriveProfile, rel_tol: float = DEFAULT_QUAD_TOL) -> Totals:
    """N_+- = int N_+-(w) dw (per unit tau)."""
    n_plus, n_minus = _side_totals(p, _support_integral(p, d, 0, rel_tol))
    return Totals(n_plus, n_minus)


def total_energy(p: MirrorParams, d: DriveProfile, rel_tol: float = DEFAULT_QUAD_TOL) -> Totals:
    """Number and energy E_+- = int w N_+-(w) dw (per unit tau)."""
    base_n = _support_integral(p, d, 0, rel_tol)
    base_e = _support_integral(p, d, 1, rel_tol)
    n_plus, n_minus = _side_totals(p, base_n)
    e_plus, e_minus = _side_totals(p, base_e)
    return Totals(n_plus, n_minus, e_plus, e_minus)


def normalized_rate(p: MirrorParams, d: DriveProfile, rel_tol: float = DEFAULT_QUAD_TOL) -> float:
    """(2 pi / epsilon^2 tau) N, evaluated without reference to epsilon."""
    base = _support_integral(p, d, 0, rel_tol)
    factor = side_factor(p, Side.PLUS) + side_factor(p, Side.MINUS)
    return 2.0 * math.pi * factor * base
