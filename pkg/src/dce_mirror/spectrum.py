"""Spectra of particles created on each side of the modulated mirror.

Every spectrum is reported as a rate density N_+-(w)/tau. For the
monochromatic drive this is the closed form; for the exact Lorentzian drive
the w' integral is done by adaptive quadrature and divided by tau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .drive import DriveProfile, f_tilde_exact, monochromatic_weight
from .errors import DomainError
from .quadrature import integrate
from .scattering import MirrorParams, Side, denominator, reflection_complement

DEFAULT_QUAD_TOL = 1e-10

# |f~|^2 threshold (relative to its peak) used to truncate the w' integral,
# and the resulting Lorentzian half-width in units of 1/tau.
TRUNCATION_LEVEL = 1e-12
_TRUNCATION_WIDTH = math.sqrt(1.0 / math.sqrt(TRUNCATION_LEVEL) - 1.0)
# Relative level at which a sampled exact-drive spectrum is considered finished.
SAMPLING_LEVEL = 1e-6
_SAMPLING_WIDTH = math.sqrt(1.0 / math.sqrt(SAMPLING_LEVEL) - 1.0)


def upsilon(p: MirrorParams, omega):
    """Resonance kernel mu0 w / [(mu0 - chi0 w^2)^2 + w^2 (1 + lambda0^2)^2]."""
    w = np.asarray(omega, dtype=float)
    if p.mu0 == 0.0 and np.any(w == 0.0):
        raise DomainError("upsilon is 0/0 at mu0 = 0, omega = 0")
    den = (p.mu0 - p.chi0 * w**2) ** 2 + (w * (1.0 + p.lambda0**2)) ** 2
    out = p.mu0 * w / den
    return float(out) if out.ndim == 0 else out


def side_factor(p: MirrorParams, side: Side) -> float:
    """(1 +- lambda0)^2 (1 + lambda0^2), the side-dependent part of every spectrum."""
    return (1.0 + side.sign * p.lambda0) ** 2 * (1.0 + p.lambda0**2)


def side_ratio(p: MirrorParams) -> float:
    """N_-(w)/N_+(w) = ((1 - lambda0)/(1 + lambda0))^2, also the ratio of totals."""
    if p.lambda0 == -1.0:
        raise DomainError("side ratio diverges at lambda0 = -1 (N_+ vanishes)")
    return ((1.0 - p.lambda0) / (1.0 + p.lambda0)) ** 2


def monochromatic_kernel(p: MirrorParams, omega0: float, omega):
    """Upsilon(w) Upsilon(w0 - w) on 0 < w < w0, zero elsewhere (Theta(0) = 0)."""
    w = np.asarray(omega, dtype=float)
    inside = (w > 0.0) & (w < omega0)
    if p.mu0 == 0.0:
        out = np.zeros_like(w)
    else:
        safe = np.where(inside, w, 0.5 * omega0)
        out = np.where(inside, upsilon(p, safe) * upsilon(p, omega0 - safe), 0.0)
    return float(out) if out.ndim == 0 else out


def spectrum_monochromatic(p: MirrorParams, d: DriveProfile, side: Side, omega):
    """Closed-form N_+-(w)/tau for w0 tau -> infinity."""
    weight = monochromatic_weight(d)
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectra are defined for omega >= 0")
    # |f~|^2/tau -> weight * delta(w + w' - w0) inside the w' integral
    prefactor = p.epsilon**2 * side_factor(p, side) / math.pi * weight / (2.0 * math.pi)
    out = prefactor * np.asarray(monochromatic_kernel(p, d.omega0, w))
    return float(out) if out.ndim == 0 else out


def _require_exact(d: DriveProfile):
    if d.monochromatic:
        raise DomainError("exact-pulse spectra need a finite-tau drive; use spectrum_monochromatic")


def _check_tol(quad_tol: float):
    if not quad_tol >= 0:
        raise ValueError(f"quad_tol must be >= 0, got {quad_tol}")


def integration_window(d: DriveProfile, omega: float) -> tuple[float, list[float]]:
    """Upper w' limit and breakpoints for integrands carrying |f~(w + w')|^2.

    The limit is where |f~|^2 falls below TRUNCATION_LEVEL of its peak,
    doubled as a safety margin; breakpoints cluster around the resonance
    w' = w0 - w at multiples of 1/tau.
    """
    peak = d.omega0 - omega
    upper = 2.0 * (max(peak, 0.0) + _TRUNCATION_WIDTH / d.tau)
    points = []
    if peak > 0:
        points.append(peak)
        for k in (1.0, 10.0, 100.0):
            points.extend([peak - k / d.tau, peak + k / d.tau])
    return upper, sorted(x for x in points if 0.0 < x < upper)


def _inner_integral(p: MirrorParams, d: DriveProfile, omega: float, quad_tol: float) -> float:
    """int_0^inf dw'/(2 pi) Upsilon(w') |f~(w + w')|^2, to relative quad_tol."""
    upper, points = integration_window(d, omega)

    def integrand(wp):
        return upsilon(p, wp) * f_tilde_exact(d, omega + wp) ** 2 / (2.0 * math.pi)

    res = integrate(integrand, 0.0, upper, quad_tol, points=points)
    return res.require(f"spectrum integral at omega={omega:g}")


def spectrum_general(
    p: MirrorParams, d: DriveProfile, side: Side, omega: float, quad_tol: float = DEFAULT_QUAD_TOL
) -> float:
    """N_+-(w)/tau for the exact pulse, via the Upsilon-product form."""
    _require_exact(d)
    _check_tol(quad_tol)
    omega = float(omega)
    if omega <= 0:
        raise DomainError("exact-pulse spectra are evaluated at omega > 0")
    prefactor = p.epsilon**2 * side_factor(p, side) / math.pi
    if prefactor == 0.0 or p.mu0 == 0.0:
        return 0.0
    return prefactor * upsilon(p, omega) * _inner_integral(p, d, omega, quad_tol) / d.tau


def spectrum_via_reflection_form(
    p: MirrorParams, d: DriveProfile, side: Side, omega: float, quad_tol: float = DEFAULT_QUAD_TOL
) -> float:
    """N_+-(w)/tau written with Re[1 + r_+-(-w')]; cross-check for spectrum_general."""
    _require_exact(d)
    _check_tol(quad_tol)
    omega = float(omega)
    if omega <= 0:
        raise DomainError("exact-pulse spectra are evaluated at omega > 0")
    if p.epsilon == 0.0 or p.mu0 == 0.0:
        return 0.0
    d_omega = complex(denominator(p, omega))
    prefactor = p.epsilon**2 * p.mu0**2 / math.pi / abs(d_omega) ** 2
    upper, points = integration_window(d, omega)

    def integrand(wp):
        re_term = np.real(reflection_complement(p, side, -wp))
        return omega / wp * re_term * f_tilde_exact(d, omega + wp) ** 2 / (2.0 * math.pi)

    res = integrate(integrand, 0.0, upper, quad_tol, points=points)
    return prefactor * res.require(f"reflection-form integral at omega={omega:g}") / d.tau


def spectrum(p: MirrorParams, d: DriveProfile, side: Side, omega: float, quad_tol: float = DEFAULT_QUAD_TOL):
    """Dispatch on the drive type."""
    if d.monochromatic:
        return spectrum_monochromatic(p, d, side, omega)
    return spectrum_general(p, d, side, omega, quad_tol)


def spectrum_cutoff(d: DriveProfile) -> float:
    """Upper end of the sampled frequency range.

    Monochromatic spectra vanish beyond w0. Exact-pulse spectra fall off
    like |f~(w)|^2 above w0; the cut is where that drops to SAMPLING_LEVEL.
    """
    if d.monochromatic:
        return d.omega0
    return d.omega0 + _SAMPLING_WIDTH / d.tau


@dataclass(frozen=True)
class SpectrumGrid:
    params: MirrorParams
    drive: DriveProfile
    omega: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray
    n_total: np.ndarray = field(init=False)

    def __post_init__(self):
        for name in ("omega", "n_plus", "n_minus"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        total = self.n_plus + self.n_minus
        total.setflags(write=False)
        object.__setattr__(self, "n_total", total)
        if self.omega.ndim != 1 or len(self.omega) < 2:
            raise ValueError("need at least two samples")
        if np.any(np.diff(self.omega) <= 0):
            raise ValueError("omega must be strictly increasing")
        for name in ("n_plus", "n_minus"):
            arr = getattr(self, name)
            if arr.shape != self.omega.shape or not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} must be finite, non-negative and match omega")

    def rows(self):
        return zip(self.omega, self.n_plus, self.n_minus, self.n_total)


def spectrum_grid_omegas(d: DriveProfile, n_points: int) -> np.ndarray:
    """n_points uniform interior samples of (0, w_max).

    For monochromatic drives mirrored samples a, b satisfy a + b = w0
    exactly in floating point: b = fl(w0 - a~) lies in [w0/2, w0], so
    a = w0 - b is exact (Sterbenz) and w0 - a recovers b. The spectrum at
    a and at b is then the same product of Upsilon values, bit for bit.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    w_max = spectrum_cutoff(d)
    idx = np.arange(1, n_points + 1)
    omegas = w_max * idx / (n_points + 1)
    if d.monochromatic:
        half = n_points // 2
        upper = w_max - omegas[:half]
        omegas[:half] = w_max - upper
        omegas[n_points - half:] = upper[::-1]
        if n_points % 2:
            omegas[half] = 0.5 * w_max
    return omegas


def _sample_point(args):
    p, d, omega, quad_tol = args
    return (
        spectrum(p, d, Side.PLUS, omega, quad_tol),
        spectrum(p, d, Side.MINUS, omega, quad_tol),
    )


def sample_spectrum(
    p: MirrorParams,
    d: DriveProfile,
    n_points: int,
    quad_tol: float = DEFAULT_QUAD_TOL,
    workers: int = 1,
) -> SpectrumGrid:
    """Tabulate both spectra on a uniform grid; samples are independent of each other."""
    from .parallel import parallel_map

    omegas = spectrum_grid_omegas(d, n_points)
    if d.monochromatic:
        n_plus = np.asarray(spectrum_monochromatic(p, d, Side.PLUS, omegas))
        n_minus = np.asarray(spectrum_monochromatic(p, d, Side.MINUS, omegas))
    else:
        pairs = parallel_map(_sample_point, [(p, d, float(w), quad_tol) for w in omegas], workers)
        n_plus = np.array([a for a, _ in pairs])
        n_minus = np.array([b for _, b in pairs])
    return SpectrumGrid(p, d, omegas, n_plus, n_minus)
