"""Static scattering matrix of the delta/delta-prime mirror and its first-order
correction from a modulated delta coupling.

All frequency arguments may be Python floats or numpy arrays; mirror
parameters are always scalars.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

EPSILON_MAX = 0.1

J2 = np.array([[0.0, 1.0], [1.0, 0.0]])


class Side(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Side.PLUS else -1


@dataclass(frozen=True)
class MirrorParams:
    """Static couplings of the mirror plus the modulation depth of mu(t).

    mu0 is the delta strength, chi0 the kinetic-term coupling, lambda0 the
    delta-prime strength (lambda0 = +-1 is a perfect mirror).
    """

    mu0: float
    chi0: float = 0.0
    lambda0: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("mu0", "chi0", "lambda0", "epsilon"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.mu0 < 0:
            raise ValueError(f"mu0 must be >= 0, got {self.mu0}")
        if self.chi0 < 0:
            raise ValueError(f"chi0 must be >= 0, got {self.chi0}")
        if not 0.0 <= self.epsilon <= EPSILON_MAX:
            raise ValueError(f"epsilon must lie in [0, {EPSILON_MAX}], got {self.epsilon}")

    def replace(self, **changes) -> "MirrorParams":
        fields = dict(mu0=self.mu0, chi0=self.chi0, lambda0=self.lambda0, epsilon=self.epsilon)
        fields.update(changes)
        return MirrorParams(**fields)


def denominator(p: MirrorParams, omega):
    """i mu0 - i chi0 w^2 + w (1 + lambda0^2), shared by every coefficient."""
    omega = np.asarray(omega, dtype=float)
    return 1j * (p.mu0 - p.chi0 * omega**2) + omega * (1.0 + p.lambda0**2)


def coefficients(mu0, chi0, lambda0, omega):
    """(s, r_plus, r_minus, 1 + r_plus, 1 + r_minus) with numpy broadcasting.

    Couplings may be arrays here, which is what the bulk invariant checks
    use; MirrorParams validation is the caller's job. At w = 0 with mu0 = 0
    the removable singularity is replaced by its w -> 0 limit.

    1 + r is formed as (D - numerator)/D: the i(mu0 - chi0 w^2) parts are the
    same float and cancel exactly, so the perfect-mirror side
    (lambda0 = -+1) gives an exact zero instead of rounding noise.
    """
    mu0, chi0, lam, w = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (mu0, chi0, lambda0, omega))
    )
    shape = w.shape
    # 0-d operands would divide as Python scalars and raise on 0/0
    mu0, chi0, lam, w = (np.atleast_1d(x) for x in (mu0, chi0, lam, w))
    if not np.all(np.isfinite(w)):
        raise DomainError("omega must be finite")
    limit = (mu0 == 0.0) & (w == 0.0)
    lam2 = lam**2
    if np.any(limit & (lam2 == 1.0)):
        raise DomainError("coefficients are 0/0 at mu0 = 0, omega = 0, lambda0 = +-1")
    reactive = 1j * (mu0 - chi0 * w**2)
    den = reactive + w * (1.0 + lam2)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = w * (1.0 - lam2) / den
        r_plus = -(reactive - 2.0 * w * lam) / den
        r_minus = -(reactive + 2.0 * w * lam) / den
        c_plus = (w * (1.0 + lam2) + 2.0 * w * lam) / den
        c_minus = (w * (1.0 + lam2) - 2.0 * w * lam) / den
    if np.any(limit):
        s = np.where(limit, (1.0 - lam2) / (1.0 + lam2), s)
        r_lim = 2.0 * lam / (1.0 + lam2)
        r_plus = np.where(limit, r_lim, r_plus)
        r_minus = np.where(limit, -r_lim, r_minus)
        c_plus = np.where(limit, 1.0 + r_lim, c_plus)
        c_minus = np.where(limit, 1.0 - r_lim, c_minus)
    return tuple(x.reshape(shape) for x in (s, r_plus, r_minus, c_plus, c_minus))


def _finish(value):
    value = np.asarray(value, dtype=complex)
    return complex(value) if value.ndim == 0 else value


def _coeffs(p: MirrorParams, omega):
    return coefficients(p.mu0, p.chi0, p.lambda0, omega)


def transmission_coefficient(p: MirrorParams, side: Side, omega):
    """s_+-(w) = w (1 - lambda0^2) / D(w); identical for both sides."""
    return _finish(_coeffs(p, omega)[0])


def reflection_coefficient(p: MirrorParams, side: Side, omega):
    """r_+-(w) = -(i mu0 - i chi0 w^2 -+ 2 w lambda0) / D(w)."""
    c = _coeffs(p, omega)
    return _finish(c[1] if side is Side.PLUS else c[2])


def reflection_complement(p: MirrorParams, side: Side, omega):
    """1 + r_+-(w), evaluated without cancellation."""
    c = _coeffs(p, omega)
    return _finish(c[3] if side is Side.PLUS else c[4])


def assemble_matrix(s, r_plus, r_minus) -> np.ndarray:
    s, r_plus, r_minus = np.broadcast_arrays(s, r_plus, r_minus)
    return np.stack([np.stack([s, r_plus], axis=-1), np.stack([r_minus, s], axis=-1)], axis=-2)


def scattering_matrix(p: MirrorParams, omega) -> np.ndarray:
    """[[s+, r+], [r-, s-]]; shape (2, 2) for scalar omega, (..., 2, 2) otherwise."""
    s, rp, rm, _, _ = _coeffs(p, omega)
    return assemble_matrix(s, rp, rm)


def correction_kernel(p: MirrorParams, drive, omega: float, omega_prime: float) -> np.ndarray:
    """First-order correction S(w, w') to the scattering matrix.

    -i eps mu0 f~(w - w') [J2 + S(w')] / D(w). Only exact (non-monochromatic)
    drives can be evaluated pointwise.
    """
    from .drive import f_tilde_exact

    if drive.monochromatic:
        raise DomainError(
            "monochromatic drive has a distributional transform; use the closed-form spectra"
        )
    d = complex(denominator(p, omega))
    if d == 0:
        raise DomainError("denominator vanishes at omega = 0 with mu0 = 0")
    ft = f_tilde_exact(drive, omega - omega_prime)
    return -1j * p.epsilon * p.mu0 * ft * (J2 + scattering_matrix(p, omega_prime)) / d


def matching_residual(p: MirrorParams, omega: float, incoming) -> float:
    """Residual of the two static matching conditions for outgoing = S(w) incoming.

    Both conditions are multiplied through by their lambda0 and omega
    denominators so lambda0 = +-1 stays finite. Each residual is divided by
    the sum of its coefficient moduli, which makes the result an amplitude:
    it should sit at rounding level times max(|incoming|).
    """
    if p.epsilon != 0.0:
        raise DomainError("matching_residual is defined for the static case epsilon = 0")
    phi_in, psi_in = (complex(a) for a in incoming)
    S = scattering_matrix(p, omega)
    phi_out = S[0, 0] * phi_in + S[0, 1] * psi_in
    psi_out = S[1, 0] * phi_in + S[1, 1] * psi_in

    lam, w = p.lambda0, float(omega)
    left_sum = phi_in + psi_out
    # (1 - l)(phi_out + psi_in) = (1 + l)(phi_in + psi_out)
    r1 = (1 - lam) * (phi_out + psi_in) - (1 + lam) * left_sum
    scale1 = abs(1 - lam) + abs(1 + lam)
    # w(1 - l^2)(phi_out - psi_in) = w(1 - l)^2 (phi_in - psi_out)
    #     + 2i chi0 w^2 (phi_in + psi_out) - 2i mu0 (phi_in + psi_out)
    r2 = (
        w * (1 - lam**2) * (phi_out - psi_in)
        - w * (1 - lam) ** 2 * (phi_in - psi_out)
        - 2j * p.chi0 * w**2 * left_sum
        + 2j * p.mu0 * left_sum
    )
    scale2 = abs(w * (1 - lam**2)) + w * (1 - lam) ** 2 + 2 * p.chi0 * w**2 + 2 * p.mu0
    res1 = abs(r1) / scale1
    res2 = abs(r2) / scale2 if scale2 > 0 else abs(r2)
    return float(max(res1, res2))
