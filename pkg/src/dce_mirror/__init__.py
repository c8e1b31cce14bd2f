"""Particle creation by a static, partially reflecting delta/delta-prime
mirror whose delta coupling is modulated in time (1+1D massless scalar)."""

from .drive import DriveProfile, f_tilde_exact, f_time, monochromatic_weight
from .errors import BracketError, ConvergenceError, DomainError
from .quadrature import QuadratureResult, integrate
from .scattering import (
    MirrorParams,
    Side,
    correction_kernel,
    matching_residual,
    reflection_coefficient,
    scattering_matrix,
    transmission_coefficient,
)
from .spectrum import (
    SpectrumGrid,
    sample_spectrum,
    side_ratio,
    spectrum_general,
    spectrum_monochromatic,
    spectrum_via_reflection_form,
    upsilon,
)
from .totals import Totals, normalized_rate, total_energy, total_number

__all__ = [
    "BracketError", "ConvergenceError", "DomainError", "DriveProfile", "MirrorParams",
    "QuadratureResult", "Side", "SpectrumGrid", "Totals", "correction_kernel", "f_tilde_exact",
    "f_time", "integrate", "matching_residual", "monochromatic_weight", "normalized_rate",
    "reflection_coefficient", "sample_spectrum", "scattering_matrix", "side_ratio",
    "spectrum_general", "spectrum_monochromatic", "spectrum_via_reflection_form",
    "total_energy", "total_number", "transmission_coefficient", "upsilon",
]
