"""(chi0, lambda0) parameter sweeps of the monochromatic creation rate."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .drive import DriveProfile
from .errors import BracketError, ConvergenceError, DomainError
from .parallel import parallel_map
from .scattering import MirrorParams
from .spectrum import DEFAULT_QUAD_TOL
from .totals import normalized_rate, total_number

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_CHI0_RANGE = (0.0, 10.0, 201)
DEFAULT_LAMBDA0_RANGE = (-1.0, 1.0, 201)


class SweepKind(enum.Enum):
    NORMALIZED_RATE = "normalized_rate"
    RATIO_TO_PERFECT = "ratio_to_perfect"


@dataclass(frozen=True)
class AxisRange:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise ValueError(f"need finite start < stop, got {self.start}:{self.stop}")

    @classmethod
    def parse(cls, text: str) -> "AxisRange":
        """Parse 'a:b:n'."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected a:b:n, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepGrid:
    """values[i, j] belongs to (chi0_axis[i], lambda0_axis[j])."""

    chi0_axis: np.ndarray
    lambda0_axis: np.ndarray
    values: np.ndarray
    kind: SweepKind
    mu0: float
    omega0: float
    rel_tol: float = DEFAULT_QUAD_TOL

    def __post_init__(self):
        for name in ("chi0_axis", "lambda0_axis", "values"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("chi0_axis", "lambda0_axis"):
            if np.any(np.diff(getattr(self, name)) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
        if np.any(self.chi0_axis < 0):
            raise ValueError("chi0 must be >= 0")
        if self.values.shape != (len(self.chi0_axis), len(self.lambda0_axis)):
            raise ValueError("values shape does not match the axes")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("grid values must be finite and non-negative")

    def cell_value(self, chi0: float, lambda0: float) -> float:
        """Recompute the grid quantity off-grid, through quadrature."""
        return cell_value(self.kind, self.mu0, self.omega0, chi0, lambda0, self.rel_tol)

    def argmax(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.chi0_axis[i]), float(self.lambda0_axis[j]), float(self.values[i, j])


@dataclass(frozen=True)
class PeakReport:
    chi0_star: float
    lambda0_star: float
    value: float
    refinement_tol: float
    evaluations: int = field(default=0, compare=False)


def _drive(omega0: float) -> DriveProfile:
    # tau drops out of every per-tau monochromatic quantity
    return DriveProfile(omega0=omega0, tau=1.0, monochromatic=True)


def rate_at(mu0: float, omega0: float, chi0: float, lambda0: float, rel_tol: float = DEFAULT_QUAD_TOL) -> float:
    """(2 pi / epsilon^2 tau) N for the monochromatic drive."""
    return normalized_rate(MirrorParams(mu0, chi0, lambda0), _drive(omega0), rel_tol)


def cell_value(kind: SweepKind, mu0, omega0, chi0, lambda0, rel_tol=DEFAULT_QUAD_TOL) -> float:
    rate = rate_at(mu0, omega0, chi0, lambda0, rel_tol)
    if kind is SweepKind.NORMALIZED_RATE:
        return rate
    perfect = rate_at(mu0, omega0, chi0, 1.0, rel_tol)
    if perfect == 0.0:
        raise DomainError(f"perfect-mirror total vanishes at chi0={chi0}")
    return rate / perfect


def _rate_task(args):
    mu0, omega0, chi0, lambda0, rel_tol = args
    try:
        return rate_at(mu0, omega0, chi0, lambda0, rel_tol)
    except ConvergenceError as exc:
        raise ConvergenceError(f"cell (chi0={chi0!r}, lambda0={lambda0!r}): {exc}") from exc


def _rate_grid(mu0, omega0, chis, lams, rel_tol, workers) -> np.ndarray:
    tasks = [(mu0, omega0, float(c), float(l), rel_tol) for c in chis for l in lams]
    flat = parallel_map(_rate_task, tasks, workers)
    return np.array(flat).reshape(len(chis), len(lams))


def check_epsilon_independence(mu0, omega0, chi0, lambda0, rel_tol=DEFAULT_QUAD_TOL, eps=(1e-2, 1e-3)):
    """Normalized totals at two modulation depths; returns both values."""
    values = []
    for e in eps:
        totals = total_number(MirrorParams(mu0, chi0, lambda0, e), _drive(omega0), rel_tol)
        values.append(totals.as_normalized(e).n_total)
    return values


def _validate_sweep_inputs(mu0, omega0, chi0_range, lambda0_range):
    MirrorParams(mu0)
    _drive(omega0)
    if chi0_range.start < 0:
        raise ValueError("chi0 range must be >= 0")


def sweep_normalized_rate(
    mu0: float = 1.0,
    omega0: float = 1.0,
    chi0_range: AxisRange = AxisRange(*DEFAULT_CHI0_RANGE),
    lambda0_range: AxisRange = AxisRange(*DEFAULT_LAMBDA0_RANGE),
    rel_tol: float = DEFAULT_QUAD_TOL,
    workers: int = 1,
) -> SweepGrid:
    _validate_sweep_inputs(mu0, omega0, chi0_range, lambda0_range)
    chis, lams = chi0_range.values(), lambda0_range.values()
    values = _rate_grid(mu0, omega0, chis, lams, rel_tol, workers)

    # epsilon must cancel: re-derive one cell through the epsilon-carrying totals
    a, b = check_epsilon_independence(mu0, omega0, float(chis[0]), float(lams[0]), rel_tol)
    ref = values[0, 0]
    for v in (a, b):
        if abs(v - ref) > 10 * rel_tol * max(abs(ref), 1e-300):
            raise RuntimeError(f"normalized rate depends on epsilon: {v!r} vs {ref!r}")
    return SweepGrid(chis, lams, values, SweepKind.NORMALIZED_RATE, mu0, omega0, rel_tol)


def sweep_ratio_to_perfect(
    mu0: float = 1.0,
    omega0: float = 1.0,
    chi0_range: AxisRange = AxisRange(*DEFAULT_CHI0_RANGE),
    lambda0_range: AxisRange = AxisRange(*DEFAULT_LAMBDA0_RANGE),
    rel_tol: float = DEFAULT_QUAD_TOL,
    workers: int = 1,
) -> SweepGrid:
    """N / N|_{lambda0=1} with the denominator taken at the same chi0."""
    _validate_sweep_inputs(mu0, omega0, chi0_range, lambda0_range)
    chis, lams = chi0_range.values(), lambda0_range.values()
    rates = _rate_grid(mu0, omega0, chis, lams, rel_tol, workers)
    perfect = _rate_grid(mu0, omega0, chis, [1.0], rel_tol, workers)[:, 0]
    if np.any(perfect == 0.0):
        bad = chis[np.flatnonzero(perfect == 0.0)[0]]
        raise DomainError(f"perfect-mirror total vanishes at chi0={bad}")
    values = rates / perfect[:, None]
    return SweepGrid(chis, lams, values, SweepKind.RATIO_TO_PERFECT, mu0, omega0, rel_tol)


def golden_section_max(f, a: float, b: float, tol: float = 1e-4):
    """Maximize a unimodal f on [a, b]; returns (x, f(x), evaluations)."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        n += 1
    x = 0.5 * (a + b)
    fx = f(x)
    n += 1
    # the bracket's interior probes may beat the midpoint by rounding
    best = max((fx, x), (fc, c), (fd, d))
    return best[1], best[0], n


def find_peak(
    mu0: float = 1.0,
    omega0: float = 1.0,
    lambda0_fixed: float = 0.0,
    chi0_bracket: tuple[float, float] = (0.5, 10.0),
    rel_tol: float = DEFAULT_QUAD_TOL,
    xtol: float = 1e-4,
    n_seed: int = 21,
) -> PeakReport:
    """Maximum of the normalized rate along chi0 at fixed lambda0.

    A coarse scan picks the best interior sample; golden-section search then
    refines inside its two neighbours. A maximum at either end of the
    bracket means there is no interior peak and raises BracketError.
    """
    lo, hi = map(float, chi0_bracket)
    if not (0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got {chi0_bracket}")

    def objective(chi0):
        return rate_at(mu0, omega0, chi0, lambda0_fixed, rel_tol)

    seeds = np.linspace(lo, hi, n_seed)
    values = np.array([objective(float(x)) for x in seeds])
    k = int(np.argmax(values))
    if k == 0 or k == n_seed - 1:
        raise BracketError(
            f"rate is maximal at the bracket edge chi0={seeds[k]:g}; no interior peak in {chi0_bracket}"
        )
    x, fx, n = golden_section_max(objective, float(seeds[k - 1]), float(seeds[k + 1]), xtol)
    return PeakReport(x, float(lambda0_fixed), fx, xtol, evaluations=n_seed + n)


def find_peak_2d(grid: SweepGrid, xtol: float = 1e-4) -> PeakReport:
    """Seed from the grid argmax, then refine along chi0 at that lambda0."""
    if grid.kind is not SweepKind.NORMALIZED_RATE:
        raise ValueError("peak search runs on normalized-rate grids")
    i, j = np.unravel_index(int(np.argmax(grid.values)), grid.values.shape)
    chis = grid.chi0_axis
    lo = chis[max(i - 1, 0)]
    hi = chis[min(i + 1, len(chis) - 1)]
    lam = float(grid.lambda0_axis[j])

    def objective(chi0):
        return rate_at(grid.mu0, grid.omega0, chi0, lam, grid.rel_tol)

    x, fx, n = golden_section_max(objective, float(lo), float(hi), xtol)
    return PeakReport(x, lam, fx, xtol, evaluations=n)
