"""Invariant battery: analytic laws the numerics must reproduce.

Each check returns a CheckResult; quadrature failures are captured rather
than raised so a single run reports every check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .drive import DriveProfile
from .errors import ConvergenceError
from .scattering import MirrorParams, Side, assemble_matrix, coefficients, matching_residual
from .spectrum import (
    DEFAULT_QUAD_TOL,
    sample_spectrum,
    spectrum_general,
    spectrum_monochromatic,
    spectrum_via_reflection_form,
)
from .totals import total_energy, total_number

DEFAULT_OMEGA0_TAUS = (10.0, 100.0, 1000.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    error: str | None = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else ("ERROR" if self.error else "FAIL")
        msg = self.error or self.detail
        return f"[{status}] {self.name}: {msg}"


def random_params(rng: np.random.Generator, lam_range=(-2.0, 2.0), epsilon=0.0) -> MirrorParams:
    return MirrorParams(
        mu0=rng.uniform(0.0, 10.0),
        chi0=rng.uniform(0.0, 10.0),
        lambda0=rng.uniform(*lam_range),
        epsilon=epsilon,
    )


def unitarity_defects(mu0, chi0, lambda0, omega) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample energy defect max_+- | |s|^2 + |r_+-|^2 - 1 | and ||S S^dagger - I||_max."""
    s, rp, rm, _, _ = coefficients(mu0, chi0, lambda0, omega)
    energy = np.maximum(np.abs(np.abs(s) ** 2 + np.abs(rp) ** 2 - 1.0), np.abs(np.abs(s) ** 2 + np.abs(rm) ** 2 - 1.0))
    S = assemble_matrix(s, rp, rm)
    prod = S @ np.conj(np.swapaxes(S, -1, -2))
    full = np.max(np.abs(prod - np.eye(2)), axis=(-2, -1))
    return energy, full


def random_draws(rng: np.random.Generator, n: int):
    """mu0, chi0 in [0, 10], lambda0 in [-2, 2], omega in (0, 10]."""
    mu0 = rng.uniform(0.0, 10.0, n)
    chi0 = rng.uniform(0.0, 10.0, n)
    lam = rng.uniform(-2.0, 2.0, n)
    omega = 10.0 - rng.uniform(0.0, 10.0, n)
    return mu0, chi0, lam, omega


def check_unitarity(rng, n_draws=10_000, tol=1e-12) -> CheckResult:
    energy, full = unitarity_defects(*random_draws(rng, n_draws))
    worst_e, worst_f = float(energy.max()), float(full.max())
    ok = worst_e <= tol and worst_f <= tol
    return CheckResult("unitarity", ok, f"max energy defect {worst_e:.2e}, max |SS^+ - I| {worst_f:.2e} (tol {tol:g})")


def check_matching(rng, n_draws=1000, tol=1e-12) -> CheckResult:
    worst = 0.0
    for _ in range(n_draws):
        p = random_params(rng)
        w = 10.0 - rng.uniform(0.0, 10.0)
        inc = rng.normal(size=2) + 1j * rng.normal(size=2)
        amp = max(abs(inc[0]), abs(inc[1]))
        worst = max(worst, matching_residual(p, w, inc) / amp)
    return CheckResult("matching residuals", worst <= tol, f"max residual/amplitude {worst:.2e} (tol {tol:g})")


def check_form_equivalence(rng, n_points=20, quad_tol=DEFAULT_QUAD_TOL, tol=1e-8, omega0_tau=50.0) -> CheckResult:
    drive = DriveProfile(omega0=1.0, tau=omega0_tau)
    worst = 0.0
    for _ in range(n_points):
        p = random_params(rng, lam_range=(-0.95, 0.95), epsilon=0.05)
        p = p.replace(mu0=max(p.mu0, 0.05))
        w = rng.uniform(0.05, 1.5)
        side = Side.PLUS if rng.random() < 0.5 else Side.MINUS
        a = spectrum_general(p, drive, side, w, quad_tol)
        b = spectrum_via_reflection_form(p, drive, side, w, quad_tol)
        worst = max(worst, abs(a - b) / abs(a))
    return CheckResult("form equivalence", worst <= tol, f"max relative gap {worst:.2e} over {n_points} points (tol {tol:g})")


def check_side_ratio(quad_tol=DEFAULT_QUAD_TOL) -> CheckResult:
    worst = 0.0
    drive = DriveProfile(omega0=1.0, tau=50.0)
    mono = DriveProfile(omega0=1.0, tau=1.0, monochromatic=True)
    for lam in (-0.9, -0.5, 0.0, 1 / 3, 0.9):
        p = MirrorParams(1.0, 0.5, lam, 0.01)
        law = ((1 - lam) / (1 + lam)) ** 2
        closed = spectrum_monochromatic(p, mono, Side.MINUS, 0.3) / spectrum_monochromatic(p, mono, Side.PLUS, 0.3)
        quad = spectrum_general(p, drive, Side.MINUS, 0.3, quad_tol) / spectrum_general(p, drive, Side.PLUS, 0.3, quad_tol)
        worst = max(worst, abs(closed / law - 1), abs(quad / law - 1))
    return CheckResult("global side factor", worst <= 1e-10, f"max relative deviation {worst:.2e}")


def check_symmetries(rng, quad_tol=DEFAULT_QUAD_TOL) -> CheckResult:
    mono = DriveProfile(omega0=1.0, tau=1.0, monochromatic=True)
    worst_total = 0.0
    for _ in range(20):
        lam = rng.uniform(-2.0, 2.0)
        p = MirrorParams(rng.uniform(0.1, 5.0), rng.uniform(0.0, 5.0), lam, 0.01)
        a = total_number(p, mono, quad_tol).n_total
        b = total_number(p.replace(lambda0=-lam), mono, quad_tol).n_total
        worst_total = max(worst_total, abs(a - b) / abs(a))
    grid = sample_spectrum(MirrorParams(1.0, 2.0, 0.4, 0.01), mono, 101)
    mirror_gap = float(np.max(np.abs(grid.n_total - grid.n_total[::-1]) / np.max(grid.n_total)))
    ok = worst_total <= 1e-10 and mirror_gap == 0.0
    return CheckResult(
        "lambda0 parity and mirror symmetry",
        ok,
        f"total parity gap {worst_total:.2e}, spectral mirror gap {mirror_gap:.2e}",
    )


def check_energy(rng, quad_tol=DEFAULT_QUAD_TOL, tol=1e-8) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        w0 = rng.uniform(0.5, 3.0)
        d = DriveProfile(omega0=w0, tau=1.0, monochromatic=True)
        p = MirrorParams(rng.uniform(0.1, 5.0), rng.uniform(0.0, 5.0), rng.uniform(-0.9, 0.9), 0.01)
        t = total_energy(p, d, quad_tol)
        for n, e in ((t.n_plus, t.e_plus), (t.n_minus, t.e_minus)):
            worst = max(worst, abs(e / (0.5 * w0 * n) - 1))
    return CheckResult("energy = (omega0/2) number", worst <= tol, f"max relative deviation {worst:.2e} (tol {tol:g})")


def check_dirichlet(threshold=1e-4) -> CheckResult:
    mono = DriveProfile(omega0=1.0, tau=1.0, monochromatic=True)

    def n(mu0, chi0):
        p = MirrorParams(mu0, chi0, 0.0, 0.01)
        return sum(spectrum_monochromatic(p, mono, s, 0.5) for s in Side)

    by_mu = n(1e3, 0.0) / n(1.0, 0.0)
    by_chi = n(1.0, 1e3) / n(1.0, 0.0)
    ok = by_mu < threshold and by_chi < threshold
    return CheckResult("Dirichlet suppression", ok, f"N(mu0=1e3)/N(1) = {by_mu:.2e}, N(chi0=1e3)/N(0) = {by_chi:.2e}")


def convergence_deviations(omega0_taus, quad_tol=DEFAULT_QUAD_TOL, params=None) -> dict[float, float]:
    """Relative gap between the exact-pulse and closed-form spectra at w0/2."""
    p = params or MirrorParams(1.0, 0.0, 0.0, 0.01)
    mono = DriveProfile(omega0=1.0, tau=1.0, monochromatic=True)
    reference = spectrum_monochromatic(p, mono, Side.PLUS, 0.5)
    out = {}
    for q in omega0_taus:
        exact = spectrum_general(p, DriveProfile(omega0=1.0, tau=float(q)), Side.PLUS, 0.5, quad_tol)
        out[float(q)] = abs(exact / reference - 1.0)
    return out


def check_convergence(omega0_taus=DEFAULT_OMEGA0_TAUS, quad_tol=DEFAULT_QUAD_TOL) -> CheckResult:
    qs = sorted(set(float(q) for q in omega0_taus) | {200.0})
    dev = convergence_deviations(qs, quad_tol)
    requested = sorted(float(q) for q in omega0_taus)
    seq = [dev[q] for q in requested]
    monotone = all(a > b for a, b in zip(seq, seq[1:]))
    ok = monotone and dev[200.0] < 0.02
    detail = ", ".join(f"w0tau={q:g}: {dev[q]:.2e}" for q in qs)
    return CheckResult("monochromatic convergence", ok, detail, data={"deviations": dev})


def run_battery(
    quad_tol: float = DEFAULT_QUAD_TOL,
    omega0_taus=DEFAULT_OMEGA0_TAUS,
    seed: int = 12345,
) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("unitarity", lambda: check_unitarity(rng)),
        ("matching residuals", lambda: check_matching(rng)),
        ("form equivalence", lambda: check_form_equivalence(rng, quad_tol=quad_tol)),
        ("global side factor", lambda: check_side_ratio(quad_tol)),
        ("lambda0 parity and mirror symmetry", lambda: check_symmetries(rng, quad_tol)),
        ("energy = (omega0/2) number", lambda: check_energy(rng, quad_tol)),
        ("Dirichlet suppression", check_dirichlet),
        ("monochromatic convergence", lambda: check_convergence(omega0_taus, quad_tol)),
    ]
    results = []
    for name, fn in checks:
        try:
            results.append(fn())
        except ConvergenceError as exc:
            results.append(CheckResult(name, False, error=f"ConvergenceError: {exc}"))
    return results
