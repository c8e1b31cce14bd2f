"""Worked values and limits for each module, checked one by one."""
import json
import math

import numpy as np
import pytest

from dce_mirror import DomainError, DriveProfile, MirrorParams, Side, integrate
from dce_mirror.cli import main
from dce_mirror.drive import f_tilde_exact, f_time, monochromatic_weight
from dce_mirror.scattering import matching_residual, reflection_coefficient, scattering_matrix, transmission_coefficient
from dce_mirror.spectrum import (
    sample_spectrum,
    side_ratio,
    spectrum_general,
    spectrum_monochromatic,
    spectrum_via_reflection_form,
    upsilon,
)
from dce_mirror.sweep import AxisRange, find_peak, rate_at, sweep_normalized_rate
from dce_mirror.totals import total_energy, total_number

MONO = DriveProfile(1.0, 1.0, monochromatic=True)
trapezoid = getattr(np, "trapezoid", None) or np.trapz
EXACT = DriveProfile(1.0, 50.0)


def test_stiff_delta_is_a_perfect_mirror():
    p = MirrorParams(1e9)
    assert abs(transmission_coefficient(p, Side.PLUS, 1.0)) < 1e-8
    for side in Side:
        assert abs(reflection_coefficient(p, side, 1.0) + 1) < 1e-8


def test_unit_delta_matrix():
    S = scattering_matrix(MirrorParams(1.0), 1.0)
    expected = np.array([[(1 - 1j) / 2, -(1 + 1j) / 2], [-(1 + 1j) / 2, (1 - 1j) / 2]])
    np.testing.assert_allclose(S, expected, atol=1e-15)


@pytest.mark.parametrize("lam", [1.0, -1.0])
def test_perfect_mirror_matrix(lam):
    S = scattering_matrix(MirrorParams(1.0, 0.0, lam), 0.7)
    np.testing.assert_allclose(np.abs(S), [[0, 1], [1, 0]], atol=1e-15)


def test_matching_example():
    assert matching_residual(MirrorParams(1.0, 0.5, 0.3), 1.0, (1, 0)) < 1e-12


def test_time_profile_values():
    d = DriveProfile(1.0, 10.0)
    assert f_time(d, 0.0) == 1.0
    assert f_time(d, math.pi) == pytest.approx(-math.exp(-math.pi / 10), rel=1e-15)
    assert f_time(d, 1e4) == pytest.approx(0.0, abs=1e-300)


def test_transform_peak_height():
    d = DriveProfile(1.0, 1000.0)
    assert f_tilde_exact(d, 1.0) == pytest.approx(1000.0, rel=1e-6)


def test_weight_is_constant():
    assert monochromatic_weight(DriveProfile(3.0, 50.0, monochromatic=True)) == math.pi / 2


def test_upsilon_at_zero_frequency():
    assert upsilon(MirrorParams(1.0), 0.0) == 0.0


def test_dirichlet_sides_vanish():
    right_wall = MirrorParams(1.0, 0.0, 1.0, 0.01)
    left_wall = MirrorParams(1.0, 0.0, -1.0, 0.01)
    assert spectrum_monochromatic(right_wall, MONO, Side.MINUS, 0.4) == 0.0
    assert spectrum_general(right_wall, EXACT, Side.MINUS, 0.4) == 0.0
    assert spectrum_general(left_wall, EXACT, Side.PLUS, 0.4) == 0.0
    assert spectrum_via_reflection_form(right_wall, EXACT, Side.MINUS, 0.4) == 0.0
    assert side_ratio(right_wall) == 0.0
    assert side_ratio(MirrorParams(1.0)) == 1.0


def test_theta_boundary():
    assert spectrum_monochromatic(MirrorParams(1.0, epsilon=0.01), MONO, Side.PLUS, 1.0) == 0.0


def test_convergence_example():
    p = MirrorParams(1.0, 0.0, 0.0, 0.01)
    exact = spectrum_general(p, DriveProfile(1.0, 200.0), Side.PLUS, 0.5)
    assert exact == pytest.approx(spectrum_monochromatic(p, MONO, Side.PLUS, 0.5), rel=0.02)


def test_spectrum_grid_examples():
    p = MirrorParams(1.0, 1.0, 0.6, 0.01)
    grid = sample_spectrum(p, MONO, 101)
    flipped = sample_spectrum(p.replace(lambda0=-0.6), MONO, 101)
    np.testing.assert_allclose(flipped.n_total, grid.n_total, rtol=1e-14)
    assert np.all(sample_spectrum(p.replace(epsilon=0.0), MONO, 101).n_total == 0)


def test_quadrature_examples():
    line = integrate(lambda x: x, 0.0, 1.0)
    assert line.value == 0.5 and line.converged and line.abs_error_estimate < 1e-14
    assert integrate(np.sin, 0.0, math.pi).value == pytest.approx(2.0, abs=1e-12)
    assert not integrate(lambda x: np.sin(100 * x), 0.0, 10.0, max_eval=1).converged


def test_totals_examples():
    assert total_number(MirrorParams(1.0, 0.0, 1.0, 0.01), MONO).n_minus == 0.0
    quiet = total_energy(MirrorParams(1.0, epsilon=0.0), MONO)
    assert (quiet.n_plus, quiet.n_minus, quiet.e_plus, quiet.e_minus) == (0.0, 0.0, 0.0, 0.0)


def test_robin_corner_of_the_rate_map():
    # (chi0 = 0, lambda0 = 1) is the perfectly reflecting Robin mirror
    grid = sweep_normalized_rate(1.0, 1.0, AxisRange(0.0, 1.0, 2), AxisRange(0.0, 1.0, 2))
    p = MirrorParams(1.0, 0.0, 1.0, 0.01)
    w = np.linspace(0.0, 1.0, 20_001)
    direct = sum(trapezoid(spectrum_monochromatic(p, MONO, s, w), w) for s in Side) * 2 * math.pi / 0.01**2
    assert grid.values[0, 1] == pytest.approx(direct, rel=1e-7)


def test_peak_is_a_local_maximum_on_the_coarse_scale():
    peak = find_peak()
    assert abs(peak.chi0_star - 3.5) <= 0.5
    for dx in (-0.1, 0.1):
        assert peak.value >= rate_at(1.0, 1.0, peak.chi0_star + dx, 0.0)


def test_cli_spectrum_zero_modulation(capsys):
    assert main(["spectrum", "--monochromatic", "--epsilon", "0", "--n-points", "5", "--format", "json"]) == 0
    samples = json.loads(capsys.readouterr().out)["samples"]
    assert all(s["n_total"] == 0.0 for s in samples)
    assert all(0 < s["omega"] < 1.0 for s in samples)


def test_cli_total_parity(capsys):
    main(["total", "--monochromatic", "--lambda0", "0.4", "--chi0", "1"])
    a = json.loads(capsys.readouterr().out)["totals"]["n_total"]
    main(["total", "--monochromatic", "--lambda0", "-0.4", "--chi0", "1"])
    b = json.loads(capsys.readouterr().out)["totals"]["n_total"]
    assert a == pytest.approx(b, rel=1e-12)


def test_cli_verify_trend(capsys):
    assert main(["verify", "--omega0-tau", "10,1000"]) == 0
    line = [l for l in capsys.readouterr().out.splitlines() if "convergence" in l][0]
    assert line.startswith("[PASS]")


def test_domain_errors_are_raised_not_masked():
    with pytest.raises(DomainError):
        transmission_coefficient(MirrorParams(0.0, 0.0, 1.0), Side.PLUS, 0.0)
