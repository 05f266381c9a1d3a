import math

import numpy as np
import pytest

from pcbs.bands import (
    CrystalSpec,
    band_frequencies,
    dispersion_residual,
    group_velocity,
    solve_band,
    tune_to_group_velocity,
)
from pcbs.errors import InsufficientScanError, UnachievableTargetError
from pcbs.source import CODATA

SPEC = CrystalSpec()
LAM = SPEC.period
SCALE = 2.0 * math.pi * CODATA.c / LAM   # rad/s per unit dimensionless frequency

# zone-center edges of bands 4 and 8 (dimensionless omega * Lambda / (2 pi c))
BAND4_EDGE_ZC = 1.1840200989104475
BAND4_EDGE_ZB = 0.9502546322323061
BAND8_EDGE_ZC = 2.408031012714462
BAND8_EDGE_ZB = 2.2086669290571783


def test_crystal_spec_validation():
    with pytest.raises(ValueError):
        CrystalSpec(l_a=0.0)
    with pytest.raises(ValueError):
        CrystalSpec(l_b=-1e-9)
    with pytest.raises(ValueError):
        CrystalSpec(eps_rel_b=0.5)
    assert SPEC.period == pytest.approx(1.1e-6, rel=1e-15)


def test_residual_zero_at_origin():
    assert dispersion_residual(SPEC, 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        dispersion_residual(SPEC, -1.0, 0.0)


def test_band_edges_frozen():
    w = band_frequencies(SPEC, 0.0, 8) / SCALE
    assert np.isclose(w[3], BAND4_EDGE_ZC, rtol=1e-12)
    assert np.isclose(w[7], BAND8_EDGE_ZC, rtol=1e-12)
    wpi = band_frequencies(SPEC, math.pi / LAM, 8) / SCALE
    assert np.isclose(wpi[3], BAND4_EDGE_ZB, rtol=1e-12)
    assert np.isclose(wpi[7], BAND8_EDGE_ZB, rtol=1e-12)
    assert np.all(np.diff(w) > 0) and np.all(np.diff(wpi) > 0)


def test_signal_wavelength_near_927nm():
    lam_s = 2.0 * math.pi * CODATA.c / (BAND4_EDGE_ZC * SCALE)
    assert abs(lam_s - 9.27e-7) / 9.27e-7 < 0.005


def test_doubled_signal_frequency_inside_band_8():
    # the pump at twice the band-4 zone-center frequency propagates in band 8
    w_pump = 2.0 * BAND4_EDGE_ZC
    assert BAND8_EDGE_ZB < w_pump < BAND8_EDGE_ZC
    assert np.isclose(w_pump, 2.368040197820895, rtol=1e-12)


def test_group_velocity_frozen_point():
    vg = group_velocity(SPEC, 4, 4.33e-3 / LAM)
    assert np.isclose(vg / CODATA.c, 0.0045892614283261695, rtol=1e-10)
    assert abs(vg / CODATA.c - 4.59e-3) / 4.59e-3 < 0.001


def test_group_velocity_zero_at_zone_center():
    assert group_velocity(SPEC, 4, 0.0) == 0.0


def test_band_one_origin_is_static_medium():
    # omega -> 0: velocity of the volume-averaged permittivity
    static = CODATA.c / math.sqrt(
        (SPEC.l_a * SPEC.eps_rel_a + SPEC.l_b * SPEC.eps_rel_b) / LAM)
    assert group_velocity(SPEC, 1, 0.0) == static
    assert np.isclose(group_velocity(SPEC, 1, 1e-4 / LAM), static, rtol=1e-8)
    sol = solve_band(SPEC, 1, n_samples=9)
    assert sol.samples[0][2] == static
    vgs = [s[2] for s in sol.samples]
    assert np.all(np.diff(vgs) < 0) and vgs[-1] == 0.0


def test_tune_band_one():
    rep = tune_to_group_velocity(SPEC, 1, 0.3 * CODATA.c)
    assert rep.k_star == 0.0     # zone center is already faster
    with pytest.raises(UnachievableTargetError):
        tune_to_group_velocity(SPEC, 1, 0.59 * CODATA.c)


def test_tune_deep_slow_light():
    rep = tune_to_group_velocity(SPEC, 4, 1e-6 * CODATA.c)
    assert np.isclose(group_velocity(SPEC, 4, rep.k_star) / CODATA.c, 1e-6, rtol=1e-9)


@pytest.mark.parametrize("band", [1, 2, 4, 8])
@pytest.mark.parametrize("q", [0.3, 1.0, 2.0, 3.0])
def test_group_velocity_matches_finite_differences(band, q):
    k = q / LAM
    h = 1e-6 * math.pi / LAM
    vg = group_velocity(SPEC, band, k)
    om = band_frequencies(SPEC, k + h, band)[band - 1], band_frequencies(SPEC, k - h, band)[band - 1]
    vg_fd = abs(om[0] - om[1]) / (2.0 * h)
    assert abs(vg - vg_fd) / vg_fd < 1e-6


def test_solve_band_samples_on_dispersion():
    sol = solve_band(SPEC, 4, n_samples=25)
    assert sol.band_index == 4
    assert len(sol.samples) == 25
    assert np.isclose(sol.edges[0] / SCALE, BAND4_EDGE_ZC, rtol=1e-12)
    assert np.isclose(sol.edges[1] / SCALE, BAND4_EDGE_ZB, rtol=1e-12)
    omegas = [s[1] for s in sol.samples]
    assert np.all(np.diff(omegas) < 0)          # band 4 bends downward
    for k, omega, _ in sol.samples:
        assert abs(dispersion_residual(SPEC, omega, k)) < 1e-9


def test_band_gap_has_no_solutions():
    # no (omega, k) root between band 4's upper and band 5's lower edge
    w5 = band_frequencies(SPEC, 0.0, 5)[4] / SCALE
    grid = np.linspace(BAND4_EDGE_ZC * 1.0001, w5 * 0.9999, 400) * SCALE
    for k in (0.0, math.pi / LAM):
        res = np.array([dispersion_residual(SPEC, w, k) for w in grid])
        assert np.all(res < 0.0) or np.all(res > 0.0)


def test_tune_frozen_report():
    rep = tune_to_group_velocity(SPEC, 4, 4.59e-3 * CODATA.c)
    assert np.isclose(rep.k_star * LAM, 0.004330696888961764, rtol=1e-8)
    assert np.isclose(rep.delta_nu, 431116939.70807433, rtol=1e-8)
    assert np.isclose(rep.nu_s, 322691177976151.0, rtol=1e-12)
    assert np.isclose(rep.delta_omega, 2.0 * math.pi * rep.delta_nu, rtol=1e-12)
    assert rep.target_vg_over_c == 4.59e-3
    # shift from the edge is a ppm-scale detuning
    assert 1e-7 < rep.delta_nu / rep.nu_s < 1e-5


def test_tune_zero_target_is_the_edge():
    rep = tune_to_group_velocity(SPEC, 4, 0.0)
    assert rep.k_star == 0.0 and rep.delta_omega == 0.0 and rep.delta_nu == 0.0
    assert np.isclose(rep.nu_s, 322691177976151.0, rtol=1e-12)


def test_tune_unreachable_target():
    with pytest.raises(UnachievableTargetError):
        tune_to_group_velocity(SPEC, 4, 0.9 * CODATA.c)


def test_zone_and_index_validation():
    with pytest.raises(ValueError):
        band_frequencies(SPEC, 1.5 * math.pi / LAM, 2)
    with pytest.raises(ValueError):
        band_frequencies(SPEC, 0.0, 0)
    with pytest.raises(ValueError):
        group_velocity(SPEC, 0, 0.1 / LAM)
    with pytest.raises(ValueError):
        tune_to_group_velocity(SPEC, 4, -1.0)


def test_vacuum_crystal_is_free_space():
    vac = CrystalSpec(eps_rel_a=1.0, eps_rel_b=1.0)
    k = 0.7 * math.pi / LAM
    assert np.isclose(band_frequencies(vac, k, 1)[0], CODATA.c * k, rtol=1e-14)
    assert group_velocity(vac, 1, k) == CODATA.c
    empty = CrystalSpec(l_b=0.0)
    assert group_velocity(empty, 3, k) == CODATA.c


def test_homogeneous_medium_velocity():
    med = CrystalSpec(eps_rel_a=4.0, eps_rel_b=4.0)
    k = 0.3 * math.pi / LAM
    assert np.isclose(group_velocity(med, 2, k), CODATA.c / 2.0, rtol=1e-14)
    rep = tune_to_group_velocity(med, 1, CODATA.c / 2.0)
    assert rep.k_star == 0.0
    with pytest.raises(UnachievableTargetError):
        tune_to_group_velocity(med, 1, 0.3 * CODATA.c)


@pytest.mark.parametrize("delta", [0.2, 0.05, 0.01])
def test_weak_contrast_approaches_free_space(delta):
    sp = CrystalSpec(eps_rel_b=1.0 + delta)
    k = 1.0 / LAM
    om = band_frequencies(sp, k, 1)[0]
    assert abs(om - CODATA.c * k) / (CODATA.c * k) < delta / 3.0


def test_undetectable_gaps_raise():
    # contrast so small every gap falls between scan points at any density
    sp = CrystalSpec(eps_rel_b=1.0 + 1e-8)
    with pytest.raises(InsufficientScanError):
        band_frequencies(sp, 0.1 / LAM, 2)
