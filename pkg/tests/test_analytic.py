import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinbath import (
    GroupSpec,
    SpinSystem,
    fid_analytic,
    fid_series_analytic,
    hz,
    mode_amplitude,
    preset,
    recursion_metric,
)


def test_mode_noiseless_is_pure_rotation():
    j = hz(2.0)
    for t in (0.0, 0.1, 0.37):
        mode = mode_amplitude(j, 0.0, t)
        assert mode.d0 == pytest.approx(math.cos(0.5 * j * t), abs=1e-14)
        assert mode.dz == pytest.approx(-1j * math.sin(0.5 * j * t), abs=1e-14)


def test_mode_uncoupled_pure_decay():
    mode = mode_amplitude(0.0, 0.8, 1.3)
    assert mode.d0 == pytest.approx(1.0, abs=1e-14)
    assert mode.dz == 0.0


def test_mode_satisfies_ode():
    # central finite difference against the 2x2 generator
    j, gamma, t, h = hz(1.7), 0.6, 0.9, 1e-6
    lo = mode_amplitude(j, gamma, t - h)
    hi = mode_amplitude(j, gamma, t + h)
    mid = mode_amplitude(j, gamma, t)
    dd0 = (hi.d0 - lo.d0) / (2 * h)
    ddz = (hi.dz - lo.dz) / (2 * h)
    assert abs(dd0 - 0.5 * (-1j * j * mid.dz)) < 1e-6
    assert abs(ddz - 0.5 * (-1j * j * mid.d0 - 2 * gamma * mid.dz)) < 1e-6


def test_mode_continuous_at_critical_damping():
    gamma = 1.9
    at = mode_amplitude(gamma, gamma, 0.7)
    for eps in (1e-9, -1e-9):
        near = mode_amplitude(gamma + eps, gamma, 0.7)
        assert abs(near.d0 - at.d0) < 1e-6
        assert abs(near.dz - at.dz) < 1e-6


def test_mode_overdamped_real_and_bounded():
    t = np.linspace(0.0, 20.0, 200)
    mode = mode_amplitude(0.5, 2.0, t)
    assert np.all(np.isfinite(mode.d0))
    assert np.max(np.abs(np.imag(mode.d0))) == 0.0
    assert np.max(np.abs(mode.d0)) <= 1.0 + 1e-12


def test_mode_rejects_bad_inputs():
    with pytest.raises(ValueError):
        mode_amplitude(1.0, -0.1, 0.5)
    with pytest.raises(ValueError):
        mode_amplitude(1.0, 0.1, -0.5)


@given(
    st.floats(min_value=0, max_value=50, allow_nan=False),
    st.floats(min_value=0, max_value=10, allow_nan=False),
)
@settings(max_examples=150, deadline=None)
def test_mode_norm_monotone_nonincreasing(j, gamma):
    t = np.linspace(0.0, 5.0, 400)
    mode = mode_amplitude(j, gamma, t)
    norms = np.abs(mode.d0) ** 2 + np.abs(mode.dz) ** 2
    assert np.all(np.diff(norms) <= 1e-12)
    assert np.max(norms) <= 1.0 + 1e-12


def test_fid_starts_at_one():
    for name in ("tes", "tes-virtual-13c"):
        assert fid_analytic(preset(name), 0.0) == 1.0


def test_fid_noiseless_is_cosine_product():
    system = preset("tes")
    t = 0.231
    ref = math.cos(0.5 * hz(6.42) * t) ** 8 * math.cos(0.5 * hz(0.5) * t) ** 12
    assert fid_analytic(system, t).real == pytest.approx(ref, abs=1e-12)
    assert fid_analytic(system, t).imag == 0.0


def test_fid_group_order_irrelevant():
    a = SpinSystem(groups=(GroupSpec(8, hz(6.42)), GroupSpec(12, hz(0.5))))
    b = SpinSystem(groups=(GroupSpec(12, hz(0.5)), GroupSpec(8, hz(6.42))))
    t = np.linspace(0.0, 3.0, 301)
    assert np.allclose(fid_analytic(a, t), fid_analytic(b, t), rtol=1e-14, atol=0)


def test_fid_dissipative_envelope():
    # lone dissipating center: pure exp(-gamma t / 2)
    system = SpinSystem(center_gamma=0.42, groups=())
    t = np.linspace(0.0, 4.0, 41)
    assert np.allclose(
        fid_analytic(system, t).real, np.exp(-0.21 * t), rtol=0, atol=1e-14
    )


def test_fid_rejects_invalid_system():
    with pytest.raises(ValueError, match="invalid"):
        fid_analytic(SpinSystem(groups=(GroupSpec(0, 1.0),)), 0.1)


def test_series_imaginary_channel_zero():
    series = fid_series_analytic(preset("tes"), np.linspace(0.0, 2.0, 2001))
    assert np.all(series.im == 0.0)
    assert series.provenance == "analytic"


def test_series_rejects_empty_grid():
    with pytest.raises(ValueError):
        fid_series_analytic(preset("tes"), [])


def test_tms_periodicity():
    # noiseless homogeneous coupling: exactly periodic with period 2/j_hz
    system = preset("tms", j_hz=1.0, center_gamma=0.0, group_gammas=(0.0,))
    t = np.linspace(0.0, 2.0, 401)
    a = fid_analytic(system, t)
    b = fid_analytic(system, t + 2.0)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_recursion_metric_tes_window():
    grid = np.arange(0.0, 3.0 + 1e-12, 1e-3)
    tes = recursion_metric(fid_series_analytic(preset("tes"), grid), (0.5, 3.0))
    virt = recursion_metric(
        fid_series_analytic(preset("tes-virtual-13c"), grid), (0.5, 3.0)
    )
    assert virt < tes < 1.0


def test_recursion_metric_full_revival_is_exact_one():
    system = SpinSystem(groups=(GroupSpec(12, hz(1.0)),))
    grid = np.array([0.0, 1.0, 2.0, 3.0])
    series = fid_series_analytic(system, grid)
    assert recursion_metric(series, (0.5, 3.0)) == 1.0


def test_recursion_metric_empty_window_raises():
    series = fid_series_analytic(preset("tes"), np.linspace(0.0, 1.0, 11))
    with pytest.raises(ValueError, match="window"):
        recursion_metric(series, (5.0, 6.0))
