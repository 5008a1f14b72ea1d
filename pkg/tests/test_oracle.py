import numpy as np
import pytest

from spinbath import (
    DensityMatrix,
    FullFrameSpec,
    GroupSpec,
    NonRwaSpec,
    SpinSystem,
    build_hamiltonian,
    evolve_gksl,
    expectation_sigma_x,
    expectation_sigma_y,
    fid_analytic,
    fid_series_oracle,
    hz,
    initial_state,
    preset,
    rwa_discrepancy,
)
from spinbath.oracle import InvariantViolation, _check_invariants, default_step
from spinbath.operators import embed, pauli


def single_group(count, j_hz, center_gamma=0.0, gamma=0.0):
    return SpinSystem(
        center_gamma=center_gamma, groups=(GroupSpec(count, hz(j_hz), gamma),)
    )


def test_initial_state_single_qubit():
    dm = initial_state(1)
    assert np.allclose(dm.rho, 0.5 * np.array([[1, 1], [1, 1]]))


def test_initial_state_properties():
    dm = initial_state(4)
    assert np.trace(dm.rho) == pytest.approx(1.0, abs=1e-14)
    assert expectation_sigma_x(dm) == pytest.approx(1.0, abs=1e-14)
    assert expectation_sigma_y(dm) == pytest.approx(0.0, abs=1e-14)


def test_initial_state_respects_cap():
    with pytest.raises(ValueError, match="n_qubits"):
        initial_state(8)
    with pytest.raises(ValueError, match="n_qubits"):
        initial_state(0)


def test_oracle_rejects_oversized_system():
    with pytest.raises(ValueError, match="cap"):
        build_hamiltonian(single_group(7, 1.0), FullFrameSpec(frame="rwa"))


def test_rwa_hamiltonian_two_qubits():
    j = hz(3.0)
    ham = build_hamiltonian(
        SpinSystem(groups=(GroupSpec(1, j),)), FullFrameSpec(frame="rwa")
    )
    assert np.allclose(ham, 0.25 * j * np.diag([1.0, -1.0, -1.0, 1.0]))


def test_lab_hamiltonian_is_heisenberg_plus_zeeman():
    j = hz(3.0)
    spec = FullFrameSpec(hz(400.0), (hz(395.0),), "lab")
    ham = build_hamiltonian(SpinSystem(groups=(GroupSpec(1, j),)), spec)
    n = 2
    ref = 0.5 * hz(400.0) * embed(pauli("z"), 0, n)
    ref = ref + 0.5 * hz(395.0) * embed(pauli("z"), 1, n)
    for mu in ("x", "y", "z"):
        ref = ref + 0.25 * j * embed(pauli(mu), 0, n) @ embed(pauli(mu), 1, n)
    assert np.allclose(ham, ref)


def test_lab_frame_requires_frequencies():
    with pytest.raises(ValueError, match="frequency|frequencies"):
        build_hamiltonian(single_group(1, 3.0), FullFrameSpec(frame="lab"))


def test_unknown_frame_rejected():
    with pytest.raises(ValueError, match="frame"):
        build_hamiltonian(single_group(1, 3.0), FullFrameSpec(frame="dressed"))


def test_hamiltonian_hermitian_all_frames():
    system = SpinSystem(
        groups=(GroupSpec(1, hz(6.42)), GroupSpec(1, hz(0.5))),
        nonrwa=NonRwaSpec(1, 1, 1, hz(8.02), hz(24.8)),
    )
    frames = [
        FullFrameSpec(frame="rwa"),
        FullFrameSpec(hz(100.0), (hz(99.0), hz(98.0)), "lab"),
        FullFrameSpec(frame="rotating-nonrwa"),
    ]
    for spec in frames:
        for t in (0.0, 0.0123):
            ham = build_hamiltonian(system, spec, t)
            assert np.max(np.abs(ham - ham.conj().T)) < 1e-12


def test_default_step_tracks_fastest_scale():
    slow = single_group(2, 0.5)
    assert default_step(slow, FullFrameSpec(frame="rwa")) == 1e-4
    fast = single_group(2, 1e4)
    h = default_step(fast, FullFrameSpec(frame="rwa"))
    assert h == pytest.approx(0.01 / hz(1e4))


def test_closed_evolution_preserves_purity():
    system = single_group(2, 2.7)
    grid = np.linspace(0.0, 1.0, 11)
    states = evolve_gksl(system, FullFrameSpec(frame="rwa"), grid)
    p0 = np.trace(states[0].rho @ states[0].rho).real
    p1 = np.trace(states[-1].rho @ states[-1].rho).real
    assert abs(p1 - p0) < 1e-8


def test_oracle_matches_closed_form_noiseless():
    system = single_group(2, 2.7)
    grid = np.linspace(0.0, 2.0, 201)
    series = fid_series_oracle(system, FullFrameSpec(frame="rwa"), grid, h=1e-4)
    ref = np.real(fid_analytic(system, grid))
    assert np.max(np.abs(series.re - ref)) < 1e-8


def test_oracle_matches_closed_form_dissipative():
    system = single_group(2, 2.7, center_gamma=0.21, gamma=0.1)
    grid = np.linspace(0.0, 2.0, 101)
    series = fid_series_oracle(system, FullFrameSpec(frame="rwa"), grid, h=1e-4)
    ref = np.real(fid_analytic(system, grid))
    assert np.max(np.abs(series.re - ref)) < 1e-6


def test_sigma_y_channel_stays_dark():
    system = single_group(2, 2.7, gamma=0.3)
    grid = np.linspace(0.0, 1.0, 51)
    series = fid_series_oracle(system, FullFrameSpec(frame="rwa"), grid)
    assert np.max(np.abs(series.im)) < 1e-8


def test_engines_agree():
    system = single_group(2, 2.7, gamma=0.3)
    grid = np.linspace(0.0, 0.2, 5)
    a = evolve_gksl(system, FullFrameSpec(frame="rwa"), grid, h=1e-4, engine="numpy")
    b = evolve_gksl(system, FullFrameSpec(frame="rwa"), grid, h=1e-4, engine="numba")
    for sa, sb in zip(a, b):
        assert np.max(np.abs(sa.rho - sb.rho)) < 1e-13


def test_invariant_checks_fire():
    dim = 4
    bad_trace = np.eye(dim) / dim * 1.5
    with pytest.raises(InvariantViolation, match="trace"):
        _check_invariants(bad_trace.astype(complex), 0.1, with_eigs=False)
    bad_herm = np.eye(dim, dtype=complex) / dim
    bad_herm[0, 1] = 1e-3
    with pytest.raises(InvariantViolation, match="hermiticity"):
        _check_invariants(bad_herm, 0.2, with_eigs=False)
    bad_eig = np.diag([0.6, 0.5, -0.1, 0.0]).astype(complex)
    with pytest.raises(InvariantViolation, match="eigenvalue"):
        _check_invariants(bad_eig, 0.3, with_eigs=True)


def test_expectations_on_handmade_states():
    rho = embed(0.5 * (pauli("0") + pauli("y")), 0, 2) / 2
    dm = DensityMatrix(rho, 0.0)
    assert expectation_sigma_x(dm) == pytest.approx(0.0, abs=1e-14)
    assert expectation_sigma_y(dm) == pytest.approx(1.0, abs=1e-14)


def test_nonrwa_frame_matches_part_solver_layout():
    # 1 part of (1 near, 1 far): 3 qubits total
    system = SpinSystem(
        groups=(GroupSpec(1, hz(6.42)), GroupSpec(1, hz(0.5))),
        nonrwa=NonRwaSpec(1, 1, 1, hz(8.02), hz(24.8)),
    )
    grid = np.linspace(0.0, 0.5, 26)
    series = fid_series_oracle(
        system, FullFrameSpec(frame="rotating-nonrwa"), grid, h=1e-4
    )
    from spinbath import fid_nonrwa

    ref = fid_nonrwa(system, grid, h=1e-4)
    assert np.max(np.abs(series.re - ref.re)) < 1e-8


def test_rwa_discrepancy_vanishes_uncoupled():
    system = single_group(1, 0.0)
    freqs = FullFrameSpec(hz(50.0), (hz(49.0),))
    grid = np.linspace(0.0, 0.5, 26)
    dev = rwa_discrepancy(system, freqs, grid, h=1e-5)
    assert dev < 1e-9


def test_rwa_discrepancy_shrinks_with_detuning_scale():
    system = single_group(1, 2.0)
    grid = np.linspace(0.0, 1.0, 101)

    def dev(ratio):
        # center-environment detuning of ratio * J
        freqs = FullFrameSpec(hz(1.0) + ratio * hz(2.0), (hz(1.0),))
        return rwa_discrepancy(system, freqs, grid, h=5e-6)

    assert dev(200.0) < dev(20.0)
