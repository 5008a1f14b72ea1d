"""Brute-force full-Hilbert-space integration for small systems.

This is the independent ground truth: it builds the requested Hamiltonian
(lab-frame Heisenberg couplings, rotating-frame zz form, or the rotating
frame with time-dependent flip-flop terms), integrates the Liouville-von
Neumann / GKSL equation with RK4 on the density matrix directly, and extracts
the central-qubit transverse signal.

Qubit ordering: the central qubit is tensor factor 0, followed by the
environment groups in declaration order. When the strong-coupling partition
is in play, the environment is laid out part by part, near qubits before far
qubits within each part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    ORACLE_QUBIT_CAP,
    FidSeries,
    FullFrameSpec,
    SpinSystem,
    make_series,
    validate,
)
from .operators import embed, pauli, rk4_propagate, site_bit

TRACE_TOL = 1e-9
HERMITICITY_TOL = 1e-10
MIN_EIGENVALUE = -1e-8


class InvariantViolation(RuntimeError):
    """A density-matrix invariant failed during propagation."""

    def __init__(self, t: float, message: str):
        self.t = t
        super().__init__(f"at t = {t}: {message}")


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray
    t: float


def initial_state(n_qubits: int) -> DensityMatrix:
    """(identity + sigma_x)/2 on the central qubit, maximally mixed
    environment; unit trace and unit sigma_x expectation."""
    if not 1 <= n_qubits <= ORACLE_QUBIT_CAP:
        raise ValueError(
            f"n_qubits must be in [1, {ORACLE_QUBIT_CAP}], got {n_qubits}"
        )
    center = 0.5 * (pauli("0") + pauli("x"))
    rho = embed(center, 0, n_qubits) / 2 ** (n_qubits - 1)
    return DensityMatrix(rho, 0.0)


def _env_sites(system: SpinSystem, frame: str):
    """Per-environment-site (coupling, gamma, group index) in layout order."""
    nr = system.nonrwa
    if frame == "rotating-nonrwa" or (nr is not None and len(system.groups) == 2):
        if nr is None:
            raise ValueError("rotating-nonrwa frame requires a nonrwa partition")
        near, far = system.groups
        sites = []
        for _ in range(nr.parts):
            sites += [(near.j_center, near.gamma, 0)] * nr.m
            sites += [(far.j_center, far.gamma, 1)] * nr.n
        return sites
    sites = []
    for gi, g in enumerate(system.groups):
        sites += [(g.j_center, g.gamma, gi)] * g.count
    return sites


def _part_pairs(system: SpinSystem):
    """(near_site, far_site) environment index pairs within each part."""
    nr = system.nonrwa
    pairs = []
    for p in range(nr.parts):
        base = p * (nr.m + nr.n)
        for a in range(base, base + nr.m):
            for b in range(base + nr.m, base + nr.m + nr.n):
                pairs.append((a, b))
    return pairs


def _hamiltonian_parts(system: SpinSystem, frame_spec: FullFrameSpec):
    """Decompose H(t) = static + z(t) P + conj(z) P^dag, z = c*exp(i*dw*t)."""
    problems = validate(system)
    if problems:
        raise ValueError("invalid system: " + "; ".join(problems))
    frame = frame_spec.frame
    if frame not in ("lab", "rwa", "rotating-nonrwa"):
        raise ValueError(f"unknown frame {frame!r}")
    n = system.n_qubits
    if n > ORACLE_QUBIT_CAP:
        raise ValueError(
            f"{n} qubits exceeds the oracle cap of {ORACLE_QUBIT_CAP}"
        )
    sites = _env_sites(system, frame)
    dim = 2**n
    static = np.zeros((dim, dim), dtype=complex)
    flip = np.zeros((dim, dim), dtype=complex)
    coeff = 0.0
    delta_omega = 0.0
    nr = system.nonrwa

    sz = [embed(pauli("z"), s, n) for s in range(n)]
    if frame == "lab":
        if not np.all(np.isfinite([frame_spec.omega_center, *frame_spec.omega_groups])):
            raise ValueError("lab frame requires finite resonance frequencies")
        if len(frame_spec.omega_groups) != len(system.groups):
            raise ValueError("lab frame needs one frequency per group")
        static += 0.5 * frame_spec.omega_center * sz[0]
        for k, (_, _, gi) in enumerate(sites):
            static += 0.5 * frame_spec.omega_groups[gi] * sz[k + 1]
        paulis = [
            [embed(pauli(mu), s, n) for s in range(n)] for mu in ("x", "y", "z")
        ]
        for k, (j, _, _) in enumerate(sites):
            for ps in paulis:
                static += 0.25 * j * ps[0] @ ps[k + 1]
        if nr is not None and len(system.groups) == 2:
            for a, b in _part_pairs(system):
                for ps in paulis:
                    static += 0.25 * nr.j23 * ps[a + 1] @ ps[b + 1]
    elif frame == "rwa":
        for k, (j, _, _) in enumerate(sites):
            static += 0.25 * j * sz[0] @ sz[k + 1]
        if nr is not None and len(system.groups) == 2:
            for a, b in _part_pairs(system):
                static += 0.25 * nr.j23 * sz[a + 1] @ sz[b + 1]
    else:  # rotating-nonrwa
        for k, (j, _, _) in enumerate(sites):
            static += 0.25 * j * sz[0] @ sz[k + 1]
        sp = [embed(pauli("+"), s, n) for s in range(n)]
        sm = [embed(pauli("-"), s, n) for s in range(n)]
        for a, b in _part_pairs(system):
            static += 0.25 * nr.j23 * sz[a + 1] @ sz[b + 1]
            flip += sp[a + 1] @ sm[b + 1]
        coeff = 0.5 * nr.j23
        delta_omega = nr.delta_omega

    gammas = np.array([system.center_gamma] + [g for _, g, _ in sites])
    bits = np.array([site_bit(s, n) for s in range(n)], dtype=np.int64)
    return static, flip, coeff, delta_omega, gammas, bits


def build_hamiltonian(
    system: SpinSystem, frame_spec: FullFrameSpec, t: float = 0.0
) -> np.ndarray:
    """Assembled Hamiltonian matrix at time ``t``."""
    static, flip, coeff, dw, _, _ = _hamiltonian_parts(system, frame_spec)
    if coeff == 0.0:
        return static
    z = coeff * np.exp(1j * dw * t)
    return static + z * flip + np.conj(z) * flip.conj().T


def _max_frequency(system, frame_spec, static) -> float:
    scales = [abs(g.j_center) for g in system.groups]
    if system.nonrwa is not None:
        scales += [abs(system.nonrwa.j23), abs(system.nonrwa.delta_omega)]
    if frame_spec.frame == "lab":
        scales += [abs(frame_spec.omega_center)]
        scales += [abs(w) for w in frame_spec.omega_groups]
    return max(scales) if scales else 0.0


def default_step(system: SpinSystem, frame_spec: FullFrameSpec) -> float:
    """min(1e-4 s, 0.01/omega_max) for the requested generator."""
    wmax = _max_frequency(system, frame_spec, None)
    return min(1e-4, 0.01 / wmax) if wmax > 0 else 1e-4


def _check_invariants(rho: np.ndarray, t: float, with_eigs: bool) -> None:
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvariantViolation(t, f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise InvariantViolation(t, f"hermiticity defect {herm:.3e}")
    if with_eigs:
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < MIN_EIGENVALUE:
            raise InvariantViolation(t, f"negative eigenvalue {lo:.3e}")


def evolve_gksl(
    system: SpinSystem,
    frame_spec: FullFrameSpec,
    t_grid,
    h: float | None = None,
    engine: str = "auto",
    check_every: int = 10,
) -> list[DensityMatrix]:
    """GKSL propagation of the full density matrix, with trace/Hermiticity
    checks at every emitted sample and a positivity (eigenvalue) check every
    ``check_every``-th sample. Aborts at the first offending time."""
    t_grid = np.asarray(t_grid, dtype=float)
    static, flip, coeff, dw, gammas, bits = _hamiltonian_parts(system, frame_spec)
    if h is None:
        h = default_step(system, frame_spec)
        if t_grid.size > 1:
            dt = float(t_grid[1] - t_grid[0])
            h = dt / int(np.ceil(dt / h))
    rho0 = initial_state(system.n_qubits).rho

    if engine == "numpy":
        flip_dag = flip.conj().T
        n = system.n_qubits
        from .operators import dissipator

        def rhs(t, rho):
            ham = static
            if coeff != 0.0:
                z = coeff * np.exp(1j * dw * t)
                ham = static + z * flip + np.conj(z) * flip_dag
            out = -1j * (ham @ rho - rho @ ham)
            for s in range(n):
                if gammas[s] > 0:
                    out = out + dissipator(gammas[s], s, rho)
            return out

        samples = rk4_propagate(rhs, rho0, t_grid, h)
    elif engine in ("auto", "numba"):
        from ._kernels import rk4_evolve
        from .nonrwa import _uniform_stride

        stride = _uniform_stride(t_grid, h)
        samples, bad = rk4_evolve(
            rho0,
            float(t_grid[0]),
            float(h),
            stride,
            t_grid.size,
            static,
            static,
            flip,
            flip.conj().T,
            coeff,
            dw,
            gammas,
            bits,
            False,
        )
        if bad >= 0:
            raise FloatingPointError(f"non-finite state after step {bad}")
    else:
        raise ValueError(f"unknown engine {engine!r}")

    out = []
    for i, t in enumerate(t_grid):
        rho = samples[i]
        _check_invariants(rho, float(t), with_eigs=(i % check_every == 0))
        out.append(DensityMatrix(rho, float(t)))
    return out


def _center_op_expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    n = rho.shape[0].bit_length() - 1
    full = embed(op, 0, n)
    return complex(np.sum(full.T * rho))


def expectation_sigma_x(dm: DensityMatrix) -> float:
    """Tr(sigma_x^(0) rho); the transverse signal of the central qubit."""
    return float(np.real(_center_op_expectation(pauli("x"), dm.rho)))


def expectation_sigma_y(dm: DensityMatrix) -> float:
    """Diagnostic channel: stays below 1e-8 in all rotating-frame runs."""
    return float(np.real(_center_op_expectation(pauli("y"), dm.rho)))


def fid_series_oracle(
    system: SpinSystem,
    frame_spec: FullFrameSpec,
    t_grid,
    h: float | None = None,
    engine: str = "auto",
) -> FidSeries:
    """Signal series via brute-force propagation; the imaginary channel
    carries the sigma_y expectation."""
    states = evolve_gksl(system, frame_spec, t_grid, h, engine)
    re = np.array([expectation_sigma_x(dm) for dm in states])
    im = np.array([expectation_sigma_y(dm) for dm in states])
    return make_series(np.asarray(t_grid, float), re, im, "oracle", system)


def rwa_discrepancy(
    system: SpinSystem,
    full_freqs: FullFrameSpec,
    t_grid,
    h: float | None = None,
    engine: str = "auto",
) -> float:
    """max_t |S_lab - S_rwa|: the lab-frame signal is demodulated at the
    central resonance (coherence times exp(i*omega_0*t)) before comparison."""
    t_grid = np.asarray(t_grid, dtype=float)
    lab_spec = FullFrameSpec(
        full_freqs.omega_center, full_freqs.omega_groups, "lab"
    )
    lab = evolve_gksl(system, lab_spec, t_grid, h, engine)
    sm = pauli("-")
    coherence = np.array([2.0 * _center_op_expectation(sm, dm.rho) for dm in lab])
    demod = np.real(coherence * np.exp(1j * full_freqs.omega_center * t_grid))

    rwa = fid_series_oracle(system, FullFrameSpec(frame="rwa"), t_grid, engine=engine)
    return float(np.max(np.abs(demod - rwa.re)))
