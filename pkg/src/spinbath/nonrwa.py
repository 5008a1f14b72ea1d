"""Strong-coupling (no rotating-wave reduction between near and far
environment qubits) propagation of the per-part operator factor.

One part of the environment carries m near and n far qubits on a
2^(m+n)-dimensional space. Its operator C(t) starts at identity/2^(m+n) and
obeys

    dC/dt = -i {A, C} - i [H_in(t), C] + dissipators,
    A = (J12/4) sum_near sigma_z + (J13/4) sum_far sigma_z,
    H_in(t) = (J23/4) sum_{a,b} sigma_z^a sigma_z^b
              + (J23/2) sum_{a,b} (e^{+i dw t} s+^a s-^b + e^{-i dw t} s-^a s+^b).

The signal is exp(-gamma_c*t/2) * (Tr Re C(t))**P; all P parts are identical,
so only one is ever propagated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, FidSeries, NonRwaSpec, SpinSystem, make_series, validate
from .operators import dissipator, embed, pauli, rk4_propagate, site_bit


@dataclass(frozen=True)
class PartState:
    """Operator factor of one environment part at time t."""

    c: np.ndarray
    t: float


class PartGenerator:
    """Caches the part operators and evaluates dC/dt at a given time.

    Within the part, near qubits occupy sites 0..m-1 and far qubits sites
    m..m+n-1; site 0 is the leftmost tensor factor.
    """

    def __init__(self, spec: NonRwaSpec, j12: float, j13: float, gammas):
        self.spec = spec
        self.j12 = float(j12)
        self.j13 = float(j13)
        self.gamma_near, self.gamma_far = (float(g) for g in gammas)
        if self.gamma_near < 0 or self.gamma_far < 0:
            raise ValueError("dissipation rates must be >= 0")
        L = spec.m + spec.n
        self.n_sites = L
        self.dim = 2**L

        bits = np.array([site_bit(s, L) for s in range(L)], dtype=np.int64)
        idx = np.arange(self.dim)
        zdiag = np.where((idx[None, :] & bits[:, None]) != 0, -1.0, 1.0)
        near = zdiag[: spec.m].sum(axis=0)
        far = zdiag[spec.m :].sum(axis=0)
        self.a_diag = 0.25 * (self.j12 * near + self.j13 * far)
        self.hzz_diag = 0.25 * spec.j23 * (near * far)

        flip = np.zeros((self.dim, self.dim), dtype=complex)
        sp, sm = pauli("+"), pauli("-")
        for a in range(spec.m):
            for b in range(spec.m, L):
                flip += embed(sp, a, L) @ embed(sm, b, L)
        self.flip_up = flip
        self.flip_down = flip.conj().T
        self.site_bits = bits
        self.site_gammas = np.array(
            [self.gamma_near] * spec.m + [self.gamma_far] * spec.n
        )

    def interaction(self, t: float) -> np.ndarray:
        """H_in(t) for this part."""
        z = 0.5 * self.spec.j23 * np.exp(1j * self.spec.delta_omega * t)
        return (
            np.diag(self.hzz_diag).astype(complex)
            + z * self.flip_up
            + np.conj(z) * self.flip_down
        )

    def initial(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex) / self.dim

    def __call__(self, t: float, c: np.ndarray) -> np.ndarray:
        if c.shape != (self.dim, self.dim):
            raise ValueError(
                f"operator must be {self.dim}x{self.dim}, got {c.shape}"
            )
        z = 0.5 * self.spec.j23 * np.exp(1j * self.spec.delta_omega * t)
        f = z * self.flip_up + np.conj(z) * self.flip_down
        d1 = self.hzz_diag + self.a_diag
        d2 = self.hzz_diag - self.a_diag
        r = -1j * ((d1[:, None] * c + f @ c) - (c * d2[None, :] + c @ f))
        for s in range(self.n_sites):
            g = self.site_gammas[s]
            if g > 0:
                r = r + dissipator(g, s, c)
        return r

    def max_step(self) -> float:
        """Largest step that still resolves the fastest phase in the generator."""
        fastest = max(
            abs(self.spec.delta_omega), abs(self.spec.j23), abs(self.j12)
        )
        if fastest == 0:
            return np.inf
        return 0.01 * TWO_PI / fastest


def nonrwa_generator(spec: NonRwaSpec, j12, j13, gammas, t, c) -> np.ndarray:
    """dC/dt for one part; convenience wrapper that rebuilds the cached
    operators on every call."""
    return PartGenerator(spec, j12, j13, gammas)(t, np.asarray(c, dtype=complex))


def _uniform_stride(t_grid: np.ndarray, h: float) -> int:
    dts = np.diff(t_grid)
    dt = dts[0]
    if np.any(np.abs(dts - dt) > 1e-12 * dt):
        raise ValueError("time grid must be uniform")
    stride = int(round(dt / h))
    if stride < 1 or abs(stride * h - dt) > 1e-12 * max(dt, h):
        raise ValueError(f"step {h} does not divide grid spacing {dt}")
    return stride


def _kernel_evolve(gen: PartGenerator, t_grid: np.ndarray, h: float) -> np.ndarray:
    from ._kernels import rk4_evolve

    stride = _uniform_stride(t_grid, h)
    s1 = np.diag(gen.hzz_diag + gen.a_diag).astype(complex)
    s2 = np.diag(gen.hzz_diag - gen.a_diag).astype(complex)
    out, bad = rk4_evolve(
        gen.initial(),
        float(t_grid[0]),
        float(h),
        stride,
        t_grid.size,
        s1,
        s2,
        gen.flip_up,
        gen.flip_down,
        0.5 * gen.spec.j23,
        gen.spec.delta_omega,
        gen.site_gammas,
        gen.site_bits,
        True,
    )
    if bad >= 0:
        raise FloatingPointError(f"non-finite state after step {bad}")
    return out


def evolve_part(
    spec: NonRwaSpec,
    j12: float,
    j13: float,
    gammas,
    t_grid,
    h: float,
    engine: str = "auto",
) -> list[PartState]:
    """Propagate one part on ``t_grid`` (must start at 0) with internal step
    ``h``. ``engine`` selects the compiled ("numba") or plain ("numpy")
    integrator; both evaluate the identical scheme."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    gen = PartGenerator(spec, j12, j13, gammas)
    if h > gen.max_step() * (1 + 1e-12):
        raise ValueError(
            f"step {h} too coarse: must be <= {gen.max_step():.3e} s to "
            "resolve the fastest generator phase"
        )
    if engine == "numpy":
        samples = rk4_propagate(gen, gen.initial(), t_grid, h)
    elif engine in ("auto", "numba"):
        samples = _kernel_evolve(gen, t_grid, h)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return [PartState(samples[i], float(t_grid[i])) for i in range(t_grid.size)]


def fid_nonrwa(
    system: SpinSystem, t_grid, h: float | None = None, engine: str = "auto"
) -> FidSeries:
    """Signal of the partitioned strong-coupling model on ``t_grid``.

    The real channel holds the signal; the imaginary channel records the
    (ideally zero) imaginary part of the per-part trace as a diagnostic.
    """
    problems = validate(system)
    if problems:
        raise ValueError("invalid system: " + "; ".join(problems))
    nr = system.nonrwa
    if nr is None:
        raise ValueError("system has no nonrwa partition")
    if len(system.groups) != 2:
        raise ValueError("nonrwa signal needs exactly two groups (near, far)")
    g_near, g_far = system.groups
    if g_near.count != nr.parts * nr.m or g_far.count != nr.parts * nr.n:
        raise ValueError(
            "group counts must equal parts*m (near) and parts*n (far)"
        )
    t_grid = np.asarray(t_grid, dtype=float)
    gen = PartGenerator(nr, g_near.j_center, g_far.j_center, (g_near.gamma, g_far.gamma))
    if h is None:
        dt = float(np.diff(t_grid)[0]) if t_grid.size > 1 else 1e-3
        target = min(1e-4, gen.max_step())
        h = dt / int(np.ceil(dt / target))
    states = evolve_part(
        nr,
        g_near.j_center,
        g_far.j_center,
        (g_near.gamma, g_far.gamma),
        t_grid,
        h,
        engine,
    )
    traces = np.array([np.trace(st.c) for st in states])
    tau = np.real(traces)
    signal = np.exp(-system.center_gamma * 0.5 * t_grid) * tau**nr.parts
    return make_series(t_grid, signal, np.imag(traces), "nonrwa", system)
