"""Domain types for spin systems: environment groups, dissipation rates, presets.

Frequency convention: couplings are stored as angular frequencies in rad/s.
Configuration files and preset arguments take values in Hz; the conversion is a
single multiplication by 2*pi. Dissipation rates are plain rates in 1/s, used
directly in the decay envelopes exp(-gamma*t/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

TWO_PI = 2.0 * math.pi

#: Maximum number of qubits the brute-force oracle will materialize.
ORACLE_QUBIT_CAP = 7

PRESET_NAMES = ("tms", "tes", "tes-virtual-13c", "tes-lowfield")

VALID_FRAMES = ("lab", "rwa", "rotating-nonrwa")


def hz(value: float) -> float:
    """Convert a frequency in Hz to angular rad/s."""
    return value * TWO_PI


def to_hz(angular: float) -> float:
    """Convert rad/s back to Hz, adjusted by at most 1 ulp so that
    ``hz(to_hz(x)) == x`` whenever ``x`` is in the image of :func:`hz`."""
    h = angular / TWO_PI
    if h * TWO_PI == angular:
        return h
    for cand in (math.nextafter(h, math.inf), math.nextafter(h, -math.inf)):
        if cand * TWO_PI == angular:
            return cand
    return h


@dataclass(frozen=True)
class GroupSpec:
    """One homogeneous environment group: ``count`` identical qubits, each
    coupled to the central qubit with strength ``j_center`` (rad/s) and
    individually dissipating at rate ``gamma`` (1/s)."""

    count: int
    j_center: float
    gamma: float = 0.0
    label: str = ""


@dataclass(frozen=True)
class NonRwaSpec:
    """Partition of the environment into ``parts`` identical blocks of ``m``
    near and ``n`` far qubits, with intra-block coupling ``j23`` and resonance
    offset ``delta_omega`` between near and far qubits (both rad/s)."""

    parts: int
    m: int
    n: int
    j23: float
    delta_omega: float


@dataclass(frozen=True)
class FullFrameSpec:
    """Resonance frequencies needed by the brute-force oracle.

    ``omega_groups`` carries one frequency per environment group, in group
    declaration order. ``frame`` selects the Hamiltonian assembled by the
    oracle: full lab-frame Heisenberg couplings, the zz-only rotating-frame
    form, or the rotating frame that keeps time-dependent flip-flop terms.
    """

    omega_center: float = 0.0
    omega_groups: tuple[float, ...] = ()
    frame: str = "rwa"


@dataclass(frozen=True)
class SpinSystem:
    """Declarative description of the qubit network."""

    center_gamma: float = 0.0
    groups: tuple[GroupSpec, ...] = ()
    nonrwa: NonRwaSpec | None = None
    name: str = ""

    @property
    def n_environment(self) -> int:
        return sum(g.count for g in self.groups)

    @property
    def n_qubits(self) -> int:
        return 1 + self.n_environment


@dataclass(frozen=True)
class FidSeries:
    """Sampled FID signal: times in seconds, dimensionless re/im components."""

    times: np.ndarray
    re: np.ndarray
    im: np.ndarray
    provenance: str
    params: SpinSystem

    def __post_init__(self):
        for arr in (self.times, self.re, self.im):
            arr.setflags(write=False)


def make_series(times, re, im, provenance: str, params: SpinSystem) -> FidSeries:
    """Build a :class:`FidSeries`, enforcing its invariants."""
    times = np.asarray(times, dtype=float)
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    if times.size == 0:
        raise ValueError("empty time grid")
    if not (times.shape == re.shape == im.shape):
        raise ValueError("times/re/im length mismatch")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    if provenance not in ("analytic", "nonrwa", "oracle"):
        raise ValueError(f"unknown provenance {provenance!r}")
    if times[0] == 0.0 and abs(re[0] - 1.0) > 1e-12:
        raise ValueError(f"re(0) = {re[0]!r}, expected 1 within 1e-12")
    if np.max(np.abs(re)) > 1.0 + 1e-9 or np.max(np.abs(im)) > 1.0 + 1e-9:
        raise ValueError("signal magnitude exceeds 1 + 1e-9")
    return FidSeries(times, re.copy(), im.copy(), provenance, params)


def validate(system: SpinSystem) -> list[str]:
    """Check all type invariants; returns one message per violation."""
    out: list[str] = []
    if not (math.isfinite(system.center_gamma) and system.center_gamma >= 0):
        out.append("center_gamma must be finite and >= 0")
    for i, g in enumerate(system.groups):
        if not isinstance(g.count, int) or g.count < 1:
            out.append(f"groups[{i}].count must be >= 1")
        if not math.isfinite(g.j_center):
            out.append(f"groups[{i}].j_center must be finite")
        if not (math.isfinite(g.gamma) and g.gamma >= 0):
            out.append(f"groups[{i}].gamma must be >= 0")
    nr = system.nonrwa
    if nr is not None:
        for name in ("parts", "m", "n"):
            v = getattr(nr, name)
            if not isinstance(v, int) or v < 1:
                out.append(f"nonrwa.{name} must be a positive integer")
        if not math.isfinite(nr.j23):
            out.append("nonrwa.j23 must be finite")
        if not math.isfinite(nr.delta_omega):
            out.append("nonrwa.delta_omega must be finite")
        if (
            system.groups
            and isinstance(nr.parts, int)
            and isinstance(nr.m, int)
            and isinstance(nr.n, int)
            and nr.parts * (nr.m + nr.n) != system.n_environment
        ):
            out.append(
                "nonrwa.parts*(m+n) must equal the total environment qubit count"
            )
    return out


def preset(
    name: str,
    *,
    j_hz: float | None = None,
    center_gamma: float | None = None,
    group_gammas: tuple[float, ...] | None = None,
) -> SpinSystem:
    """Built-in configurations.

    tms            : 12 identical environment qubits. The coupling is not a
                     built-in constant; ``j_hz`` is required.
    tes            : near group (8 qubits, 6.42 Hz) + far group (12, 0.5 Hz).
    tes-virtual-13c: tes plus 4 virtual qubits at 2.2 Hz.
    tes-lowfield   : tes with a 4x(2+3) partition, j23 = 8.02 Hz and
                     delta_omega = 24.8 Hz, for the strong-coupling solver.

    ``center_gamma`` and ``group_gammas`` (rates in 1/s) override the preset
    dissipation rates. tms defaults to (0.21, 0.1) 1/s; the tes family
    defaults to noiseless.
    """
    if name == "tms":
        if j_hz is None:
            raise ValueError("preset 'tms' requires an explicit j_hz coupling")
        gi = 0.21 if center_gamma is None else center_gamma
        gg = (0.1,) if group_gammas is None else group_gammas
        return SpinSystem(
            center_gamma=gi,
            groups=(GroupSpec(12, hz(j_hz), gg[0], "II"),),
            name="tms",
        )

    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    if j_hz is not None:
        raise ValueError(f"preset {name!r} does not take j_hz")

    gi = 0.0 if center_gamma is None else center_gamma
    n_groups = 3 if name == "tes-virtual-13c" else 2
    gg = (0.0,) * n_groups if group_gammas is None else group_gammas
    if len(gg) != n_groups:
        raise ValueError(f"preset {name!r} takes {n_groups} group gammas")

    groups = [
        GroupSpec(8, hz(6.42), gg[0], "II"),
        GroupSpec(12, hz(0.5), gg[1], "III"),
    ]
    nonrwa = None
    if name == "tes-virtual-13c":
        groups.append(GroupSpec(4, hz(2.2), gg[2], "IV"))
    elif name == "tes-lowfield":
        nonrwa = NonRwaSpec(parts=4, m=2, n=3, j23=hz(8.02), delta_omega=hz(24.8))
    return SpinSystem(
        center_gamma=gi, groups=tuple(groups), nonrwa=nonrwa, name=name
    )
