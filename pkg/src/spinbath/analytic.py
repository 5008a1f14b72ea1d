"""Closed-form FID signals for the zz-coupled (rotating-frame) models.

Each environment qubit contributes an operator factor whose identity and
sigma_z coefficients (d0, dz) obey the 2x2 linear mode ODE

    d/dt (d0, dz) = 1/2 [[0, -iJ], [-iJ, -2*gamma]] (d0, dz),

with (d0, dz)(0) = (1, 0). The signal is the damped product of the d0
factors, one power per qubit:

    S(t) = exp(-gamma_c*t/2) * prod_g d0(J_g, gamma_g, t)**count_g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import FidSeries, SpinSystem, make_series, validate


@dataclass(frozen=True)
class ModeAmplitude:
    """Coefficients of one environment qubit's operator factor."""

    d0: complex
    dz: complex

    @property
    def norm_sq(self) -> float:
        return abs(self.d0) ** 2 + abs(self.dz) ** 2


def _sin_ratio(omega_sq, half_t):
    """sin(Omega*t/2)/Omega with Omega = sqrt(omega_sq), continued through
    Omega = 0 and, for omega_sq < 0, through the hyperbolic branch
    sinh(|Omega|*t/2)/|Omega|. Also returns cos/cosh of the same argument."""
    omega_sq = np.asarray(omega_sq, dtype=float)
    half_t = np.asarray(half_t, dtype=float)
    a_sq = omega_sq * half_t**2
    small = np.abs(a_sq) < 1e-12
    trig = omega_sq >= 0

    a = np.sqrt(np.abs(omega_sq)) * half_t
    # sin(a)/a ~ 1 - a_sq/6 and sinh(a)/a ~ 1 + a**2/6 coincide in terms of
    # the signed a_sq, so one series covers both branches near Omega = 0.
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        safe_a = np.where(a == 0, 1.0, a)
        ratio = np.where(
            small,
            half_t * (1.0 - a_sq / 6.0),
            np.where(
                trig,
                half_t * np.sin(a) / safe_a,
                half_t * np.sinh(a) / safe_a,
            ),
        )
        cosine = np.where(
            small, 1.0 - a_sq / 2.0, np.where(trig, np.cos(a), np.cosh(a))
        )
    return ratio, cosine


def mode_amplitude(j: float, gamma: float, t):
    """Closed-form (d0, dz) at time ``t`` for coupling ``j`` and rate ``gamma``.

    Underdamped (j > gamma) gives oscillatory factors; overdamped evaluates
    the equivalent hyperbolic form so d0 stays real and finite; the critical
    point uses the series limit sin(x)/x -> 1.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    half_t = 0.5 * t_arr
    ratio, cosine = _sin_ratio(j * j - gamma * gamma, half_t)
    env = np.exp(-gamma * half_t)
    d0 = env * (gamma * ratio + cosine)
    dz = env * (-1j * j * ratio)
    if np.ndim(t) == 0:
        return ModeAmplitude(complex(d0), complex(dz))
    return ModeAmplitude(d0 + 0j, dz + 0j)


def _factor_power(d0, count: int):
    """d0**count via sign and log magnitude; hard zero below 1e-300 to avoid
    subnormal artifacts in long-time tails."""
    d0 = np.asarray(d0, dtype=float)
    mag = np.abs(d0)
    sign = np.where(d0 < 0, -1.0, 1.0) ** count
    with np.errstate(divide="ignore"):
        out = np.where(mag > 1e-300, sign * np.exp(count * np.log(np.where(mag > 0, mag, 1.0))), 0.0)
    return out


def fid_analytic(system: SpinSystem, t):
    """Closed-form signal value(s) at time(s) ``t``; imaginary part is
    identically zero for real inputs."""
    problems = validate(system)
    if problems:
        raise ValueError("invalid system: " + "; ".join(problems))
    t_arr = np.asarray(t, dtype=float)
    signal = np.exp(-system.center_gamma * 0.5 * t_arr)
    for g in system.groups:
        d0 = np.real(mode_amplitude(g.j_center, g.gamma, t_arr).d0)
        signal = signal * _factor_power(d0, g.count)
    out = signal + 0j
    if np.ndim(t) == 0:
        return complex(out)
    return out


def fid_series_analytic(system: SpinSystem, t_grid) -> FidSeries:
    """Sample :func:`fid_analytic` on a grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("empty time grid")
    values = fid_analytic(system, t_grid)
    return make_series(
        t_grid, np.real(values), np.zeros_like(t_grid), "analytic", system
    )


def recursion_metric(series: FidSeries, window) -> float:
    """Largest |Re S| over the samples falling inside ``window = (t_a, t_b)``;
    1.0 signals a full recursion of the initial amplitude."""
    t_a, t_b = window
    mask = (series.times >= t_a) & (series.times <= t_b)
    if not np.any(mask):
        raise ValueError(f"window [{t_a}, {t_b}] contains no samples")
    return float(np.max(np.abs(series.re[mask])))
