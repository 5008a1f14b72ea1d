"""Compiled RK4 inner loop shared by the oracle and the strong-coupling solver.

Both propagators integrate the same right-hand-side shape:

    dX/dt = -i (B1(t) X - X B2(t)) + sum_s (gamma_s/2) (flip_s(X) - X)

with B1(t) = S1 + z(t) P + conj(z(t)) P^dag, B2(t) = S2 + z(t) P +
conj(z(t)) P^dag and z(t) = c * exp(i*dw*t). The density-matrix case has
S1 = S2 = H; the per-part operator case splits the anticommutator into
S1 = H_in + A, S2 = H_in - A. flip_s copies the entry with site s's basis
bit toggled on both indices when the bits agree (the s+ X s- + s- X s+
sandwich of the infinite-temperature dissipator).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _rhs(t, x, s1, s2, p, pc, c, dw, gammas, bits, split):
    d = x.shape[0]
    if c != 0.0:
        z = c * np.exp(1j * dw * t)
        b1 = s1 + z * p + np.conj(z) * pc
        if split:
            b2 = s2 + z * p + np.conj(z) * pc
        else:
            b2 = b1
    else:
        b1 = s1
        b2 = s2 if split else s1
    r = -1j * (np.dot(b1, x) - np.dot(x, b2))
    for s in range(gammas.shape[0]):
        g = 0.5 * gammas[s]
        if g == 0.0:
            continue
        bit = bits[s]
        for a in range(d):
            fa = a ^ bit
            la = a & bit
            for b in range(d):
                if la == (b & bit):
                    r[a, b] += g * (x[fa, b ^ bit] - x[a, b])
                else:
                    r[a, b] -= g * x[a, b]
    return r


@njit(cache=True)
def rk4_evolve(x0, t0, h, stride, n_samples, s1, s2, p, pc, c, dw, gammas, bits, split):
    """Propagate from x0 at t0, emitting every ``stride`` steps.

    Returns (samples, status): status is -1 on success, else the index of the
    first step after which a non-finite entry appeared.
    """
    d = x0.shape[0]
    out = np.empty((n_samples, d, d), dtype=np.complex128)
    out[0] = x0
    x = x0.copy()
    step = 0
    for j in range(1, n_samples):
        for _ in range(stride):
            t = t0 + step * h
            k1 = _rhs(t, x, s1, s2, p, pc, c, dw, gammas, bits, split)
            k2 = _rhs(t + 0.5 * h, x + (0.5 * h) * k1, s1, s2, p, pc, c, dw, gammas, bits, split)
            k3 = _rhs(t + 0.5 * h, x + (0.5 * h) * k2, s1, s2, p, pc, c, dw, gammas, bits, split)
            k4 = _rhs(t + h, x + h * k3, s1, s2, p, pc, c, dw, gammas, bits, split)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step += 1
        ok = True
        for a in range(d):
            for b in range(d):
                v = x[a, b]
                if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                    ok = False
        if not ok:
            return out, step
        out[j] = x
    return out, -1
