"""Dense complex matrix algebra over tensor-product qubit spaces.

Site 0 is the leftmost (most significant) tensor factor throughout: for an
``n``-qubit space, basis index ``b`` carries the state of site ``s`` in bit
``n - 1 - s``.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

_S0 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_SP = np.array([[0, 1], [0, 0]], dtype=complex)  # (sx + i sy)/2
_SM = np.array([[0, 0], [1, 0]], dtype=complex)  # (sx - i sy)/2

_PAULI = {"0": _S0, "x": _SX, "y": _SY, "z": _SZ, "+": _SP, "-": _SM}


def pauli(mu: str) -> np.ndarray:
    """One of the 2x2 matrices sigma_0, sigma_{x,y,z}, sigma_+, sigma_-."""
    try:
        return _PAULI[mu].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {mu!r}") from None


def embed(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Kronecker-embed a single-qubit operator at ``site`` among ``n_qubits``."""
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    factors = []
    if site > 0:
        factors.append(np.eye(2**site, dtype=complex))
    factors.append(np.asarray(op, dtype=complex))
    rest = n_qubits - site - 1
    if rest > 0:
        factors.append(np.eye(2**rest, dtype=complex))
    return reduce(np.kron, factors)


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_dims(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_dims(a, b)
    return a @ b + b @ a


def site_bit(site: int, n_qubits: int) -> int:
    """Basis-index bit mask addressing ``site`` (site 0 = most significant)."""
    return 1 << (n_qubits - 1 - site)


def dissipator(gamma: float, site: int, m: np.ndarray) -> np.ndarray:
    """Infinite-temperature GKSL term
    (gamma/2) (s+ m s- + s- m s+ - m) acting on one site.

    The sandwich terms are evaluated by index arithmetic rather than matrix
    products: s+ m s- + s- m s+ copies the entry with the site bit flipped on
    both indices wherever the bits agree, and vanishes elsewhere.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    m = np.asarray(m, dtype=complex)
    dim = m.shape[0]
    n_qubits = dim.bit_length() - 1
    if 2**n_qubits != dim or m.shape != (dim, dim):
        raise ValueError("operator must be square with power-of-two dimension")
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    bit = site_bit(site, n_qubits)
    idx = np.arange(dim)
    flip = idx ^ bit
    level = (idx & bit) != 0
    eq = level[:, None] == level[None, :]
    sandwich = np.where(eq, m[np.ix_(flip, flip)], 0.0)
    return 0.5 * gamma * (sandwich - m)


def rk4_propagate(rhs, m0: np.ndarray, t_grid, h: float):
    """Classical fixed-step 4th-order integration of dM/dt = rhs(t, M).

    ``m0`` is the state at ``t_grid[0]``; the return value stacks the state at
    every grid time. ``h`` must divide each grid interval within 1e-12
    relative error. ``rhs`` is evaluated at the substage times t, t+h/2, t+h,
    so time-dependent generators are handled exactly at the substages.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d array")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")

    m = np.array(m0, dtype=complex)
    out = np.empty((t_grid.size,) + m.shape, dtype=complex)
    out[0] = m
    step_index = 0
    for seg in range(t_grid.size - 1):
        t0, t1 = t_grid[seg], t_grid[seg + 1]
        span = t1 - t0
        nsub = int(round(span / h))
        if nsub < 1 or abs(nsub * h - span) > 1e-12 * max(abs(span), h):
            raise ValueError(
                f"step {h} does not divide grid interval [{t0}, {t1}]"
            )
        for i in range(nsub):
            t = t0 + i * h
            k1 = rhs(t, m)
            k2 = rhs(t + 0.5 * h, m + (0.5 * h) * k1)
            k3 = rhs(t + 0.5 * h, m + (0.5 * h) * k2)
            k4 = rhs(t + h, m + h * k3)
            m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step_index += 1
        if not np.all(np.isfinite(m)):
            raise FloatingPointError(
                f"non-finite state after step {step_index} (t = {t1})"
            )
        out[seg + 1] = m
    return out
