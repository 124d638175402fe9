"""Pure-numpy batch kernel: outcome probabilities for arrays of strategies.

Same contract as the compiled kernel in ``_native.pyx``.  The four outcome
columns are ordered [p_cc, p_cd, p_dc, p_dd] with player A's result first.

The evolution collapses to 2x2 algebra: writing the two-qubit amplitudes as a
2x2 matrix ``Psi[x, y]`` (x = player A bit), the entangling variant is

    Psi = Hd @ CZ(U_A @ G @ U_B^T) @ Hd,   G = [[1, 1], [1, -1]] / 2

where G holds the amplitudes of the entangled strategic resource and CZ flips
the sign of the (1, 1) entry.
"""

from __future__ import annotations

import numpy as np

VARIANT_ENTANGLED = 0
VARIANT_SEPARABLE = 1
VARIANT_CLASSICAL = 2

BACKEND_NAME = "fallback"

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def _strategy_batch(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """(N, 2, 2) array of strategy unitaries."""
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(-1j * phi) * c
    u[..., 0, 1] = -s
    u[..., 1, 0] = s
    u[..., 1, 1] = np.exp(1j * phi) * c
    return u


def outcome_probs(
    theta_a: np.ndarray,
    phi_a: np.ndarray,
    theta_b: np.ndarray,
    phi_b: np.ndarray,
    variant: int,
) -> np.ndarray:
    theta_a, phi_a, theta_b, phi_b = (
        np.ascontiguousarray(x, dtype=float) for x in (theta_a, phi_a, theta_b, phi_b)
    )
    ua = _strategy_batch(theta_a, phi_a)
    ub = _strategy_batch(theta_b, phi_b)
    n = theta_a.shape[0]

    if variant == VARIANT_CLASSICAL:
        pa = np.abs(ua[:, :, 0]) ** 2  # |U_A e0|^2
        pb = np.abs(ub[:, :, 0]) ** 2
        out = np.einsum("nx,ny->nxy", pa, pb).reshape(n, 4)
        return out

    if variant == VARIANT_SEPARABLE:
        # per-wire H U H acting on |0>: v = H (U (1,1)/sqrt2)
        wa = (ua[:, :, 0] + ua[:, :, 1]) * _SQRT1_2
        wb = (ub[:, :, 0] + ub[:, :, 1]) * _SQRT1_2
        va = np.stack([wa[:, 0] + wa[:, 1], wa[:, 0] - wa[:, 1]], axis=1) * _SQRT1_2
        vb = np.stack([wb[:, 0] + wb[:, 1], wb[:, 0] - wb[:, 1]], axis=1) * _SQRT1_2
        out = np.einsum("nx,ny->nxy", np.abs(va) ** 2, np.abs(vb) ** 2).reshape(n, 4)
        return out

    if variant != VARIANT_ENTANGLED:
        raise ValueError(f"unknown variant code {variant}")

    g = np.array([[0.5, 0.5], [0.5, -0.5]], dtype=complex)
    psi = np.einsum("nxi,ij,nyj->nxy", ua, g, ub)
    psi[:, 1, 1] *= -1.0
    # Hadamard on both indices (unnormalized [[1,1],[1,-1]], carrying the 1/2)
    hpsi = np.empty_like(psi)
    hpsi[:, 0, 0] = psi[:, 0, 0] + psi[:, 0, 1] + psi[:, 1, 0] + psi[:, 1, 1]
    hpsi[:, 0, 1] = psi[:, 0, 0] - psi[:, 0, 1] + psi[:, 1, 0] - psi[:, 1, 1]
    hpsi[:, 1, 0] = psi[:, 0, 0] + psi[:, 0, 1] - psi[:, 1, 0] - psi[:, 1, 1]
    hpsi[:, 1, 1] = psi[:, 0, 0] - psi[:, 0, 1] - psi[:, 1, 0] + psi[:, 1, 1]
    return (np.abs(hpsi.reshape(n, 4)) ** 2) * 0.25
