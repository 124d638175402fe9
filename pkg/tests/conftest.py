"""Shared fixtures and independent oracles.

The oracle helpers below rebuild the game evolution from explicit Kronecker
products so that tests never check the package against its own machinery.
"""

import math

import numpy as np
import pytest

from qpd import cluster

SQ2 = math.sqrt(2)

H = np.array([[1, 1], [1, -1]], dtype=complex) / SQ2
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1]).astype(complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


def u_matrix(theta, phi):
    return np.array(
        [
            [np.exp(-1j * phi) * math.cos(theta / 2), -math.sin(theta / 2)],
            [math.sin(theta / 2), np.exp(1j * phi) * math.cos(theta / 2)],
        ]
    )


NAMED = {
    "c": u_matrix(0, 0),
    "d": u_matrix(math.pi, 0),
    "q": u_matrix(0, math.pi / 2),
    "m": (np.eye(2) + 1j * Y) / SQ2,
}


def oracle_distribution(ua, ub, variant="entangled"):
    """Outcome probabilities [cc, cd, dc, dd] by explicit matrix products."""
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1
    hh = np.kron(H, H)
    if variant == "entangled":
        psi = hh @ CZ @ np.kron(ua, ub) @ CZ @ hh @ e0
    elif variant == "separable":
        psi = hh @ np.kron(ua, ub) @ hh @ e0
    elif variant == "classical_limit":
        psi = np.kron(ua, ub) @ e0
    else:
        raise ValueError(variant)
    return np.abs(psi) ** 2


def oracle_payoff_a(probs):
    return 3 * probs[0] + probs[3] + 5 * probs[2]


def oracle_payoff_b(probs):
    return 3 * probs[0] + probs[3] + 5 * probs[1]


def random_unitary(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    qmat, r = np.linalg.qr(a)
    return qmat * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def calibration():
    return cluster.calibrate()


@pytest.fixture(scope="session")
def conv(calibration):
    return calibration.selected
