"""Dense state-vector and density-matrix simulator for small qubit registers.

Designed for desk-scale problems (up to 8 qubits, <= 256 amplitudes); all
operations are pure functions returning new immutable values.

Conventions, fixed once here and relied on everywhere else:

* qubit 0 is the most significant bit of the basis index, so for two qubits
  the basis order is |00>, |01>, |10>, |11>;
* rotation gates are ``R_k(mu) = exp(-i * mu * sigma_k / 2)`` for k in x,y,z;
* states are compared up to global phase via ``|<a|b>| = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 8

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-9
BRANCH_PROB_FLOOR = 1e-12
PPT_DEFAULT_TOL = 1e-10


class ImpossibleBranchError(ValueError):
    """Raised when a postselected measurement branch has ~zero probability."""


# ---------------------------------------------------------------------------
# gates

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rx(mu: float) -> np.ndarray:
    c, s = math.cos(mu / 2), math.sin(mu / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(mu: float) -> np.ndarray:
    c, s = math.cos(mu / 2), math.sin(mu / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(mu: float) -> np.ndarray:
    return np.array([[np.exp(-1j * mu / 2), 0], [0, np.exp(1j * mu / 2)]])


def is_unitary(gate: np.ndarray, atol: float = NORM_ATOL) -> bool:
    gate = np.asarray(gate, dtype=complex)
    return gate.shape == (2, 2) and np.allclose(
        gate.conj().T @ gate, IDENTITY, atol=atol
    )


# ---------------------------------------------------------------------------
# pure states


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PureState:
    """An n-qubit state vector; qubit 0 is the most significant bit."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError("amplitude count must be 2**num_qubits")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amplitudes must be finite")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm^2 = {norm}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_json_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "amplitudes": [[a.real, a.imag] for a in self.amplitudes],
        }


def basis_state(num_qubits: int, index: int) -> PureState:
    """Computational basis state |index> in the MSB-first ordering."""
    if not 0 <= index < 2**num_qubits:
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return PureState(num_qubits, amps)


def plus_state(num_qubits: int) -> PureState:
    """|+>^n, the starting point of every cluster resource."""
    dim = 2**num_qubits
    return PureState(num_qubits, np.full(dim, 1 / math.sqrt(dim), dtype=complex))


def _check_wire(wire: int, n: int):
    if not 0 <= wire < n:
        raise ValueError(f"wire {wire} out of range for {n} qubits")


def apply_single(state: PureState, gate: np.ndarray, wire: int) -> PureState:
    """Apply a 2x2 gate on one wire, identity elsewhere."""
    n = state.num_qubits
    _check_wire(wire, n)
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError("gate must be 2x2")
    t = state.amplitudes.reshape([2] * n)
    t = np.moveaxis(t, wire, -1) @ gate.T
    return PureState(n, np.moveaxis(t, -1, wire).reshape(-1))


def apply_cz(state: PureState, wire_a: int, wire_b: int) -> PureState:
    """Controlled-phase: negate amplitudes with 1 on both wires."""
    n = state.num_qubits
    _check_wire(wire_a, n)
    _check_wire(wire_b, n)
    if wire_a == wire_b:
        raise ValueError("cz wires must be distinct")
    t = state.amplitudes.reshape([2] * n).copy()
    idx = [slice(None)] * n
    idx[wire_a] = 1
    idx[wire_b] = 1
    t[tuple(idx)] *= -1
    return PureState(n, t.reshape(-1))


def project_onto(
    state: PureState, wire: int, basis_vector: np.ndarray
) -> tuple[PureState, float]:
    """Project one wire onto a normalized single-qubit vector and renormalize.

    Returns the post-measurement state (same register size, projected wire left
    in ``basis_vector``) and the branch probability.  Raises
    ImpossibleBranchError when the branch probability is below 1e-12.
    """
    n = state.num_qubits
    _check_wire(wire, n)
    v = np.asarray(basis_vector, dtype=complex).reshape(-1)
    if v.shape != (2,):
        raise ValueError("basis_vector must be a single-qubit 2-vector")
    if abs(np.vdot(v, v).real - 1.0) > NORM_ATOL:
        raise ValueError("basis_vector must be normalized")
    t = np.moveaxis(state.amplitudes.reshape([2] * n), wire, -1)
    overlap = t @ v.conj()
    prob = float(np.vdot(overlap, overlap).real)
    if prob < BRANCH_PROB_FLOOR:
        raise ImpossibleBranchError(
            f"postselection branch on wire {wire} has probability {prob:.3e}"
        )
    out = np.tensordot(overlap, v, axes=0) / math.sqrt(prob)
    return PureState(n, np.moveaxis(out, -1, wire).reshape(-1)), prob


def computational_distribution(state: PureState, wires: list[int]) -> dict[str, float]:
    """Marginal computational-basis distribution over the listed wires."""
    n = state.num_qubits
    if len(set(wires)) != len(wires):
        raise ValueError("wires must be distinct")
    for w in wires:
        _check_wire(w, n)
    probs = state.probabilities().reshape([2] * n)
    keep = list(wires)
    drop = tuple(i for i in range(n) if i not in keep)
    if drop:
        probs = probs.sum(axis=drop)
    # remaining axes are in ascending wire order; permute to requested order
    order = [sorted(keep).index(w) for w in keep]
    probs = probs.transpose(order).reshape(-1)
    k = len(wires)
    return {format(i, f"0{k}b"): float(p) for i, p in enumerate(probs)}


def overlap(a: PureState, b: PureState) -> complex:
    if a.num_qubits != b.num_qubits:
        raise ValueError("states must have the same register size")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def states_equal(a: PureState, b: PureState, tol: float = 1e-10) -> bool:
    """Equality up to global phase."""
    return abs(abs(overlap(a, b)) - 1.0) <= tol


# ---------------------------------------------------------------------------
# density matrices


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on n qubits."""

    num_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        dim = 2**self.num_qubits
        mat = np.ascontiguousarray(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise ValueError("matrix must be 2^n x 2^n")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("entries must be finite")
        if np.abs(mat - mat.conj().T).max() > HERMITIAN_ATOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace = {np.trace(mat).real}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < EIGENVALUE_FLOOR:
            raise ValueError("matrix has a significantly negative eigenvalue")
        object.__setattr__(self, "matrix", _frozen(mat))

    def diagonal_probabilities(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))

    def to_json_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "entries": [[[z.real, z.imag] for z in row] for row in self.matrix],
        }


def pure_to_density(state: PureState) -> DensityMatrix:
    a = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(a, a.conj()))


def mix(pairs: list[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex mixture of density matrices; weights must sum to 1."""
    if not pairs:
        raise ValueError("mix requires at least one component")
    weights = [w for w, _ in pairs]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if abs(sum(weights) - 1.0) > NORM_ATOL:
        raise ValueError(f"weights sum to {sum(weights)}, expected 1")
    n = pairs[0][1].num_qubits
    if any(rho.num_qubits != n for _, rho in pairs):
        raise ValueError("components must share the register size")
    acc = sum(w * rho.matrix for w, rho in pairs)
    return DensityMatrix(n, acc)


def partial_transpose(rho: DensityMatrix, subsystem_wires: list[int]) -> np.ndarray:
    """Transpose the chosen subsystem of a two-qubit density matrix.

    Returns a plain Hermitian ndarray: the result is generally not positive,
    which is the point of the PPT test.
    """
    if rho.num_qubits != 2:
        raise ValueError("partial_transpose supports two-qubit states only")
    wires = sorted(set(subsystem_wires))
    if wires not in ([0], [1]):
        raise ValueError("subsystem_wires must be [0] or [1]")
    t = rho.matrix.reshape(2, 2, 2, 2)  # (row A, row B, col A, col B)
    if wires == [0]:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def negativity(rho: DensityMatrix) -> float:
    """Entanglement negativity: |sum of negative eigenvalues of rho^{T_B}|.

    Equals (||rho^{T_B}||_1 - 1)/2; 0 for separable two-qubit states and 1/2
    for maximally entangled ones.  Values within -1e-10 of zero are clamped.
    """
    pt = partial_transpose(rho, [1])
    ev = np.linalg.eigvalsh(pt)
    # eigenvalues within -1e-10 of zero are roundoff, not entanglement
    neg = float(-ev[ev < -PPT_DEFAULT_TOL].sum())
    return max(neg, 0.0)


def is_ppt(rho: DensityMatrix, tol: float = PPT_DEFAULT_TOL) -> bool:
    """Positive-partial-transpose test; separability for two qubits."""
    pt = partial_transpose(rho, [1])
    return bool(np.linalg.eigvalsh(pt)[0] >= -tol)
