"""The two-player quantum Prisoners' Dilemma in the circuit picture.

A round evolves |cc> through an entangling stage, the players' local strategy
unitaries, and a disentangling stage, then measures both qubits.  Payoffs are
the classical Prisoners' Dilemma functionals of the outcome distribution:

    $_A = 3 p_cc + p_dd + 5 p_dc        $_B = 3 p_cc + p_dd + 5 p_cd

Three variants are supported: the full entangled game, a separable game with
the two-qubit gates removed (Hadamards kept), and the bare classical limit
with no extra stages at all.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels, qsim

THETA_RANGE = (0.0, math.pi)
PHI_RANGE = (0.0, math.pi / 2)

# the strategy unitary family: U(theta, phi) rotates between cooperation and
# defection (theta) and through the phase sector (phi)


def strategy_unitary(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[np.exp(-1j * phi) * c, -s], [s, np.exp(1j * phi) * c]], dtype=complex
    )


_M_MATRIX = (qsim.IDENTITY + 1j * qsim.PAULI_Y) / math.sqrt(2)

NAMED_COORDS = {
    "c": (0.0, 0.0),
    "d": (math.pi, 0.0),
    "q": (0.0, math.pi / 2),
}
NAMED_STRATEGIES = ("c", "d", "q", "m")


@dataclass(frozen=True)
class Strategy:
    """A player move: one of the named strategies c/d/q/m or a (theta, phi) pair.

    ``m`` is a fixed extra move outside the two-parameter family and has no
    (theta, phi) coordinates.
    """

    name: str | None = None
    theta: float | None = None
    phi: float | None = None

    def __post_init__(self):
        if self.name is not None:
            if self.name not in NAMED_STRATEGIES:
                raise ValueError(f"unknown strategy name {self.name!r}")
            if self.theta is not None or self.phi is not None:
                raise ValueError("named strategies take no parameters")
        else:
            if self.theta is None or self.phi is None:
                raise ValueError("parametric strategies need theta and phi")
            if not THETA_RANGE[0] <= self.theta <= THETA_RANGE[1]:
                raise ValueError(f"theta {self.theta} outside {THETA_RANGE}")
            if not PHI_RANGE[0] <= self.phi <= PHI_RANGE[1]:
                raise ValueError(f"phi {self.phi} outside {PHI_RANGE}")

    @classmethod
    def named(cls, name: str) -> "Strategy":
        return cls(name=name)

    @classmethod
    def parametric(cls, theta: float, phi: float) -> "Strategy":
        return cls(theta=float(theta), phi=float(phi))

    def coordinates(self) -> tuple[float, float]:
        """(theta, phi) for strategies inside the two-parameter family."""
        if self.name is not None:
            if self.name == "m":
                raise ValueError("strategy 'm' has no (theta, phi) coordinates")
            return NAMED_COORDS[self.name]
        return (self.theta, self.phi)

    def matrix(self) -> np.ndarray:
        if self.name == "m":
            return _M_MATRIX.copy()
        return strategy_unitary(*self.coordinates())

    def to_json(self):
        if self.name is not None:
            return self.name
        return {"theta": self.theta, "phi": self.phi}


def strategy_matrix(s: Strategy) -> np.ndarray:
    return s.matrix()


def p_to_strategy(p: float) -> Strategy:
    """The one-dimensional strategy axis: p=1 is d, p=0 is c, p=-1 is q."""
    if not -1.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [-1, 1], got {p}")
    if p >= 0:
        return Strategy.parametric(p * math.pi, 0.0)
    return Strategy.parametric(0.0, -p * math.pi / 2)


def _p_coordinates(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta = np.where(p >= 0, p * math.pi, 0.0)
    phi = np.where(p >= 0, 0.0, -p * math.pi / 2)
    return theta, phi


@dataclass(frozen=True)
class StrategyProfile:
    a: Strategy
    b: Strategy

    @classmethod
    def of(cls, a, b) -> "StrategyProfile":
        def coerce(s):
            return s if isinstance(s, Strategy) else Strategy.named(s)

        return cls(coerce(a), coerce(b))


class GameVariant(enum.Enum):
    ENTANGLED = "entangled"
    SEPARABLE = "separable"
    CLASSICAL_LIMIT = "classical_limit"

    @property
    def kernel_code(self) -> int:
        return {
            GameVariant.ENTANGLED: kernels.VARIANT_ENTANGLED,
            GameVariant.SEPARABLE: kernels.VARIANT_SEPARABLE,
            GameVariant.CLASSICAL_LIMIT: kernels.VARIANT_CLASSICAL,
        }[self]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of the four measured profiles, player A's letter first."""

    p_cc: float
    p_cd: float
    p_dc: float
    p_dd: float

    def __post_init__(self):
        vals = self.as_array()
        if np.any(vals < -1e-9) or np.any(vals > 1 + 1e-9):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(vals.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {vals.sum()}, expected 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_cc, self.p_cd, self.p_dc, self.p_dd])

    @classmethod
    def from_array(cls, arr) -> "OutcomeDistribution":
        return cls(*(float(x) for x in arr))

    def to_json_dict(self) -> dict:
        return {"p_cc": self.p_cc, "p_cd": self.p_cd, "p_dc": self.p_dc, "p_dd": self.p_dd}


@dataclass(frozen=True)
class Payoffs:
    a: float
    b: float

    def to_json_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


def payoffs(dist: OutcomeDistribution) -> Payoffs:
    return Payoffs(
        a=3 * dist.p_cc + dist.p_dd + 5 * dist.p_dc,
        b=3 * dist.p_cc + dist.p_dd + 5 * dist.p_cd,
    )


# ---------------------------------------------------------------------------
# evolution

_CZ4 = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
_HH = np.kron(qsim.HADAMARD, qsim.HADAMARD)
ENTANGLE_STAGE = _CZ4 @ _HH      # applied before the strategies
DISENTANGLE_STAGE = _HH @ _CZ4   # applied after the strategies


def circuit_unitary(profile: StrategyProfile, variant: GameVariant) -> np.ndarray:
    """Full 4x4 unitary of one round for the given variant."""
    local = np.kron(profile.a.matrix(), profile.b.matrix())
    if variant is GameVariant.ENTANGLED:
        return DISENTANGLE_STAGE @ local @ ENTANGLE_STAGE
    if variant is GameVariant.SEPARABLE:
        return _HH @ local @ _HH
    return local


def evolve(profile: StrategyProfile, variant: GameVariant, state):
    """Evolve a two-qubit PureState or DensityMatrix through one round."""
    u = circuit_unitary(profile, variant)
    if isinstance(state, qsim.PureState):
        if state.num_qubits != 2:
            raise ValueError("game evolution needs a two-qubit state")
        return qsim.PureState(2, u @ state.amplitudes)
    if isinstance(state, qsim.DensityMatrix):
        if state.num_qubits != 2:
            raise ValueError("game evolution needs a two-qubit state")
        return qsim.DensityMatrix(2, u @ state.matrix @ u.conj().T)
    raise TypeError("state must be a PureState or DensityMatrix")


def outcome_distribution(
    profile: StrategyProfile, variant: GameVariant, state=None
) -> OutcomeDistribution:
    """Distribution of measured profiles; the input defaults to |cc>."""
    if state is None:
        state = qsim.basis_state(2, 0)
    final = evolve(profile, variant, state)
    if isinstance(final, qsim.PureState):
        probs = final.probabilities()
    else:
        probs = final.diagonal_probabilities()
    return OutcomeDistribution.from_array(np.clip(probs, 0.0, 1.0))


def play(profile: StrategyProfile, variant: GameVariant) -> Payoffs:
    return payoffs(outcome_distribution(profile, variant))


# ---------------------------------------------------------------------------
# grid analysis over the p axis


def _grid_payoffs(
    steps: int, variant: GameVariant, p_range: tuple[float, float] = (-1.0, 1.0)
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p values, payoff_a matrix, payoff_b matrix) on a steps x steps grid."""
    ps = np.linspace(p_range[0], p_range[1], steps)
    ta, pa = _p_coordinates(ps)
    taa, tab = np.meshgrid(ta, ta, indexing="ij")
    paa, pab = np.meshgrid(pa, pa, indexing="ij")
    probs = kernels.outcome_probs(
        taa.ravel(), paa.ravel(), tab.ravel(), pab.ravel(), variant.kernel_code
    )
    pay_a = (3 * probs[:, 0] + probs[:, 3] + 5 * probs[:, 2]).reshape(steps, steps)
    pay_b = (3 * probs[:, 0] + probs[:, 3] + 5 * probs[:, 1]).reshape(steps, steps)
    return ps, pay_a, pay_b


def payoff_surface(
    steps: int, variant: GameVariant, p_range: tuple[float, float] = (-1.0, 1.0)
) -> list[tuple[float, float, float, float]]:
    """Rows (p_a, p_b, payoff_a, payoff_b) in row-major grid order."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    ps, pay_a, pay_b = _grid_payoffs(steps, variant, p_range)
    return [
        (float(ps[i]), float(ps[j]), float(pay_a[i, j]), float(pay_b[i, j]))
        for i in range(steps)
        for j in range(steps)
    ]


def surface_to_csv(rows: list[tuple[float, float, float, float]]) -> str:
    buf = io.StringIO()
    buf.write("p_a,p_b,payoff_a,payoff_b\n")
    for row in rows:
        buf.write(",".join(f"{v:.15g}" for v in row) + "\n")
    return buf.getvalue()


def find_nash(
    steps: int,
    variant: GameVariant,
    tol: float = 1e-9,
    p_range: tuple[float, float] = (-1.0, 1.0),
) -> list[tuple[float, float]]:
    """Grid profiles where no unilateral grid deviation gains more than tol."""
    if steps < 3:
        raise ValueError("steps must be >= 3")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ps, pay_a, pay_b = _grid_payoffs(steps, variant, p_range)
    best_a = pay_a.max(axis=0, keepdims=True)  # best response of A per column
    best_b = pay_b.max(axis=1, keepdims=True)  # best response of B per row
    mask = (pay_a >= best_a - tol) & (pay_b >= best_b - tol)
    return [(float(ps[i]), float(ps[j])) for i, j in np.argwhere(mask)]


def _profile_payoffs_on_grid(profile: StrategyProfile, variant: GameVariant) -> Payoffs:
    return payoffs(outcome_distribution(profile, variant))


def pareto_dominators(
    profile: StrategyProfile,
    steps: int,
    variant: GameVariant,
    p_range: tuple[float, float] = (-1.0, 1.0),
) -> list[tuple[float, float]]:
    """Grid profiles weakly improving both payoffs and strictly one of them."""
    if steps < 3:
        raise ValueError("steps must be >= 3")
    ref = _profile_payoffs_on_grid(profile, variant)
    ps, pay_a, pay_b = _grid_payoffs(steps, variant, p_range)
    weakly = (pay_a >= ref.a - 1e-9) & (pay_b >= ref.b - 1e-9)
    strictly = (pay_a > ref.a + 1e-9) | (pay_b > ref.b + 1e-9)
    mask = weakly & strictly
    return [(float(ps[i]), float(ps[j])) for i, j in np.argwhere(mask)]


def best_response(
    opponent: Strategy,
    steps: int,
    variant: GameVariant,
    p_range: tuple[float, float] = (-1.0, 1.0),
) -> tuple[Strategy, float]:
    """Grid argmax of the responder's payoff; ties go to the largest p."""
    if steps < 3:
        raise ValueError("steps must be >= 3")
    ps = np.linspace(p_range[0], p_range[1], steps)
    ta, pa = _p_coordinates(ps)
    t_opp, p_opp = opponent.coordinates()
    probs = kernels.outcome_probs(
        ta,
        pa,
        np.full(steps, t_opp),
        np.full(steps, p_opp),
        variant.kernel_code,
    )
    pay = 3 * probs[:, 0] + probs[:, 3] + 5 * probs[:, 2]
    best = pay.max()
    idx = int(np.nonzero(pay >= best - 1e-12)[0][-1])
    return p_to_strategy(float(ps[idx])), float(pay[idx])


def sample_outcomes(
    dist: OutcomeDistribution, shots: int, seed: int | None
) -> list[str]:
    """Draw outcome labels from the analytic distribution, reproducibly."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    labels = ["cc", "cd", "dc", "dd"]
    probs = dist.as_array()
    probs = probs / probs.sum()
    picks = rng.choice(4, size=shots, p=probs)
    return [labels[i] for i in picks]
