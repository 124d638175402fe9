"""Measurement-based backends for the game: cluster resources and patterns.

A pattern consumes an entangled resource by measuring some qubits in bases
``{(|c> + e^{i k}|d>)/sqrt2, (|c> - e^{i k}|d>)/sqrt2}`` with postselection on
one branch, applies small "imported" corrections to the two output qubits, and
reads them out along sigma_x.  Run this way, the box resource reproduces the
circuit-model game for a dictionary of named strategy rows, and the wafer
resource covers the whole (theta, 0) strategy plane.

Sign and ordering conventions (which physical output belongs to which player,
which sigma_x outcome means "cooperate", on which side of the readout
Hadamard the imports act, and the signs of measurement angles) are never
assumed: ``calibrate`` searches the finite convention space against the
circuit model and pins the first configuration that reproduces every row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import game, qsim

TV_TOLERANCE = 1e-9


class CalibrationFailure(RuntimeError):
    """No convention in the search space reproduces the circuit model."""


# ---------------------------------------------------------------------------
# resources


@dataclass(frozen=True)
class GraphSpec:
    num_qubits: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("graph needs at least one vertex")
        canon = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            if not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"edge ({a}, {b}) out of range")
            canon.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(canon))

    def neighbors(self, vertex: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == vertex:
                out.append(b)
            elif b == vertex:
                out.append(a)
        return sorted(out)


def graph_state(spec: GraphSpec) -> qsim.PureState:
    """|+>^n with a controlled-phase along every edge."""
    state = qsim.plus_state(spec.num_qubits)
    for a, b in sorted(spec.edges):
        state = qsim.apply_cz(state, a, b)
    return state


def stabilizer_expectations(spec: GraphSpec, state: qsim.PureState) -> list[float]:
    """<K_v> for every vertex, K_v = X_v prod_{u ~ v} Z_u; 1.0 on the graph state."""
    out = []
    for v in range(spec.num_qubits):
        moved = qsim.apply_single(state, qsim.PAULI_X, v)
        for u in spec.neighbors(v):
            moved = qsim.apply_single(moved, qsim.PAULI_Z, u)
        out.append(float(np.real(qsim.overlap(state, moved))))
    return out


BOX_GRAPH = GraphSpec(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))

# wafer wiring: a measured two-step chain per player between the two
# entangling edges; wires 0..2 carry player A, wires 3..5 player B
WAFER_GRAPH = GraphSpec(
    6, frozenset({(0, 3), (0, 1), (1, 2), (3, 4), (4, 5), (2, 5)})
)
_WAFER_INPUTS = (0, 3)
_WAFER_MIDS = (1, 4)
_WAFER_OUTPUTS = (2, 5)

_BOX_MEASURED = (0, 3)  # player A's angle on wire 0, player B's on wire 3
_BOX_OUTPUTS = (1, 2)


def box_cluster() -> qsim.PureState:
    """The four-qubit box resource, built from its GHZ-based closed form.

    Constructed as [|0>_1 + |1>_1 (Z_2 x Z_4)] (H_2 x H_4) |ghz>_{234},
    normalized to unit norm.  Wire i of the returned state is physical qubit
    i+1 of the box.
    """
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)  # qubits (2, 3, 4)
    v = qsim.PureState(3, ghz)
    v = qsim.apply_single(v, qsim.HADAMARD, 0)  # qubit 2
    v = qsim.apply_single(v, qsim.HADAMARD, 2)  # qubit 4
    flipped = qsim.apply_single(v, qsim.PAULI_Z, 0)
    flipped = qsim.apply_single(flipped, qsim.PAULI_Z, 2)
    amps = np.concatenate([v.amplitudes, flipped.amplitudes])
    return qsim.PureState(4, amps / np.linalg.norm(amps))


def box_cluster_from_graph() -> qsim.PureState:
    """Secondary constructor: the four-cycle graph state (1-2-3-4-1)."""
    return graph_state(BOX_GRAPH)


# ---------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class MeasuredQubitSpec:
    """One postselected measurement: wire, basis angle, kept branch, chain layer."""

    wire: int
    angle: float
    keep_branch: str = "plus"
    layer: int = 0

    def __post_init__(self):
        if self.keep_branch not in ("plus", "minus"):
            raise ValueError("keep_branch must be 'plus' or 'minus'")
        if self.layer not in (0, 1):
            raise ValueError("layer must be 0 or 1")


@dataclass(frozen=True)
class ImportOp:
    """Output-qubit correction: identity, i*sigma_x, sigma_z, rx(mu) or rz(mu)."""

    kind: str
    angle: float = 0.0

    _KINDS = ("identity", "i_sigma_x", "sigma_z", "rx", "rz")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown import kind {self.kind!r}")

    def matrix(self) -> np.ndarray:
        if self.kind == "identity":
            return qsim.IDENTITY
        if self.kind == "i_sigma_x":
            return 1j * qsim.PAULI_X
        if self.kind == "sigma_z":
            return qsim.PAULI_Z
        if self.kind == "rx":
            return qsim.rx(self.angle)
        return qsim.rz(self.angle)

    def to_json(self):
        if self.kind in ("rx", "rz"):
            return {self.kind: self.angle}
        return self.kind


@dataclass(frozen=True)
class MeasurementPattern:
    resource: str | GraphSpec
    measured: tuple[MeasuredQubitSpec, ...]
    imports: dict[int, ImportOp] = field(default_factory=dict)
    output_wires: tuple[int, int] = _BOX_OUTPUTS

    def __post_init__(self):
        if isinstance(self.resource, str) and self.resource not in ("box", "wafer"):
            raise ValueError("resource must be 'box', 'wafer' or a GraphSpec")
        measured_wires = {m.wire for m in self.measured}
        if measured_wires & set(self.output_wires):
            raise ValueError("measured and output wires must be disjoint")
        if len(self.output_wires) != 2:
            raise ValueError("exactly two output wires required")
        if set(self.imports) - set(self.output_wires):
            raise ValueError("imports may only target output wires")
        object.__setattr__(self, "measured", tuple(self.measured))

    def resource_state(self) -> qsim.PureState:
        if self.resource == "box":
            return box_cluster()
        if self.resource == "wafer":
            return graph_state(WAFER_GRAPH)
        return graph_state(self.resource)

    def to_json_dict(self) -> dict:
        return {
            "resource": self.resource
            if isinstance(self.resource, str)
            else {"num_qubits": self.resource.num_qubits,
                  "edges": sorted(list(e) for e in self.resource.edges)},
            "measured": [
                {"wire": m.wire, "angle": m.angle,
                 "keep_branch": m.keep_branch, "layer": m.layer}
                for m in self.measured
            ],
            "imports": {str(w): op.to_json() for w, op in self.imports.items()},
            "output_wires": list(self.output_wires),
        }


@dataclass(frozen=True)
class ClusterRunResult:
    distribution: game.OutcomeDistribution
    postselection_probability: float


@dataclass(frozen=True)
class ConventionConfig:
    """Resolution of the sign/ordering freedoms, produced by ``calibrate``.

    angle_sign flips every measurement-basis angle; swap_players exchanges
    which output wire reads player A; plus_is_c fixes the sigma_x outcome
    labels; import_after_h places imports after (True) or before (False) the
    readout Hadamard; wafer_layer_signs multiply the angle sign per chain
    layer on the wafer resource.
    """

    angle_sign: int = 1
    swap_players: bool = False
    plus_is_c: bool = True
    import_after_h: bool = True
    wafer_layer_signs: tuple[int, int] = (1, 1)

    def __post_init__(self):
        if self.angle_sign not in (1, -1):
            raise ValueError("angle_sign must be +1 or -1")
        if tuple(self.wafer_layer_signs) not in (
            (1, 1), (1, -1), (-1, 1), (-1, -1)
        ):
            raise ValueError("wafer_layer_signs must be a pair of +-1")
        object.__setattr__(self, "wafer_layer_signs", tuple(self.wafer_layer_signs))

    def to_json_dict(self) -> dict:
        return {
            "angle_sign": self.angle_sign,
            "swap_players": self.swap_players,
            "plus_is_c": self.plus_is_c,
            "import_after_h": self.import_after_h,
            "wafer_layer_signs": list(self.wafer_layer_signs),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConventionConfig":
        return cls(
            angle_sign=int(data["angle_sign"]),
            swap_players=bool(data["swap_players"]),
            plus_is_c=bool(data["plus_is_c"]),
            import_after_h=bool(data["import_after_h"]),
            wafer_layer_signs=tuple(int(s) for s in data["wafer_layer_signs"]),
        )


def run_pattern(pattern: MeasurementPattern, conv: ConventionConfig) -> ClusterRunResult:
    """Execute a pattern: postselect measurements, import, read out.

    The postselection probability is the product of the kept branch
    probabilities.  Output qubits are measured along sigma_x; outcomes map to
    c/d labels and players through the convention.
    """
    state = pattern.resource_state()
    is_wafer = pattern.resource == "wafer"

    post_prob = 1.0
    for m in pattern.measured:
        sign = conv.angle_sign
        if is_wafer:
            sign *= conv.wafer_layer_signs[m.layer]
        kappa = sign * m.angle
        branch = 1.0 if m.keep_branch == "plus" else -1.0
        vec = np.array([1.0, branch * np.exp(1j * kappa)], dtype=complex) / math.sqrt(2)
        state, prob = qsim.project_onto(state, m.wire, vec)
        post_prob *= prob

    outputs = list(pattern.output_wires)
    if not conv.import_after_h:
        for w in outputs:
            if w in pattern.imports:
                state = qsim.apply_single(state, pattern.imports[w].matrix(), w)
    for w in outputs:
        state = qsim.apply_single(state, qsim.HADAMARD, w)  # sigma_x readout
    if conv.import_after_h:
        for w in outputs:
            if w in pattern.imports:
                state = qsim.apply_single(state, pattern.imports[w].matrix(), w)

    wire_a, wire_b = outputs if not conv.swap_players else outputs[::-1]
    marginal = qsim.computational_distribution(state, [wire_a, wire_b])
    probs = np.zeros(4)
    for bits, p in marginal.items():
        if conv.plus_is_c:
            idx = int(bits, 2)
        else:
            idx = int(bits.translate(str.maketrans("01", "10")), 2)
        probs[idx] += p
    return ClusterRunResult(
        distribution=game.OutcomeDistribution.from_array(np.clip(probs, 0.0, 1.0)),
        postselection_probability=post_prob,
    )


# ---------------------------------------------------------------------------
# the pattern dictionary

_ID = ImportOp("identity")
_ISX = ImportOp("i_sigma_x")

# row -> (angle_a, angle_b, import_a, import_b); angles are the rotation
# exponents realized by the postselected measurements of wires 0 and 3
STRATEGY_ROWS: dict[str, tuple[float, float, ImportOp, ImportOp]] = {
    "cc": (0.0, 0.0, _ID, _ID),
    "cq": (0.0, 0.0, _ID, _ISX),
    "cd": (0.0, math.pi, _ID, _ISX),
    "qc": (0.0, 0.0, _ISX, _ID),
    "qq": (0.0, 0.0, _ISX, _ISX),
    "qd": (0.0, math.pi, _ISX, _ISX),
    "dc": (math.pi, 0.0, _ISX, _ID),
    "dq": (math.pi, 0.0, _ISX, _ISX),
    "dd": (math.pi, math.pi, _ISX, _ISX),
    "mm": (math.pi, math.pi, _ID, _ID),
}


def row_profile(name: str) -> game.StrategyProfile:
    return game.StrategyProfile.of(name[0], name[1])


def strategy_pattern(profile_name: str) -> MeasurementPattern:
    """Box pattern for one row of the named-strategy dictionary."""
    if profile_name not in STRATEGY_ROWS:
        raise ValueError(
            f"unknown profile {profile_name!r}; expected one of {sorted(STRATEGY_ROWS)}"
        )
    ang_a, ang_b, imp_a, imp_b = STRATEGY_ROWS[profile_name]
    return MeasurementPattern(
        resource="box",
        measured=(
            MeasuredQubitSpec(wire=_BOX_MEASURED[0], angle=ang_a),
            MeasuredQubitSpec(wire=_BOX_MEASURED[1], angle=ang_b),
        ),
        imports={_BOX_OUTPUTS[0]: imp_a, _BOX_OUTPUTS[1]: imp_b},
        output_wires=_BOX_OUTPUTS,
    )


def quadrant_pattern(mu: float, nu: float) -> MeasurementPattern:
    """Box pattern scanning the phase-sector quadrant via rx imports."""
    for val, label in ((mu, "mu"), (nu, "nu")):
        if not 0.0 <= val <= math.pi:
            raise ValueError(f"{label} must lie in [0, pi], got {val}")
    return MeasurementPattern(
        resource="box",
        measured=(
            MeasuredQubitSpec(wire=_BOX_MEASURED[0], angle=0.0),
            MeasuredQubitSpec(wire=_BOX_MEASURED[1], angle=0.0),
        ),
        imports={
            _BOX_OUTPUTS[0]: ImportOp("rx", mu),
            _BOX_OUTPUTS[1]: ImportOp("rx", nu),
        },
        output_wires=_BOX_OUTPUTS,
    )


def quadrant_phase_map(mu: float) -> float:
    """Hypothesized map from an rx import angle to the strategy phase."""
    return mu / 2


WAFER_FIRST_LAYER_ANGLE = math.pi / 2


def wafer_pattern(theta_a: float, theta_b: float) -> MeasurementPattern:
    """Wafer pattern realizing the profile (U(theta_a, 0), U(theta_b, 0)).

    Each player wire chains two measurement-simulated gates: a fixed
    quarter-turn first layer and a theta-dependent second layer, with rx
    quarter-turn imports on the outputs.
    """
    for val, label in ((theta_a, "theta_a"), (theta_b, "theta_b")):
        if not 0.0 <= val <= math.pi:
            raise ValueError(f"{label} must lie in [0, pi], got {val}")
    return MeasurementPattern(
        resource="wafer",
        measured=(
            MeasuredQubitSpec(wire=_WAFER_INPUTS[0], angle=WAFER_FIRST_LAYER_ANGLE, layer=0),
            MeasuredQubitSpec(wire=_WAFER_MIDS[0], angle=theta_a, layer=1),
            MeasuredQubitSpec(wire=_WAFER_INPUTS[1], angle=WAFER_FIRST_LAYER_ANGLE, layer=0),
            MeasuredQubitSpec(wire=_WAFER_MIDS[1], angle=theta_b, layer=1),
        ),
        imports={
            _WAFER_OUTPUTS[0]: ImportOp("rx", math.pi / 2),
            _WAFER_OUTPUTS[1]: ImportOp("rx", math.pi / 2),
        },
        output_wires=_WAFER_OUTPUTS,
    )


# ---------------------------------------------------------------------------
# calibration


def total_variation(p: game.OutcomeDistribution, q: game.OutcomeDistribution) -> float:
    return float(0.5 * np.abs(p.as_array() - q.as_array()).sum())


def _default_oracle(profile: game.StrategyProfile) -> game.OutcomeDistribution:
    return game.outcome_distribution(profile, game.GameVariant.ENTANGLED)


def _configs():
    """All conventions in deterministic lexicographic order."""
    for angle_sign, swap, plus_is_c, after, layers in itertools.product(
        (1, -1),
        (False, True),
        (True, False),
        (True, False),
        ((1, 1), (1, -1), (-1, 1), (-1, -1)),
    ):
        yield ConventionConfig(angle_sign, swap, plus_is_c, after, layers)


def _row_deviation(conv: ConventionConfig, oracle) -> float:
    worst = 0.0
    for name in STRATEGY_ROWS:
        result = run_pattern(strategy_pattern(name), conv)
        worst = max(worst, total_variation(result.distribution, oracle(row_profile(name))))
    return worst


_WAFER_CAL_THETAS = (0.0, math.pi / 3, math.pi)


def _wafer_deviation(conv: ConventionConfig, oracle) -> float:
    worst = 0.0
    for ta in _WAFER_CAL_THETAS:
        for tb in _WAFER_CAL_THETAS:
            result = run_pattern(wafer_pattern(ta, tb), conv)
            target = oracle(
                game.StrategyProfile(
                    game.Strategy.parametric(ta, 0.0), game.Strategy.parametric(tb, 0.0)
                )
            )
            worst = max(worst, total_variation(result.distribution, target))
    return worst


@dataclass(frozen=True)
class CalibrationReport:
    selected: ConventionConfig
    matched: int
    wafer_matched: int
    max_tv_deviation: float

    def to_json_dict(self) -> dict:
        return {
            "matched": self.matched,
            "wafer_matched": self.wafer_matched,
            "selected": self.selected.to_json_dict(),
            "max_tv_deviation": self.max_tv_deviation,
        }


def calibrate(oracle=None) -> CalibrationReport:
    """Search the convention space against the circuit model.

    A configuration qualifies when every named row run on the box and a
    theta-grid run on the wafer reproduce the circuit distributions within
    1e-9 total variation.  Returns the lexicographically first qualifying
    configuration together with how many qualified at each stage; raises
    CalibrationFailure (reporting the best-achieving configuration) when none
    does.
    """
    if oracle is None:
        oracle = _default_oracle
    row_matches: list[ConventionConfig] = []
    best_conv, best_dev = None, math.inf
    for conv in _configs():
        dev = _row_deviation(conv, oracle)
        if dev < best_dev:
            best_conv, best_dev = conv, dev
        if dev <= TV_TOLERANCE:
            row_matches.append(conv)
    if not row_matches:
        raise CalibrationFailure(
            "no convention reproduces the named strategy rows; best was "
            f"{best_conv} with max total variation {best_dev:.3e}"
        )

    full_matches: list[tuple[ConventionConfig, float]] = []
    best_wafer_conv, best_wafer_dev = None, math.inf
    for conv in row_matches:
        dev = _wafer_deviation(conv, oracle)
        if dev < best_wafer_dev:
            best_wafer_conv, best_wafer_dev = conv, dev
        if dev <= TV_TOLERANCE:
            full_matches.append((conv, dev))
    if not full_matches:
        raise CalibrationFailure(
            f"{len(row_matches)} conventions reproduce the strategy rows but none "
            f"matches the wafer; best was {best_wafer_conv} with max total "
            f"variation {best_wafer_dev:.3e}"
        )

    selected, wafer_dev = full_matches[0]
    max_dev = max(_row_deviation(selected, oracle), wafer_dev)
    return CalibrationReport(
        selected=selected,
        matched=len(row_matches),
        wafer_matched=len(full_matches),
        max_tv_deviation=max_dev,
    )
