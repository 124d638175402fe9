"""Dispatch one round of the game to the circuit, box or wafer backend.

The circuit backend evaluates any strategy pair analytically.  The cluster
backends accept only what their resources can express: the box takes the
named rows of the pattern dictionary plus arbitrary phase-sector pairs
(theta = 0, via the quadrant scan), the wafer takes (theta, 0) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cluster, game

CIRCUIT = "circuit"
BOX = "box"
WAFER = "wafer"
BACKENDS = (CIRCUIT, BOX, WAFER)

_EPS = 1e-9


class BackendError(ValueError):
    """The requested backend cannot express the requested round."""


def parse_strategy(value) -> game.Strategy:
    """Strategy from its wire form: a name, {"theta","phi"} or {"p": v}."""
    if isinstance(value, str):
        if value not in game.NAMED_STRATEGIES:
            raise BackendError(
                f"unknown strategy {value!r}; named strategies are "
                f"{', '.join(game.NAMED_STRATEGIES)}"
            )
        return game.Strategy.named(value)
    if isinstance(value, dict):
        if set(value) == {"p"}:
            return game.p_to_strategy(float(value["p"]))
        if set(value) == {"theta", "phi"}:
            return game.Strategy.parametric(float(value["theta"]), float(value["phi"]))
        raise BackendError(
            "parametric strategies need exactly the keys {'theta','phi'} or {'p'}"
        )
    raise BackendError(f"cannot parse strategy from {type(value).__name__}")


def parse_strategy_text(text: str) -> game.Strategy:
    """Strategy from CLI text: 'd', 'p:0.5' or 'theta:3.14,phi:0'."""
    text = text.strip()
    if ":" not in text:
        return parse_strategy(text)
    fields = {}
    for part in text.split(","):
        key, _, val = part.partition(":")
        fields[key.strip()] = float(val)
    return parse_strategy(fields)


@dataclass(frozen=True)
class PlayResult:
    distribution: game.OutcomeDistribution
    payoffs: game.Payoffs
    postselection_probability: float | None
    sampled_outcomes: list[str] | None

    def to_json_dict(self) -> dict:
        return {
            "distribution": self.distribution.to_json_dict(),
            "payoffs": self.payoffs.to_json_dict(),
            "postselection_probability": self.postselection_probability,
            "sampled_outcomes": self.sampled_outcomes,
        }


def _box_pattern_for(a: game.Strategy, b: game.Strategy) -> cluster.MeasurementPattern:
    if a.name is not None and b.name is not None:
        key = a.name + b.name
        if key in cluster.STRATEGY_ROWS:
            return cluster.strategy_pattern(key)
    try:
        (ta, pa), (tb, pb) = a.coordinates(), b.coordinates()
    except ValueError as exc:
        raise BackendError(f"box backend cannot express this profile: {exc}") from exc
    if abs(ta) <= _EPS and abs(tb) <= _EPS:
        return cluster.quadrant_pattern(2 * pa, 2 * pb)
    raise BackendError(
        "box backend covers the named rows and the phase sector (theta = 0) only"
    )


def _wafer_pattern_for(a: game.Strategy, b: game.Strategy) -> cluster.MeasurementPattern:
    try:
        (ta, pa), (tb, pb) = a.coordinates(), b.coordinates()
    except ValueError as exc:
        raise BackendError(f"wafer backend cannot express this profile: {exc}") from exc
    if abs(pa) <= _EPS and abs(pb) <= _EPS:
        return cluster.wafer_pattern(ta, tb)
    raise BackendError("wafer backend covers (theta, 0) strategies only")


def play_round(
    strategy_a: game.Strategy,
    strategy_b: game.Strategy,
    variant: game.GameVariant,
    backend: str,
    conv: cluster.ConventionConfig | None = None,
    shots: int | None = None,
    seed: int | None = None,
) -> PlayResult:
    if backend not in BACKENDS:
        raise BackendError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    profile = game.StrategyProfile(strategy_a, strategy_b)
    post = None
    if backend == CIRCUIT:
        dist = game.outcome_distribution(profile, variant)
    else:
        if variant is not game.GameVariant.ENTANGLED:
            raise BackendError("cluster backends implement the entangled game only")
        if conv is None:
            raise BackendError("cluster backends need a calibrated convention")
        pattern = (
            _box_pattern_for(strategy_a, strategy_b)
            if backend == BOX
            else _wafer_pattern_for(strategy_a, strategy_b)
        )
        result = cluster.run_pattern(pattern, conv)
        dist, post = result.distribution, result.postselection_probability
    sampled = None
    if shots is not None:
        sampled = game.sample_outcomes(dist, shots, seed)
    return PlayResult(
        distribution=dist,
        payoffs=game.payoffs(dist),
        postselection_probability=post,
        sampled_outcomes=sampled,
    )
