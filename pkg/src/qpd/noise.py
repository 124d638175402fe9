"""Imperfection studies: angle noise, corrupted resources, mixed inputs.

Two imperfection models are covered:

* Gaussian errors on the strategy angles.  Errors are drawn per player and
  per parameter; the payoff average is computed either by Monte Carlo with
  counter-based seeding (sample i draws from (seed, i), so results are
  independent of how the work is partitioned) or by Gauss-Hermite quadrature,
  which serves as the deterministic ground truth.
* Classically correlated inputs: each player's qubit enters as the mixture
  (1-x)|c><c| + x|d><d|, which after the entangling stage yields a mixed
  resource whose separability can be tested directly.

Angle errors are physical alignment errors of the measurement optics; a
polarization-encoded qubit is rotated by twice the physical misalignment
angle, hence the factor BLOCH_PER_PHYSICAL on every sampled error.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from . import game, kernels, qsim

BLOCH_PER_PHYSICAL = 2.0

MONTE_CARLO = "monte_carlo"
QUADRATURE = "quadrature"

DEFAULT_QUADRATURE_NODES = 32
CP_PAYOFF = 3.0


@dataclass(frozen=True)
class NoiseConfig:
    """Gaussian angle-noise settings.

    ``num_samples`` is the total Monte Carlo sample count, or the node count
    per dimension for quadrature (at least 8).  ``sigma_theta``/``sigma_phi``
    override the shared ``sigma`` per parameter; a zero width drops that
    dimension entirely.
    """

    sigma: float
    num_samples: int = 20000
    seed: int = 0
    method: str = MONTE_CARLO
    sigma_theta: float | None = None
    sigma_phi: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise ValueError("sigma must be finite and nonnegative")
        if self.method not in (MONTE_CARLO, QUADRATURE):
            raise ValueError(f"unknown method {self.method!r}")
        if self.num_samples < 1:
            raise ValueError("num_samples must be positive")
        if self.method == QUADRATURE and self.num_samples < 8:
            raise ValueError("quadrature needs at least 8 nodes per dimension")
        for name in ("sigma_theta", "sigma_phi"):
            v = getattr(self, name)
            if v is not None and (not math.isfinite(v) or v < 0):
                raise ValueError(f"{name} must be finite and nonnegative")

    @property
    def theta_width(self) -> float:
        return self.sigma if self.sigma_theta is None else self.sigma_theta

    @property
    def phi_width(self) -> float:
        return self.sigma if self.sigma_phi is None else self.sigma_phi


@dataclass(frozen=True)
class NoisyResult:
    sigma: float
    mean_payoff_a: float
    mean_payoff_b: float
    std_error_a: float
    std_error_b: float
    negativity_of_resource: float

    def to_json_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "mean_payoff_a": self.mean_payoff_a,
            "mean_payoff_b": self.mean_payoff_b,
            "std_error_a": self.std_error_a,
            "std_error_b": self.std_error_b,
            "negativity_of_resource": self.negativity_of_resource,
        }


def _noise_samples(seed: int, indices: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """Per-sample Gaussian draws; sample i streams from (seed, i)."""
    out = np.empty((len(indices), 4))
    for row, i in enumerate(indices):
        out[row] = np.random.default_rng([seed, int(i)]).standard_normal(4)
    return out * widths


def _payoff_columns(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pay_a = 3 * probs[:, 0] + probs[:, 3] + 5 * probs[:, 2]
    pay_b = 3 * probs[:, 0] + probs[:, 3] + 5 * probs[:, 1]
    return pay_a, pay_b


def _perturbed_payoffs(
    theta: tuple[float, float], phi: tuple[float, float], offsets: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Payoffs for angle offsets (N, 4) ordered (theta_a, phi_a, theta_b, phi_b)."""
    scaled = BLOCH_PER_PHYSICAL * offsets
    probs = kernels.outcome_probs(
        theta[0] + scaled[:, 0],
        phi[0] + scaled[:, 1],
        theta[1] + scaled[:, 2],
        phi[1] + scaled[:, 3],
        kernels.VARIANT_ENTANGLED,
    )
    return _payoff_columns(probs)


def _profile_coordinates(profile: game.StrategyProfile):
    try:
        ta, pa = profile.a.coordinates()
        tb, pb = profile.b.coordinates()
    except ValueError as exc:
        raise ValueError(f"profile not parameterizable for noise sweeps: {exc}") from exc
    return (ta, tb), (pa, pb)


def _quadrature_grid(cfg: NoiseConfig) -> tuple[np.ndarray, np.ndarray]:
    """Offsets (M, 4) and weights (M,) for the active noise dimensions."""
    nodes, weights = hermgauss(cfg.num_samples)
    axes, wts = [], []
    for width in (cfg.theta_width, cfg.phi_width, cfg.theta_width, cfg.phi_width):
        if width > 0:
            axes.append(math.sqrt(2) * width * nodes)
            wts.append(weights / math.sqrt(math.pi))
        else:
            axes.append(np.zeros(1))
            wts.append(np.ones(1))
    grids = np.meshgrid(*axes, indexing="ij")
    wgrids = np.meshgrid(*wts, indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=1)
    weight = np.prod([w.ravel() for w in wgrids], axis=0)
    return offsets, weight


def noisy_payoffs(
    profile: game.StrategyProfile, cfg: NoiseConfig, workers: int = 1
) -> NoisyResult:
    """Average payoffs of the entangled game under Gaussian angle errors."""
    theta, phi = _profile_coordinates(profile)
    neg = qsim.negativity(corrupted_resource(cfg.theta_width, cfg))

    if cfg.method == QUADRATURE:
        offsets, weight = _quadrature_grid(cfg)
        pay_a, pay_b = _perturbed_payoffs(theta, phi, offsets)
        return NoisyResult(
            sigma=cfg.sigma,
            mean_payoff_a=float(weight @ pay_a),
            mean_payoff_b=float(weight @ pay_b),
            std_error_a=0.0,
            std_error_b=0.0,
            negativity_of_resource=neg,
        )

    n = cfg.num_samples
    widths = np.array([cfg.theta_width, cfg.phi_width, cfg.theta_width, cfg.phi_width])
    indices = np.arange(n)
    if workers <= 1:
        offsets = _noise_samples(cfg.seed, indices, widths)
        pay_a, pay_b = _perturbed_payoffs(theta, phi, offsets)
    else:
        pay_a = np.empty(n)
        pay_b = np.empty(n)
        chunks = np.array_split(indices, workers)

        def job(chunk):
            offs = _noise_samples(cfg.seed, chunk, widths)
            return chunk, _perturbed_payoffs(theta, phi, offs)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk, (ca, cb) in pool.map(job, chunks):
                pay_a[chunk] = ca
                pay_b[chunk] = cb
    return NoisyResult(
        sigma=cfg.sigma,
        mean_payoff_a=float(pay_a.mean()),
        mean_payoff_b=float(pay_b.mean()),
        std_error_a=float(pay_a.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        std_error_b=float(pay_b.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        negativity_of_resource=neg,
    )


@dataclass(frozen=True)
class GapPoint:
    sigma: float
    gap_a: float
    stderr_a: float
    negativity: float

    def to_json_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "gap_a": self.gap_a,
            "stderr_a": self.stderr_a,
            "negativity": self.negativity,
        }


def payoff_gap_curve(
    sigmas: list[float], profile: game.StrategyProfile, cfg: NoiseConfig
) -> list[GapPoint]:
    """Ideal-minus-average payoff of player A along a sigma sweep."""
    if any(b < a for a, b in zip(sigmas, sigmas[1:])):
        raise ValueError("sigmas must be sorted ascending")
    ideal = game.play(profile, game.GameVariant.ENTANGLED).a
    points = []
    for sigma in sigmas:
        result = noisy_payoffs(
            profile,
            NoiseConfig(
                sigma=float(sigma),
                num_samples=cfg.num_samples,
                seed=cfg.seed,
                method=cfg.method,
                sigma_theta=None if cfg.sigma_theta is None else float(sigma),
                sigma_phi=None if cfg.sigma_phi is None else cfg.sigma_phi,
            ),
        )
        points.append(
            GapPoint(
                sigma=float(sigma),
                gap_a=ideal - result.mean_payoff_a,
                stderr_a=result.std_error_a,
                negativity=result.negativity_of_resource,
            )
        )
    return points


def gap_curve_to_csv(points: list[GapPoint]) -> str:
    buf = io.StringIO()
    buf.write("sigma,gap_a,stderr_a,negativity\n")
    for p in points:
        buf.write(
            f"{p.sigma:.15g},{p.gap_a:.15g},{p.stderr_a:.15g},{p.negativity:.15g}\n"
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# corrupted resource


def entangled_resource() -> qsim.PureState:
    """The post-entangling-stage pure resource for the |cc> input."""
    state = qsim.basis_state(2, 0)
    return qsim.PureState(2, game.ENTANGLE_STAGE @ state.amplitudes)


def corrupted_resource(sigma: float, cfg: NoiseConfig | None = None) -> qsim.DensityMatrix:
    """Average the entangled resource over local y-rotations of Gaussian width.

    The strategy family satisfies U(theta + e, 0) = U(e, 0) U(theta, 0), so
    averaging the post-stage resource over local U(e, 0) rotations is the
    exact mixed state reaching the players under theta errors.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    nodes_per_dim = (
        cfg.num_samples
        if cfg is not None and cfg.method == QUADRATURE
        else DEFAULT_QUADRATURE_NODES
    )
    base = entangled_resource()
    if sigma == 0:
        return qsim.pure_to_density(base)
    nodes, weights = hermgauss(nodes_per_dim)
    eps = BLOCH_PER_PHYSICAL * math.sqrt(2) * sigma * nodes
    weights = weights / math.sqrt(math.pi)
    rotations = [qsim.ry(float(e)) for e in eps]
    acc = np.zeros((4, 4), dtype=complex)
    for wi, ra in zip(weights, rotations):
        for wj, rb in zip(weights, rotations):
            psi = np.kron(ra, rb) @ base.amplitudes
            acc += (wi * wj) * np.outer(psi, psi.conj())
    acc = 0.5 * (acc + acc.conj().T)  # scrub quadrature roundoff
    acc /= np.trace(acc).real
    return qsim.DensityMatrix(2, acc)


# ---------------------------------------------------------------------------
# classically correlated inputs


@dataclass(frozen=True)
class MixedInputConfig:
    x: float

    def __post_init__(self):
        if not 0.0 <= self.x <= 0.5:
            raise ValueError(f"x must lie in [0, 0.5], got {self.x}")


def mixed_input_state(x: float) -> qsim.DensityMatrix:
    """Product input with each qubit in (1-x)|c><c| + x|d><d|."""
    single = np.diag([1 - x, x]).astype(complex)
    return qsim.DensityMatrix(2, np.kron(single, single))


def _stage_one(variant: game.GameVariant) -> np.ndarray:
    if variant is game.GameVariant.ENTANGLED:
        return game.ENTANGLE_STAGE
    if variant is game.GameVariant.SEPARABLE:
        return np.kron(qsim.HADAMARD, qsim.HADAMARD)
    return np.eye(4, dtype=complex)


def mixed_input_game(
    x: MixedInputConfig | float,
    profile: game.StrategyProfile,
    variant: game.GameVariant = game.GameVariant.ENTANGLED,
) -> tuple[game.OutcomeDistribution, game.Payoffs, qsim.DensityMatrix]:
    """Play the game on the classically correlated input.

    Also returns the resource shared after the first stage, the object whose
    separability decides whether the players hold quantum correlations.
    """
    cfg = x if isinstance(x, MixedInputConfig) else MixedInputConfig(float(x))
    rho_in = mixed_input_state(cfg.x)
    stage = _stage_one(variant)
    resource = qsim.DensityMatrix(2, stage @ rho_in.matrix @ stage.conj().T)
    final = game.evolve(profile, variant, rho_in)
    dist = game.OutcomeDistribution.from_array(
        np.clip(final.diagonal_probabilities(), 0.0, 1.0)
    )
    return dist, game.payoffs(dist), resource


def _resource_min_pt_eigenvalue(x: float) -> float:
    _, _, resource = mixed_input_game(x, game.StrategyProfile.of("c", "c"))
    pt = qsim.partial_transpose(resource, [1])
    return float(np.linalg.eigvalsh(pt)[0])


def separability_threshold(tol: float = 1e-4) -> float:
    """Smallest x at which the shared resource becomes separable.

    Verifies on a 51-point grid that the minimum partial-transpose eigenvalue
    is monotone in x before bisecting, and refuses to bisect otherwise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    xs = np.linspace(0.0, 0.5, 51)
    vals = [_resource_min_pt_eigenvalue(float(x)) for x in xs]
    if any(b < a - 1e-12 for a, b in zip(vals, vals[1:])):
        raise RuntimeError(
            "minimum partial-transpose eigenvalue is not monotone in x; "
            "bisection for the separability boundary would be unsound"
        )
    if vals[0] >= -qsim.PPT_DEFAULT_TOL:
        return 0.0
    if vals[-1] < -qsim.PPT_DEFAULT_TOL:
        raise RuntimeError("resource still entangled at x = 0.5")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _resource_min_pt_eigenvalue(mid) >= -qsim.PPT_DEFAULT_TOL:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ParetoScanReport:
    x: float
    steps: int
    profiles_at_or_above_cp: list[tuple[float, float]]
    max_symmetric_payoff: float

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "steps": self.steps,
            "profiles_at_or_above_cp": self.profiles_at_or_above_cp,
            "max_symmetric_payoff": self.max_symmetric_payoff,
        }


def pareto_scan_mixed(
    x: MixedInputConfig | float,
    steps: int,
    variant: game.GameVariant = game.GameVariant.ENTANGLED,
) -> ParetoScanReport:
    """Scan the strategy grid on a mixed input for jointly cooperative payoffs."""
    cfg = x if isinstance(x, MixedInputConfig) else MixedInputConfig(float(x))
    if steps < 3:
        raise ValueError("steps must be >= 3")
    rho_in = mixed_input_state(cfg.x)
    weights = rho_in.diagonal_probabilities()

    ps = np.linspace(-1.0, 1.0, steps)
    theta = np.where(ps >= 0, ps * math.pi, 0.0)
    phi = np.where(ps >= 0, 0.0, -ps * math.pi / 2)
    ua = _strategy_batch_matrices(theta, phi)

    stage_pre = _stage_one(variant)
    stage_post = {
        game.GameVariant.ENTANGLED: game.DISENTANGLE_STAGE,
        game.GameVariant.SEPARABLE: np.kron(qsim.HADAMARD, qsim.HADAMARD),
        game.GameVariant.CLASSICAL_LIMIT: np.eye(4, dtype=complex),
    }[variant]

    hits = []
    max_sym = -math.inf
    pay_a = np.empty((steps, steps))
    pay_b = np.empty((steps, steps))
    for i in range(steps):
        # batch over j: local = UA_i kron UB_j
        local = np.einsum("ab,ncd->nacbd", ua[i], ua).reshape(steps, 4, 4)
        circ = np.einsum("kl,nlm,mo->nko", stage_post, local, stage_pre)
        probs = np.einsum("nkl,l->nk", np.abs(circ) ** 2, weights)
        pa, pb = _payoff_columns(probs)
        pay_a[i], pay_b[i] = pa, pb
    for i in range(steps):
        for j in range(steps):
            if pay_a[i, j] >= CP_PAYOFF - 1e-9 and pay_b[i, j] >= CP_PAYOFF - 1e-9:
                hits.append((float(ps[i]), float(ps[j])))
        max_sym = max(max_sym, float(pay_a[i, i]))
    return ParetoScanReport(
        x=cfg.x,
        steps=steps,
        profiles_at_or_above_cp=hits,
        max_symmetric_payoff=max_sym,
    )


def _strategy_batch_matrices(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(-1j * phi) * c
    u[..., 0, 1] = -s
    u[..., 1, 0] = s
    u[..., 1, 1] = np.exp(1j * phi) * c
    return u


def mixed_sweep_to_csv(rows: list[tuple[float, float, float, bool]]) -> str:
    buf = io.StringIO()
    buf.write("x,payoff_a,payoff_b,ppt\n")
    for x, pa, pb, ppt in rows:
        buf.write(f"{x:.15g},{pa:.15g},{pb:.15g},{str(ppt).lower()}\n")
    return buf.getvalue()
