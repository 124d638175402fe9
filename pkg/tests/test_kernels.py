import numpy as np

from conftest import oracle_distribution, u_matrix
from qpd import kernels
from qpd.kernels import fallback

VARIANTS = {
    kernels.VARIANT_ENTANGLED: "entangled",
    kernels.VARIANT_SEPARABLE: "separable",
    kernels.VARIANT_CLASSICAL: "classical_limit",
}


def _random_params(n, seed):
    rng = np.random.default_rng(seed)
    return (
        rng.uniform(0, np.pi, n),
        rng.uniform(0, np.pi / 2, n),
        rng.uniform(0, np.pi, n),
        rng.uniform(0, np.pi / 2, n),
    )


def test_fallback_matches_oracle():
    ta, pa, tb, pb = _random_params(50, 17)
    for code, name in VARIANTS.items():
        probs = fallback.outcome_probs(ta, pa, tb, pb, code)
        for i in range(50):
            expected = oracle_distribution(
                u_matrix(ta[i], pa[i]), u_matrix(tb[i], pb[i]), name
            )
            assert np.abs(probs[i] - expected).max() <= 1e-13


def test_active_backend_matches_fallback():
    ta, pa, tb, pb = _random_params(500, 23)
    for code in VARIANTS:
        active = kernels.outcome_probs(ta, pa, tb, pb, code)
        pure = fallback.outcome_probs(ta, pa, tb, pb, code)
        assert np.abs(active - pure).max() <= 1e-13


def test_probabilities_are_normalized():
    ta, pa, tb, pb = _random_params(2000, 31)
    for code in VARIANTS:
        probs = kernels.outcome_probs(ta, pa, tb, pb, code)
        assert probs.min() >= -1e-15
        assert np.abs(probs.sum(axis=1) - 1).max() <= 1e-12


def test_noise_offsets_outside_parameter_ranges_are_fine():
    # noise pushes angles outside the strategy box; the kernel must not care
    rng = np.random.default_rng(41)
    ta = np.pi + rng.normal(0, 2.0, 200)
    pa = rng.normal(0, 2.0, 200)
    probs = kernels.outcome_probs(ta, pa, ta[::-1].copy(), pa[::-1].copy(),
                                  kernels.VARIANT_ENTANGLED)
    assert np.abs(probs.sum(axis=1) - 1).max() <= 1e-12
    for i in (0, 57, 199):
        expected = oracle_distribution(
            u_matrix(ta[i], pa[i]), u_matrix(ta[199 - i], pa[199 - i]), "entangled"
        )
        assert np.abs(probs[i] - expected).max() <= 1e-13
