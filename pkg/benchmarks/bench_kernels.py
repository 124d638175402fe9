"""Benchmark the compiled batch kernel against the pure-numpy fallback.

Times the dominant workload (outcome probabilities for large strategy
batches, as issued by the quadrature sweeps and grid scans) plus one
end-to-end quadrature sweep.  Run as ``python benchmarks/bench_kernels.py``.
"""

import time

import numpy as np

from qpd import game, noise
from qpd.kernels import fallback

try:
    from qpd.kernels import _native as native
except ImportError:
    native = None


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_batches():
    rng = np.random.default_rng(0)
    print(f"{'batch':>10} {'variant':>10} {'fallback':>12} {'native':>12} {'speedup':>8}")
    for n in (10_000, 100_000, 1_000_000):
        args = (
            rng.uniform(0, np.pi, n),
            rng.uniform(0, np.pi / 2, n),
            rng.uniform(0, np.pi, n),
            rng.uniform(0, np.pi / 2, n),
        )
        for code, name in ((0, "entangled"), (1, "separable"), (2, "classical")):
            t_fb = time_call(fallback.outcome_probs, *args, code)
            if native is None:
                print(f"{n:>10} {name:>10} {t_fb * 1e3:>10.1f}ms {'n/a':>12}")
                continue
            t_nat = time_call(native.outcome_probs, *args, code)
            err = np.abs(
                fallback.outcome_probs(*args, code) - native.outcome_probs(*args, code)
            ).max()
            assert err <= 1e-13, f"backends disagree by {err}"
            print(
                f"{n:>10} {name:>10} {t_fb * 1e3:>10.1f}ms {t_nat * 1e3:>10.1f}ms "
                f"{t_fb / t_nat:>7.1f}x"
            )


def bench_quadrature_sweep():
    profile = game.StrategyProfile.of("d", "d")
    cfg = noise.NoiseConfig(sigma=0.0, num_samples=32, method=noise.QUADRATURE)
    start = time.perf_counter()
    noise.payoff_gap_curve([0.0, 0.3, 0.6, 0.9, 1.2], profile, cfg)
    elapsed = time.perf_counter() - start
    from qpd import kernels

    print(f"\nfull quadrature gap sweep (5 sigmas, 32^4 nodes each) "
          f"[{kernels.BACKEND}]: {elapsed:.2f}s")


if __name__ == "__main__":
    bench_batches()
    bench_quadrature_sweep()
