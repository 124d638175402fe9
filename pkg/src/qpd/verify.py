"""End-to-end equivalence suite: cluster backends against the circuit model.

Run by ``qpd verify`` (and by the service at startup through ``calibrate``).
Produces a machine-readable report and persists the selected measurement
conventions so later runs never serve uncalibrated cluster results.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import cluster, game

POSTSELECTION_EXPECTED = 0.25
WAFER_POSTSELECTION_EXPECTED = 1 / 16


def _check(name: str, ok: bool, detail: str) -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def run_verify(calibration_out: str | Path | None = None) -> tuple[bool, dict]:
    """Calibrate and run every backend-equivalence check.

    Returns (all_ok, report).  The report lists one entry per check; the
    calibration block mirrors what gets written to ``calibration_out``.
    """
    checks: list[dict] = []
    try:
        report = cluster.calibrate()
    except cluster.CalibrationFailure as exc:
        return False, {
            "ok": False,
            "calibration": None,
            "checks": [_check("calibration", False, str(exc))],
        }
    conv = report.selected
    checks.append(
        _check(
            "calibration",
            True,
            f"{report.matched} row-matching conventions, "
            f"{report.wafer_matched} full matches; max TV {report.max_tv_deviation:.3e}",
        )
    )

    for name in cluster.STRATEGY_ROWS:
        result = cluster.run_pattern(cluster.strategy_pattern(name), conv)
        target = game.outcome_distribution(
            cluster.row_profile(name), game.GameVariant.ENTANGLED
        )
        tv = cluster.total_variation(result.distribution, target)
        post_err = abs(result.postselection_probability - POSTSELECTION_EXPECTED)
        checks.append(
            _check(
                f"row {name[0]}_A {name[1]}_B",
                tv <= cluster.TV_TOLERANCE and post_err <= 1e-9,
                f"TV {tv:.3e}, postselection {result.postselection_probability:.12f}",
            )
        )

    # exact classical payoff table on the bare game
    classical_expected = {
        ("c", "c"): (3.0, 3.0),
        ("c", "d"): (0.0, 5.0),
        ("d", "c"): (5.0, 0.0),
        ("d", "d"): (1.0, 1.0),
    }
    worst = 0.0
    for (a, b), (ea, eb) in classical_expected.items():
        pay = game.play(game.StrategyProfile.of(a, b), game.GameVariant.CLASSICAL_LIMIT)
        worst = max(worst, abs(pay.a - ea), abs(pay.b - eb))
    checks.append(
        _check("classical limit table", worst <= 1e-12, f"max error {worst:.3e}")
    )

    pay = game.play(game.StrategyProfile.of("d", "d"), game.GameVariant.SEPARABLE)
    checks.append(
        _check(
            "separable (d,d) stays at the equilibrium payoff",
            abs(pay.a - 1.0) <= 1e-9 and abs(pay.b - 1.0) <= 1e-9,
            f"payoffs ({pay.a:.12f}, {pay.b:.12f})",
        )
    )

    # quadrant scan: interior map hypothesis phi = mu/2, reported as data
    worst_tv = 0.0
    for mu in np.linspace(0.0, math.pi, 11):
        res = cluster.run_pattern(cluster.quadrant_pattern(float(mu), 0.0), conv)
        target = game.outcome_distribution(
            game.StrategyProfile(
                game.Strategy.parametric(0.0, cluster.quadrant_phase_map(float(mu))),
                game.Strategy.named("c"),
            ),
            game.GameVariant.ENTANGLED,
        )
        worst_tv = max(worst_tv, cluster.total_variation(res.distribution, target))
    checks.append(
        _check(
            "quadrant map phi = mu/2",
            worst_tv <= cluster.TV_TOLERANCE,
            f"max TV {worst_tv:.3e} over 11 import angles",
        )
    )

    # wafer behavioral contract on a coarse grid
    worst_tv, worst_post = 0.0, 0.0
    for ta in np.linspace(0.0, math.pi, 5):
        for tb in np.linspace(0.0, math.pi, 5):
            res = cluster.run_pattern(cluster.wafer_pattern(float(ta), float(tb)), conv)
            target = game.outcome_distribution(
                game.StrategyProfile(
                    game.Strategy.parametric(float(ta), 0.0),
                    game.Strategy.parametric(float(tb), 0.0),
                ),
                game.GameVariant.ENTANGLED,
            )
            worst_tv = max(worst_tv, cluster.total_variation(res.distribution, target))
            worst_post = max(
                worst_post,
                abs(res.postselection_probability - WAFER_POSTSELECTION_EXPECTED),
            )
    checks.append(
        _check(
            "wafer grid",
            worst_tv <= cluster.TV_TOLERANCE and worst_post <= 1e-9,
            f"max TV {worst_tv:.3e}, postselection error {worst_post:.3e}",
        )
    )

    ok = all(c["ok"] for c in checks)
    out = {"ok": ok, "calibration": report.to_json_dict(), "checks": checks}
    if calibration_out is not None and ok:
        Path(calibration_out).write_text(json.dumps(report.to_json_dict(), indent=2))
    return ok, out


def load_calibration(path: str | Path) -> cluster.CalibrationReport:
    data = json.loads(Path(path).read_text())
    return cluster.CalibrationReport(
        selected=cluster.ConventionConfig.from_json_dict(data["selected"]),
        matched=int(data["matched"]),
        wafer_matched=int(data["wafer_matched"]),
        max_tv_deviation=float(data["max_tv_deviation"]),
    )
