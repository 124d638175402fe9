"""Command-line interface: verification, sweeps, single rounds, the service."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import backends, cluster, game, noise, verify


def _write_or_print(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_verify(args) -> int:
    ok, report = verify.run_verify(calibration_out=args.calibration_out)
    for check in report["checks"]:
        status = "PASS" if check["ok"] else "FAIL"
        print(f"[{status}] {check['name']}: {check['detail']}")
    if ok:
        print(f"calibration written to {args.calibration_out}")
    else:
        print("verification FAILED", file=sys.stderr)
    return 0 if ok else 1


def cmd_surface(args) -> int:
    rows = game.payoff_surface(args.steps, game.GameVariant(args.variant))
    _write_or_print(game.surface_to_csv(rows), args.out)
    return 0


def cmd_play(args) -> int:
    conv = None
    if args.backend != backends.CIRCUIT:
        if args.calibration and Path(args.calibration).exists():
            conv = verify.load_calibration(args.calibration).selected
        else:
            conv = cluster.calibrate().selected
    result = backends.play_round(
        backends.parse_strategy_text(args.a),
        backends.parse_strategy_text(args.b),
        game.GameVariant(args.variant),
        args.backend,
        conv=conv,
        shots=args.shots,
        seed=args.seed,
    )
    print(json.dumps(result.to_json_dict(), indent=2))
    return 0


def cmd_nash(args) -> int:
    points = game.find_nash(args.steps, game.GameVariant(args.variant))
    payload = []
    for pa, pb in points:
        pay = game.play(
            game.StrategyProfile(game.p_to_strategy(pa), game.p_to_strategy(pb)),
            game.GameVariant(args.variant),
        )
        payload.append({"p_a": pa, "p_b": pb, "payoff_a": pay.a, "payoff_b": pay.b})
    print(json.dumps({"steps": args.steps, "variant": args.variant, "equilibria": payload}, indent=2))
    return 0


def _parse_sigmas(text: str) -> list[float]:
    lo, hi, step = (float(x) for x in text.split(":"))
    if step <= 0:
        raise ValueError("sigma step must be positive")
    out, s = [], lo
    while s <= hi + 1e-12:
        out.append(round(s, 12))
        s += step
    return out


def cmd_noise(args) -> int:
    a_text, _, b_text = args.profile.partition(",")
    profile = game.StrategyProfile(
        backends.parse_strategy_text(a_text), backends.parse_strategy_text(b_text or a_text)
    )
    cfg = noise.NoiseConfig(
        sigma=0.0, num_samples=args.samples, seed=args.seed, method=args.method
    )
    points = noise.payoff_gap_curve(_parse_sigmas(args.sigmas), profile, cfg)
    _write_or_print(noise.gap_curve_to_csv(points), args.out)
    return 0


def cmd_mixed(args) -> int:
    from . import qsim

    if args.threshold:
        x_star = noise.separability_threshold()
        print(json.dumps({"separability_threshold": x_star}, indent=2))
        return 0
    rows = []
    for x in args.x:
        dist, pay, resource = noise.mixed_input_game(
            x, game.StrategyProfile.of("d", "d")
        )
        rows.append((x, pay.a, pay.b, qsim.is_ppt(resource)))
    _write_or_print(noise.mixed_sweep_to_csv(rows), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    calibration_path = (
        args.calibration if args.calibration and Path(args.calibration).exists() else None
    )
    app = create_app(calibration_path=calibration_path, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the backend-equivalence suite")
    p.add_argument("--calibration-out", default="calibration.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("surface", help="payoff surface as CSV")
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--variant", default="entangled",
                   choices=[v.value for v in game.GameVariant])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("play", help="play one round")
    p.add_argument("--a", required=True, help="strategy: c|d|q|m, p:VAL or theta:VAL,phi:VAL")
    p.add_argument("--b", required=True)
    p.add_argument("--variant", default="entangled",
                   choices=[v.value for v in game.GameVariant])
    p.add_argument("--backend", default="circuit", choices=backends.BACKENDS)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--calibration", default="calibration.json")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("nash", help="grid equilibria")
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--variant", default="entangled",
                   choices=[v.value for v in game.GameVariant])
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("noise", help="payoff-gap sweep as CSV")
    p.add_argument("--profile", default="d,d")
    p.add_argument("--sigmas", default="0:1.2:0.1", help="LO:HI:STEP")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", default="quadrature",
                   choices=[noise.MONTE_CARLO, noise.QUADRATURE])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("mixed", help="classically correlated input study")
    p.add_argument("--x", type=float, action="append", default=None)
    p.add_argument("--threshold", action="store_true",
                   help="bisect for the separability threshold instead")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("serve", help="run the JSON service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", default=None, help="directory of UI assets to serve at /")
    p.add_argument("--calibration", default="calibration.json")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "mixed" and not args.threshold and not args.x:
        args.x = [0.0, 0.1, 0.2, 0.29, 0.35, 0.5]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
