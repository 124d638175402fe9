"""Stateless JSON service over the game, the cluster backends and the sweeps.

Handlers share only the immutable calibrated convention resolved at startup;
the app refuses to start if calibration fails.  Every response is a pure
function of the request (per-request RNG is derived from the request seed),
so interleaving requests can never change any answer.
"""

from __future__ import annotations

from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import backends, cluster, game, kernels, noise, verify

StrategyWire = Union[str, dict]


class PlayRequest(BaseModel):
    strategy_a: StrategyWire
    strategy_b: StrategyWire
    variant: str = "entangled"
    backend: str = "circuit"
    shots: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None


class NoiseRequest(BaseModel):
    strategy_a: StrategyWire = "d"
    strategy_b: StrategyWire = "d"
    sigma: Optional[float] = Field(default=None, ge=0)
    sigmas: Optional[list[float]] = None
    num_samples: int = Field(default=20000, ge=1)
    seed: int = 0
    method: str = "quadrature"


class MixedRequest(BaseModel):
    x: float
    strategy_a: StrategyWire = "d"
    strategy_b: StrategyWire = "d"
    variant: str = "entangled"


def _variant(name: str) -> game.GameVariant:
    try:
        return game.GameVariant(name)
    except ValueError:
        raise backends.BackendError(
            f"unknown variant {name!r}; expected one of "
            f"{[v.value for v in game.GameVariant]}"
        ) from None


def create_app(
    calibration: cluster.CalibrationReport | None = None,
    calibration_path: str | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    if calibration is None:
        if calibration_path is not None:
            calibration = verify.load_calibration(calibration_path)
        else:
            calibration = cluster.calibrate()  # raises CalibrationFailure
    conv = calibration.selected

    app = FastAPI(title="qpd", docs_url=None, redoc_url=None)

    @app.exception_handler(backends.BackendError)
    async def backend_error(_req: Request, exc: backends.BackendError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(_req: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(HTTPException)
    async def http_error(_req: Request, exc: HTTPException):
        return JSONResponse(status_code=exc.status_code, content={"error": str(exc.detail)})

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "kernel_backend": kernels.BACKEND,
            "calibration": calibration.to_json_dict(),
        }

    @app.get("/api/strategies")
    def strategies():
        return {
            "named": list(game.NAMED_STRATEGIES),
            "theta_range": list(game.THETA_RANGE),
            "phi_range": list(game.PHI_RANGE),
            "p_range": [-1.0, 1.0],
            "variants": [v.value for v in game.GameVariant],
            "backends": list(backends.BACKENDS),
        }

    @app.post("/api/play")
    def play(req: PlayRequest):
        result = backends.play_round(
            backends.parse_strategy(req.strategy_a),
            backends.parse_strategy(req.strategy_b),
            _variant(req.variant),
            req.backend,
            conv=conv,
            shots=req.shots,
            seed=req.seed,
        )
        return result.to_json_dict()

    @app.get("/api/surface")
    def surface(steps: int = Query(default=41, ge=2, le=201), variant: str = "entangled"):
        rows = game.payoff_surface(steps, _variant(variant))
        return {"steps": steps, "variant": variant, "rows": [list(r) for r in rows]}

    @app.post("/api/noise")
    def noise_endpoint(req: NoiseRequest):
        profile = game.StrategyProfile(
            backends.parse_strategy(req.strategy_a),
            backends.parse_strategy(req.strategy_b),
        )
        sigmas = req.sigmas if req.sigmas is not None else [req.sigma or 0.0]
        if any(s < 0 for s in sigmas):
            raise ValueError("sigma values must be nonnegative")
        cfg = noise.NoiseConfig(
            sigma=float(sigmas[0]),
            num_samples=req.num_samples,
            seed=req.seed,
            method=req.method,
        )
        points = noise.payoff_gap_curve(sorted(float(s) for s in sigmas), profile, cfg)
        ideal = game.play(profile, game.GameVariant.ENTANGLED)
        return {
            "ideal_payoff_a": ideal.a,
            "points": [p.to_json_dict() for p in points],
        }

    @app.post("/api/mixed")
    def mixed_endpoint(req: MixedRequest):
        profile = game.StrategyProfile(
            backends.parse_strategy(req.strategy_a),
            backends.parse_strategy(req.strategy_b),
        )
        dist, pay, resource = noise.mixed_input_game(
            req.x, profile, _variant(req.variant)
        )
        from . import qsim

        return {
            "x": req.x,
            "distribution": dist.to_json_dict(),
            "payoffs": pay.to_json_dict(),
            "ppt": qsim.is_ppt(resource),
            "negativity": qsim.negativity(resource),
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
