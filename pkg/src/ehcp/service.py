"""Read-only HTTP service over a fitted model and an ingested data bundle.

All state is immutable after startup, so concurrent requests are safe by
construction. Responses echo the seeds that produced them; what-if requests
with the same body and seed return identical answers.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import bart as bart_mod
from .engine import (
    DEFAULT_GRID_STEP,
    DEFAULT_M,
    Model,
    build_hypothetical,
    dataset_base_row,
    ehcp_estimate,
    partial_dependence_raw,
    play_report,
)
from .features import CovariateSchema, PassFeatures
from .imputation import (
    DonorPool,
    JOINT_DONOR,
    MODES,
    build_donor_pool,
    partition_schema,
)
from .modelfile import play_to_dict
from .tracking import PlaySequence, identify_passer


class WhatIfRequest(BaseModel):
    game_id: str
    play_id: str
    receiver_id: str
    t: float = Field(description="hypothetical throw time, seconds after snap")
    pinning: dict[str, float] = Field(default_factory=dict)
    M: int = Field(default=DEFAULT_M, ge=1)
    mode: Literal["joint-donor", "per-group"] = JOINT_DONOR
    seed: int = 0
    include_draws: bool = False


def _field_error(loc: list, msg: str) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"detail": [{"loc": loc, "msg": msg,
                                             "type": "value_error"}]})


def create_app(model: Model, plays: list[PlaySequence],
               features: list[PassFeatures],
               schema: CovariateSchema | None = None,
               pool: DonorPool | None = None) -> FastAPI:
    schema = schema or model.schema
    pool = pool or build_donor_pool(features, schema)
    partition = partition_schema(schema)
    plays_by_key = {p.key: p for p in plays}
    fit_seed = getattr(model.posterior, "seed", None)
    if fit_seed is None:
        fit_seed = model.posterior.config.seed

    app = FastAPI(title="EHCP query service", version="1.0")

    def _get_play(game_id: str, play_id: str) -> PlaySequence:
        play = plays_by_key.get((game_id, play_id))
        if play is None:
            raise HTTPException(status_code=404,
                                detail=f"play {game_id}/{play_id} not found")
        return play

    @app.get("/plays")
    def list_plays() -> dict:
        return {
            "plays": [
                {
                    "game_id": p.meta.game_id,
                    "play_id": p.meta.play_id,
                    "pass_result": p.meta.pass_result,
                    "targeted_receiver": p.targeted_receiver,
                    "throw_time": p.seconds_from_snap(p.timeline.throw_frame),
                    "arrival_time": p.seconds_from_snap(p.timeline.arrival_frame),
                }
                for p in plays
            ],
            "count": len(plays),
        }

    @app.get("/plays/{game_id}/{play_id}")
    def get_play(game_id: str, play_id: str) -> dict:
        play = _get_play(game_id, play_id)
        passer = identify_passer(play)
        payload = play_to_dict(play)
        payload["passer_id"] = passer
        payload["route_runners"] = [
            rid for rid in sorted(play.entities_on_side(play.offense_side))
            if rid != passer
        ]
        payload["throw_time"] = play.seconds_from_snap(play.timeline.throw_frame)
        payload["arrival_time"] = play.seconds_from_snap(play.timeline.arrival_frame)
        payload["observable_covariates"] = list(partition.observable)
        payload["missing_covariates"] = list(partition.missing)
        return payload

    @app.get("/plays/{game_id}/{play_id}/trajectories")
    def get_trajectories(game_id: str, play_id: str,
                         step: float = Query(default=DEFAULT_GRID_STEP, gt=0),
                         M: int = Query(default=DEFAULT_M, ge=1),
                         mode: Literal["joint-donor", "per-group"] = JOINT_DONOR,
                         seed: int = 0) -> dict:
        play = _get_play(game_id, play_id)
        report = play_report(model, play, pool, step=step, M=M, mode=mode,
                             seed=seed)
        payload = report.to_dict(include_draws=False)
        payload["seeds"] = {"imputation_seed": seed, "fit_seed": fit_seed}
        return payload

    @app.post("/whatif")
    def whatif(request: WhatIfRequest):
        play = plays_by_key.get((request.game_id, request.play_id))
        if play is None:
            raise HTTPException(
                status_code=404,
                detail=f"play {request.game_id}/{request.play_id} not found")
        for key in request.pinning:
            if key not in partition.missing:
                return _field_error(
                    ["body", "pinning", key],
                    f"{key!r} is not an imputable covariate; valid keys: "
                    f"{', '.join(partition.missing)}")
        duration = play.seconds_from_snap(play.timeline.arrival_frame)
        if request.t < 0:
            return _field_error(["body", "t"],
                                "t is before the snap (must be >= 0)")
        try:
            hypo = build_hypothetical(play, request.receiver_id, request.t,
                                      pinning=request.pinning,
                                      mode=request.mode, M=request.M)
        except ValueError as err:
            loc = ("receiver_id"
                   if request.receiver_id not in play.tracks else "t")
            return _field_error(["body", loc], str(err))
        estimate = ehcp_estimate(model, hypo, pool, seed=request.seed)
        counts, edges = np.histogram(estimate.draw_values, bins=20,
                                     range=(0.0, 1.0))
        payload = estimate.to_dict(include_draws=request.include_draws)
        payload.update({
            "game_id": request.game_id,
            "play_id": request.play_id,
            "receiver_id": request.receiver_id,
            "t": request.t,
            "play_duration": duration,
            "pinning": dict(request.pinning),
            "histogram": {"counts": counts.tolist(),
                          "edges": [float(e) for e in edges]},
            "seeds": {"imputation_seed": request.seed, "fit_seed": fit_seed},
        })
        return payload

    @app.get("/model/importance")
    def importance() -> dict:
        if model.kind == "bart":
            entries = [
                {"variable": name, "share": share}
                for name, share in bart_mod.splitting_importance(model.posterior)
            ]
        else:
            entries = sorted(
                (
                    {"variable": row["name"], "mean": row["mean"],
                     "sd": row["sd"], "q2.5": row["q2.5"],
                     "q97.5": row["q97.5"]}
                    for row in model.posterior.coefficient_summary()
                ),
                key=lambda r: -abs(r["mean"]),
            )
        return {"kind": model.kind, "entries": entries,
                "seeds": {"fit_seed": fit_seed}}

    @app.get("/model/pdp")
    def pdp(variable: str, points: int = Query(default=25, ge=2)) -> dict:
        try:
            cov = schema.covariate(variable)
        except KeyError:
            return _field_error(
                ["query", "variable"],
                f"unknown covariate {variable!r}; valid names: "
                f"{', '.join(schema.names)}")
        if cov.kind == "categorical":
            grid: list = list(cov.levels)
        else:
            observed = np.array([float(pf.covariates[variable])
                                 for pf in features])
            grid = list(np.linspace(observed.min(), observed.max(), points))
        base = dataset_base_row(features, schema)
        curve = partial_dependence_raw(model, base, variable, grid)
        return {"variable": variable, "points": curve, "base": base,
                "seeds": {"fit_seed": fit_seed}}

    return app
