"""Posterior EHCP for hypothetical passes, trajectories, and play reports.

An estimate fixes what is observable at the hypothetical throw time, draws M
missing blocks from the donor pool once, and averages the model's completion
probability over those blocks separately for every posterior draw. Reporting
follows the posterior mean with a central 95% interval. Imputations are
shared across posterior draws (and, via a shared seed, across trajectory grid
points) so differences reflect the model rather than imputation noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .bart import BartPosterior
from .features import (
    CovariateSchema,
    DEFAULT_SCHEMA,
    PassFeatures,
    StandardizationParams,
    extract_pass_features,
    observable_covariates_at,
)
from .imputation import DonorPool, JOINT_DONOR, partition_schema, sample_missing
from .logistic import LogisticPosterior
from .tracking import FRAMES_PER_SECOND, PlaySequence, identify_passer

DEFAULT_M = 100
DEFAULT_GRID_STEP = 0.5


@dataclass
class Model:
    """A fitted posterior plus everything needed to score raw covariate rows."""

    kind: str  # "logistic" | "bart"
    posterior: LogisticPosterior | BartPosterior
    schema: CovariateSchema
    standardization: StandardizationParams

    def encode(self, rows: Sequence[Mapping[str, float | str]]) -> np.ndarray:
        raw = self.schema.encode(rows)
        return self.standardization.transform(raw, self.schema.column_names)

    def predict_draws_raw(self, rows: Sequence[Mapping[str, float | str]]
                          ) -> np.ndarray:
        """Probability per posterior draw per row, shape (S, n)."""
        return self.posterior.predict_draws(self.encode(rows))

    @property
    def n_draws(self) -> int:
        return self.posterior.n_draws


@dataclass(frozen=True)
class HypotheticalPass:
    game_id: str
    play_id: str
    receiver_id: str
    t: float  # hypothetical throw time, seconds after the snap
    observables: dict[str, float | str]
    pinning: dict[str, float] = field(default_factory=dict)
    mode: str = JOINT_DONOR
    M: int = DEFAULT_M


@dataclass
class EhcpEstimate:
    draw_values: np.ndarray  # one EHCP value per posterior draw
    mean: float
    q2_5: float
    q97_5: float
    M: int
    mode: str
    seed: int

    def to_dict(self, include_draws: bool = False) -> dict:
        out = {
            "mean": self.mean, "q2.5": self.q2_5, "q97.5": self.q97_5,
            "M": self.M, "mode": self.mode, "seed": self.seed,
        }
        if include_draws:
            out["draws"] = [float(v) for v in self.draw_values]
        return out


def build_hypothetical(play: PlaySequence, receiver_id: str, t: float,
                       pinning: Mapping[str, float] | None = None,
                       mode: str = JOINT_DONOR, M: int = DEFAULT_M,
                       prior_cumulative: float = 0.0) -> HypotheticalPass:
    """Read the observable covariates for a throw at t seconds after snap."""
    if t < 0:
        raise ValueError("hypothetical throw time is before the snap")
    frame = play.frame_for_time(t)
    if play.frame_at(receiver_id, frame) is None:
        raise ValueError(
            f"receiver {receiver_id} is not tracked at t={t:.2f}s "
            f"(frame {frame}) in play {play.key}")
    observables = observable_covariates_at(play, receiver_id, frame,
                                           prior_cumulative)
    return HypotheticalPass(
        game_id=play.meta.game_id, play_id=play.meta.play_id,
        receiver_id=receiver_id, t=t, observables=observables,
        pinning=dict(pinning or {}), mode=mode, M=M,
    )


def _summarize(draw_values: np.ndarray, M: int, mode: str,
               seed: int) -> EhcpEstimate:
    return EhcpEstimate(
        draw_values=draw_values,
        mean=float(draw_values.mean()),
        q2_5=float(np.quantile(draw_values, 0.025)),
        q97_5=float(np.quantile(draw_values, 0.975)),
        M=M, mode=mode, seed=seed,
    )


def ehcp_estimate(model: Model, hypo: HypotheticalPass, pool: DonorPool,
                  seed: int = 0, replace: bool = True) -> EhcpEstimate:
    """Posterior EHCP draws for one hypothetical pass.

    Missing blocks are drawn once and reused for every posterior draw. When
    the pinning covers the whole missing set the average degenerates, so the
    completed row is scored directly and the EHCP draws equal the prediction
    draws exactly.
    """
    missing_names = partition_schema(model.schema).missing
    if set(hypo.pinning) >= set(missing_names):
        row = dict(hypo.observables)
        row.update({name: hypo.pinning[name] for name in missing_names})
        draws = model.predict_draws_raw([row])[:, 0]
        return _summarize(draws, hypo.M, hypo.mode, seed)
    blocks = sample_missing(pool, hypo.M, mode=hypo.mode, pinning=hypo.pinning,
                            seed=seed, observables=hypo.observables,
                            replace=replace)
    rows = []
    for block in blocks:
        row = dict(hypo.observables)
        row.update(block)
        rows.append(row)
    probs = model.predict_draws_raw(rows)  # (S, M)
    return _summarize(probs.mean(axis=1), hypo.M, hypo.mode, seed)


@dataclass
class TrajectoryPoint:
    t: float
    estimate: EhcpEstimate


@dataclass
class Trajectory:
    receiver_id: str
    points: list[TrajectoryPoint]
    notices: list[str]
    seed: int

    def to_dict(self, include_draws: bool = False) -> dict:
        return {
            "receiver_id": self.receiver_id,
            "points": [
                {"t": p.t, **p.estimate.to_dict(include_draws)}
                for p in self.points
            ],
            "notices": list(self.notices),
            "seed": self.seed,
        }


def route_time_grid(play: PlaySequence, step: float = DEFAULT_GRID_STEP
                    ) -> list[float]:
    """Times from snap to ball arrival inclusive of the start, step seconds
    apart: floor(duration / step) + 1 points."""
    duration = play.seconds_from_snap(play.timeline.arrival_frame)
    count = int(np.floor(duration / step + 1e-9)) + 1
    return [round(i * step, 9) for i in range(count)]


def route_trajectory(model: Model, play: PlaySequence, receiver_id: str,
                     pool: DonorPool, times: Sequence[float] | None = None,
                     step: float = DEFAULT_GRID_STEP, M: int = DEFAULT_M,
                     mode: str = JOINT_DONOR,
                     pinning: Mapping[str, float] | None = None,
                     seed: int = 0,
                     prior_cumulative: float = 0.0) -> Trajectory:
    """EHCP at each grid time along one receiver's route.

    Every point reuses the same imputation seed, so the same donors underlie
    the whole curve. Points where the receiver is untracked or past the play's
    end are skipped with a notice rather than failing the trajectory.
    """
    if times is None:
        times = route_time_grid(play, step)
    last_frame = max(fr.frame_index for fr in play.tracks[receiver_id])
    play_end = (last_frame - play.timeline.snap_frame) / FRAMES_PER_SECOND
    points: list[TrajectoryPoint] = []
    notices: list[str] = []
    for t in times:
        if t < 0 or t > play_end + 1e-9:
            notices.append(f"t={t:.2f}s skipped: beyond the tracked route")
            continue
        try:
            hypo = build_hypothetical(play, receiver_id, t, pinning=pinning,
                                      mode=mode, M=M,
                                      prior_cumulative=prior_cumulative)
        except ValueError as err:
            notices.append(f"t={t:.2f}s skipped: {err}")
            continue
        points.append(TrajectoryPoint(t=t, estimate=ehcp_estimate(
            model, hypo, pool, seed=seed)))
    return Trajectory(receiver_id=receiver_id, points=points,
                      notices=notices, seed=seed)


@dataclass
class PlayReport:
    game_id: str
    play_id: str
    passer_id: str | None
    targeted_receiver: str | None
    trajectories: list[Trajectory]
    actual_fitted: dict | None  # posterior summary of the actual pass
    throw_time: float
    arrival_time: float
    M: int
    mode: str
    seed: int

    def to_dict(self, include_draws: bool = False) -> dict:
        return {
            "game_id": self.game_id,
            "play_id": self.play_id,
            "passer_id": self.passer_id,
            "targeted_receiver": self.targeted_receiver,
            "throw_time": self.throw_time,
            "arrival_time": self.arrival_time,
            "M": self.M,
            "mode": self.mode,
            "seed": self.seed,
            "trajectories": [t.to_dict(include_draws) for t in self.trajectories],
            "actual_fitted": self.actual_fitted,
        }


def fitted_actual_pass(model: Model, play: PlaySequence,
                       prior_cumulative: float = 0.0) -> dict:
    """Posterior summary of the actually-thrown pass's completion probability."""
    pf = extract_pass_features(play, play.targeted_receiver, prior_cumulative,
                               model.schema)
    draws = model.predict_draws_raw([pf.covariates])[:, 0]
    return {
        "receiver_id": pf.receiver_id,
        "caught": pf.caught,
        "mean": float(draws.mean()),
        "q2.5": float(np.quantile(draws, 0.025)),
        "q97.5": float(np.quantile(draws, 0.975)),
    }


def play_report(model: Model, play: PlaySequence, pool: DonorPool,
                step: float = DEFAULT_GRID_STEP, M: int = DEFAULT_M,
                mode: str = JOINT_DONOR, seed: int = 0,
                prior_cumulative: Mapping[str, float] | None = None
                ) -> PlayReport:
    """Trajectories for every route-runner plus the actual-pass fit."""
    prior_cumulative = dict(prior_cumulative or {})
    passer = identify_passer(play)
    receivers = [rid for rid in sorted(play.entities_on_side(play.offense_side))
                 if rid != passer]
    trajectories = [
        route_trajectory(model, play, rid, pool, step=step, M=M, mode=mode,
                         seed=seed, prior_cumulative=prior_cumulative.get(rid, 0.0))
        for rid in receivers
    ]
    actual = None
    if play.targeted_receiver is not None:
        actual = fitted_actual_pass(
            model, play, prior_cumulative.get(play.targeted_receiver, 0.0))
    return PlayReport(
        game_id=play.meta.game_id,
        play_id=play.meta.play_id,
        passer_id=passer,
        targeted_receiver=play.targeted_receiver,
        trajectories=trajectories,
        actual_fitted=actual,
        throw_time=play.seconds_from_snap(play.timeline.throw_frame),
        arrival_time=play.seconds_from_snap(play.timeline.arrival_frame),
        M=M, mode=mode, seed=seed,
    )


def partial_dependence_raw(model: Model, base_row: Mapping[str, float | str],
                           variable: str, grid: Sequence[float | str]
                           ) -> list[dict]:
    """Model response over raw grid values of one covariate.

    ``variable`` is a schema covariate name; categorical grids are level
    strings. All other covariates stay at the base row's values.
    """
    if len(grid) == 0:
        raise ValueError("empty partial-dependence grid")
    cov = model.schema.covariate(variable)
    rows = []
    for v in grid:
        row = dict(base_row)
        row[variable] = v
        rows.append(row)
    probs = model.predict_draws_raw(rows)
    out = []
    for i, v in enumerate(grid):
        col = probs[:, i]
        out.append({
            "value": v if cov.kind == "categorical" else float(v),
            "mean": float(col.mean()),
            "q2.5": float(np.quantile(col, 0.025)),
            "q97.5": float(np.quantile(col, 0.975)),
        })
    return out


def dataset_base_row(features: Sequence[PassFeatures],
                     schema: CovariateSchema = DEFAULT_SCHEMA
                     ) -> dict[str, float | str]:
    """A representative covariate row: medians for continuous covariates,
    the most common level for categorical ones, majority value for binary."""
    if not features:
        raise ValueError("no feature rows to summarize")
    base: dict[str, float | str] = {}
    for cov in schema.covariates:
        values = [pf.covariates[cov.name] for pf in features]
        if cov.kind == "categorical":
            levels = [str(v) for v in values]
            base[cov.name] = max(cov.levels, key=levels.count)
        elif cov.kind == "binary":
            base[cov.name] = 1.0 if np.mean([float(v) for v in values]) >= 0.5 else 0.0
        else:
            base[cov.name] = float(np.median([float(v) for v in values]))
    return base


def throw_time_ehcp_by_receiver(model: Model, play: PlaySequence,
                                pool: DonorPool, M: int = DEFAULT_M,
                                mode: str = JOINT_DONOR, seed: int = 0
                                ) -> dict[str, float]:
    """Posterior-mean EHCP for each route-runner at the actual throw time."""
    passer = identify_passer(play)
    t = play.seconds_from_snap(play.timeline.throw_frame)
    out: dict[str, float] = {}
    for rid in sorted(play.entities_on_side(play.offense_side)):
        if rid == passer:
            continue
        try:
            hypo = build_hypothetical(play, rid, t, mode=mode, M=M)
        except ValueError:
            continue
        out[rid] = ehcp_estimate(model, hypo, pool, seed=seed).mean
    return out
