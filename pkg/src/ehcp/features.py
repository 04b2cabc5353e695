"""Pass-level covariates: schema, extraction from plays, and standardization.

Each completed extraction yields one row of 36 covariates per pass: twelve
receiver/defender/ball geometry values at the throw, the same twelve at ball
arrival, four throw-to-arrival deltas, three timing values, and five
situational values. Two situational covariates are categorical and expand to
fixed indicator columns before modeling.

Continuous columns are rescaled to mean zero and standard deviation 0.5
(binary columns are centered only), which puts coefficients on a comparable
scale and matches the unit-normal prior used downstream. Model entry points
refuse matrices that skip this step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .tracking import (
    BALL_ID,
    FRAMES_PER_SECOND,
    PlaySequence,
    _entity_sort_key,
)

SD_TARGET = 0.5
SD_TOLERANCE = 0.05

GEOMETRY_NAMES = (
    "receiver_speed",
    "receiver_direction",
    "receiver_defender_euclid",
    "receiver_defender_horiz",
    "receiver_defender_vert",
    "receiver_ball_euclid",
    "receiver_ball_horiz",
    "receiver_ball_vert",
    "defender_ball_euclid",
    "defender_ball_horiz",
    "defender_ball_vert",
    "receiver_cumulative_distance",
)

DELTA_NAMES = (
    "delta_receiver_speed",
    "delta_separation",
    "delta_receiver_direction",
    "delta_cumulative_distance",
)

TIMING_NAMES = ("snap_to_throw_seconds", "air_seconds", "snap_to_arrival_seconds")

SITUATION_NAMES = ("seconds_left_in_half", "down", "yards_to_go",
                   "offense_leading", "score_margin_category")

DOWN_LEVELS = ("1", "2", "3", "4")
MARGIN_LEVELS = ("0", "1-8", "9+")

# Covariates whose values do not exist until the ball arrives. These are the
# quantities a hypothetical-throw estimate must average over.
MISSING_AT_THROW = tuple(
    [f"{name}_arrival" for name in GEOMETRY_NAMES]
    + list(DELTA_NAMES)
    + ["air_seconds", "snap_to_arrival_seconds"]
)


@dataclass(frozen=True)
class Covariate:
    """One covariate in the pass-level schema."""

    name: str
    kind: str  # "continuous" | "binary" | "categorical"
    phase: str  # "throw" | "arrival" | "delta" | "timing" | "situation"
    hypothetically_observable: bool
    levels: tuple[str, ...] = ()

    def column_names(self) -> list[str]:
        """Design-matrix column names after categorical expansion."""
        if self.kind != "categorical":
            return [self.name]
        return [f"{self.name}={lvl}" for lvl in self.levels[1:]]


def _build_schema() -> tuple[Covariate, ...]:
    covs: list[Covariate] = []
    for name in GEOMETRY_NAMES:
        covs.append(Covariate(f"{name}_throw", "continuous", "throw", True))
    for name in GEOMETRY_NAMES:
        covs.append(Covariate(f"{name}_arrival", "continuous", "arrival", False))
    for name in DELTA_NAMES:
        covs.append(Covariate(name, "continuous", "delta", False))
    covs.append(Covariate("snap_to_throw_seconds", "continuous", "timing", True))
    covs.append(Covariate("air_seconds", "continuous", "timing", False))
    covs.append(Covariate("snap_to_arrival_seconds", "continuous", "timing", False))
    covs.append(Covariate("seconds_left_in_half", "continuous", "situation", True))
    covs.append(Covariate("down", "categorical", "situation", True, DOWN_LEVELS))
    covs.append(Covariate("yards_to_go", "continuous", "situation", True))
    covs.append(Covariate("offense_leading", "binary", "situation", True))
    covs.append(Covariate("score_margin_category", "categorical", "situation", True,
                          MARGIN_LEVELS))
    return tuple(covs)


@dataclass(frozen=True)
class CovariateSchema:
    """Ordered covariate list plus helpers for design-matrix layout."""

    covariates: tuple[Covariate, ...] = field(default_factory=_build_schema)

    def __post_init__(self) -> None:
        names = [c.name for c in self.covariates]
        if len(names) != len(set(names)):
            raise ValueError("duplicate covariate names in schema")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.covariates]

    @property
    def column_names(self) -> list[str]:
        cols: list[str] = []
        for cov in self.covariates:
            cols.extend(cov.column_names())
        return cols

    def covariate(self, name: str) -> Covariate:
        for cov in self.covariates:
            if cov.name == name:
                return cov
        raise KeyError(name)

    def missing_at_throw(self) -> list[str]:
        return [c.name for c in self.covariates if not c.hypothetically_observable]

    def validate_row(self, row: Mapping[str, float | str]) -> None:
        for cov in self.covariates:
            if cov.name not in row:
                raise ValueError(f"missing covariate {cov.name}")
            value = row[cov.name]
            if cov.kind == "categorical":
                if str(value) not in cov.levels:
                    raise ValueError(
                        f"{cov.name}={value!r} not in levels {cov.levels}")
            else:
                v = float(value)
                if not math.isfinite(v):
                    raise ValueError(f"{cov.name}={value!r} is not finite")
                if cov.kind == "binary" and v not in (0.0, 1.0):
                    raise ValueError(f"{cov.name}={value!r} is not 0/1")

    def encode(self, rows: Sequence[Mapping[str, float | str]]) -> np.ndarray:
        """Expand categorical covariates into a raw (unstandardized) matrix."""
        out = np.empty((len(rows), len(self.column_names)))
        for i, row in enumerate(rows):
            self.validate_row(row)
            j = 0
            for cov in self.covariates:
                if cov.kind == "categorical":
                    for lvl in cov.levels[1:]:
                        out[i, j] = 1.0 if str(row[cov.name]) == lvl else 0.0
                        j += 1
                else:
                    out[i, j] = float(row[cov.name])
                    j += 1
        return out

    def column_kinds(self) -> list[str]:
        kinds: list[str] = []
        for cov in self.covariates:
            if cov.kind == "categorical":
                kinds.extend(["binary"] * (len(cov.levels) - 1))
            else:
                kinds.append(cov.kind)
        return kinds


DEFAULT_SCHEMA = CovariateSchema()


def wrap_angle_delta(degrees: float) -> float:
    """Signed angular difference wrapped to (-180, 180]."""
    wrapped = (degrees + 180.0) % 360.0 - 180.0
    return 180.0 if wrapped == -180.0 else wrapped


@dataclass(frozen=True)
class GeometrySnapshot:
    """The twelve geometry covariates at a single frame."""

    values: dict[str, float]
    nearest_defender: str


def geometry_at_frame(play: PlaySequence, receiver_id: str, frame_index: int,
                      prior_cumulative: float = 0.0) -> GeometrySnapshot:
    """Receiver/defender/ball geometry at one frame.

    The nearest defender is re-evaluated at every frame; horizontal means the
    field's long axis and vertical the short axis. ``prior_cumulative`` adds
    distance accumulated on earlier plays of the same game when a running
    total across the game is wanted.
    """
    rec = play.frame_at(receiver_id, frame_index)
    ball = play.frame_at(BALL_ID, frame_index)
    if rec is None or ball is None:
        raise ValueError(
            f"receiver or ball missing at frame {frame_index} in play {play.key}")
    best_id: str | None = None
    best_dist = math.inf
    for did in sorted(play.entities_on_side(play.defense_side), key=_entity_sort_key):
        fr = play.frame_at(did, frame_index)
        if fr is None:
            continue
        dist = math.hypot(fr.x - rec.x, fr.y - rec.y)
        if dist < best_dist:
            best_id, best_dist = did, dist
    if best_id is None:
        raise ValueError(f"no defender on field at frame {frame_index}")
    dfr = play.frame_at(best_id, frame_index)
    cumulative = prior_cumulative + sum(
        f.step_distance for f in play.tracks[receiver_id]
        if f.frame_index <= frame_index)
    values = {
        "receiver_speed": rec.speed,
        "receiver_direction": rec.direction,
        "receiver_defender_euclid": best_dist,
        "receiver_defender_horiz": abs(rec.x - dfr.x),
        "receiver_defender_vert": abs(rec.y - dfr.y),
        "receiver_ball_euclid": math.hypot(rec.x - ball.x, rec.y - ball.y),
        "receiver_ball_horiz": abs(rec.x - ball.x),
        "receiver_ball_vert": abs(rec.y - ball.y),
        "defender_ball_euclid": math.hypot(dfr.x - ball.x, dfr.y - ball.y),
        "defender_ball_horiz": abs(dfr.x - ball.x),
        "defender_ball_vert": abs(dfr.y - ball.y),
        "receiver_cumulative_distance": cumulative,
    }
    return GeometrySnapshot(values=values, nearest_defender=best_id)


def situation_covariates(play: PlaySequence) -> dict[str, float | str]:
    meta = play.meta
    offense = meta.home_score_pre if meta.offense_is_home else meta.visitor_score_pre
    defense = meta.visitor_score_pre if meta.offense_is_home else meta.home_score_pre
    margin = abs(offense - defense)
    half_extra = 900.0 if meta.quarter in (1, 3) else 0.0
    return {
        "seconds_left_in_half": meta.clock_seconds + half_extra,
        "down": str(meta.down),
        "yards_to_go": meta.yards_to_go,
        "offense_leading": 1.0 if offense > defense else 0.0,
        "score_margin_category": "0" if margin == 0 else ("1-8" if margin <= 8 else "9+"),
    }


@dataclass
class PassFeatures:
    """One modeling row: covariates, outcome, and identification."""

    game_id: str
    play_id: str
    receiver_id: str
    covariates: dict[str, float | str]
    caught: int
    nearest_defender_throw: str
    nearest_defender_arrival: str


def extract_pass_features(play: PlaySequence, receiver_id: str | None = None,
                          prior_cumulative: float = 0.0,
                          schema: CovariateSchema = DEFAULT_SCHEMA) -> PassFeatures:
    """Full covariate row for one pass, read at the actual throw and arrival."""
    rid = receiver_id or play.targeted_receiver
    if rid is None:
        raise ValueError(f"play {play.key} has no targeted receiver")
    tl = play.timeline
    at_throw = geometry_at_frame(play, rid, tl.throw_frame, prior_cumulative)
    at_arrival = geometry_at_frame(play, rid, tl.arrival_frame, prior_cumulative)
    row: dict[str, float | str] = {}
    row.update({f"{k}_throw": v for k, v in at_throw.values.items()})
    row.update({f"{k}_arrival": v for k, v in at_arrival.values.items()})
    row["delta_receiver_speed"] = (at_arrival.values["receiver_speed"]
                                   - at_throw.values["receiver_speed"])
    row["delta_separation"] = (at_arrival.values["receiver_defender_euclid"]
                               - at_throw.values["receiver_defender_euclid"])
    row["delta_receiver_direction"] = wrap_angle_delta(
        at_arrival.values["receiver_direction"] - at_throw.values["receiver_direction"])
    row["delta_cumulative_distance"] = (
        at_arrival.values["receiver_cumulative_distance"]
        - at_throw.values["receiver_cumulative_distance"])
    row["snap_to_throw_seconds"] = play.seconds_from_snap(tl.throw_frame)
    row["air_seconds"] = (tl.arrival_frame - tl.throw_frame) / FRAMES_PER_SECOND
    row["snap_to_arrival_seconds"] = play.seconds_from_snap(tl.arrival_frame)
    row.update(situation_covariates(play))
    schema.validate_row(row)
    return PassFeatures(
        game_id=play.meta.game_id,
        play_id=play.meta.play_id,
        receiver_id=rid,
        covariates=row,
        caught=1 if play.meta.pass_result == "caught" else 0,
        nearest_defender_throw=at_throw.nearest_defender,
        nearest_defender_arrival=at_arrival.nearest_defender,
    )


def observable_covariates_at(play: PlaySequence, receiver_id: str, frame_index: int,
                             prior_cumulative: float = 0.0) -> dict[str, float | str]:
    """The throw-observable covariate block read at an arbitrary frame.

    Used for hypothetical throws: geometry comes from the chosen frame, the
    snap-to-throw clock from that frame's offset, and situation covariates
    from the play metadata. Arrival-phase covariates are absent by design.
    """
    snap = geometry_at_frame(play, receiver_id, frame_index, prior_cumulative)
    row: dict[str, float | str] = {f"{k}_throw": v for k, v in snap.values.items()}
    row["snap_to_throw_seconds"] = play.seconds_from_snap(frame_index)
    row.update(situation_covariates(play))
    return row


def extract_dataset(plays: Sequence[PlaySequence],
                    schema: CovariateSchema = DEFAULT_SCHEMA,
                    cumulative_across_game: bool = True) -> list[PassFeatures]:
    """Feature rows for every play, accumulating receiver distance per game.

    Plays are processed in (game, play) order so the running distance total
    for a receiver only counts earlier plays.
    """
    ordered = sorted(plays, key=lambda p: (_entity_sort_key(p.meta.game_id),
                                           _entity_sort_key(p.meta.play_id)))
    totals: dict[tuple[str, str], float] = {}
    out = []
    for play in ordered:
        rid = play.targeted_receiver
        if rid is None:
            continue
        prior = 0.0
        if cumulative_across_game:
            prior = totals.get((play.meta.game_id, rid), 0.0)
        out.append(extract_pass_features(play, rid, prior, schema))
        if cumulative_across_game:
            for entity in play.entities_on_side(play.offense_side):
                key = (play.meta.game_id, entity)
                totals[key] = totals.get(key, 0.0) + sum(
                    f.step_distance for f in play.tracks[entity])
    return out


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column affine transform fitted on training data.

    Continuous columns map to (x - mean) / (2 * population sd), giving sd 0.5;
    binary columns are centered at their mean and left unscaled. Columns that
    are constant in training are recorded and dropped from the design matrix.
    """

    column_names: tuple[str, ...]
    means: np.ndarray
    scales: np.ndarray
    dropped: tuple[str, ...]

    def transform(self, raw: np.ndarray, all_columns: Sequence[str]) -> np.ndarray:
        keep = [i for i, name in enumerate(all_columns) if name not in self.dropped]
        if tuple(all_columns[i] for i in keep) != self.column_names:
            raise ValueError("column layout does not match standardization params")
        return (raw[:, keep] - self.means) / self.scales

    def to_dict(self) -> dict:
        return {
            "column_names": list(self.column_names),
            "means": [float(v) for v in self.means],
            "scales": [float(v) for v in self.scales],
            "dropped": list(self.dropped),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "StandardizationParams":
        return cls(
            column_names=tuple(data["column_names"]),
            means=np.asarray(data["means"], dtype=float),
            scales=np.asarray(data["scales"], dtype=float),
            dropped=tuple(data["dropped"]),
        )


def fit_standardization(raw: np.ndarray, column_names: Sequence[str],
                        column_kinds: Sequence[str]) -> StandardizationParams:
    """Fit means and scales on a raw design matrix (population sd)."""
    if raw.ndim != 2 or raw.shape[1] != len(column_names):
        raise ValueError("raw matrix does not match column names")
    means, scales, kept, dropped = [], [], [], []
    for j, (name, kind) in enumerate(zip(column_names, column_kinds)):
        col = raw[:, j]
        sd = float(np.std(col))
        if sd == 0.0:
            dropped.append(name)
            continue
        kept.append(name)
        means.append(float(np.mean(col)))
        scales.append(1.0 if kind == "binary" else 2.0 * sd)
    return StandardizationParams(
        column_names=tuple(kept),
        means=np.asarray(means), scales=np.asarray(scales),
        dropped=tuple(dropped),
    )


def check_standardized(X: np.ndarray, column_kinds: Sequence[str] | None = None) -> None:
    """Refuse design matrices whose continuous columns are not on sd-0.5 scale."""
    if X.ndim != 2:
        raise ValueError("design matrix must be 2-D")
    if X.shape[0] < 2:
        return
    sds = np.std(X, axis=0)
    for j, sd in enumerate(sds):
        kind = column_kinds[j] if column_kinds is not None else "continuous"
        if kind == "binary":
            continue
        if sd > 0 and abs(sd - SD_TARGET) > SD_TOLERANCE:
            raise ValueError(
                f"column {j} has sd {sd:.4f}; expected {SD_TARGET} +/- "
                f"{SD_TOLERANCE}. Standardize with fit_standardization first.")


@dataclass
class FeatureMatrix:
    """Standardized design matrix bundled with labels and provenance."""

    X: np.ndarray
    y: np.ndarray
    column_names: tuple[str, ...]
    column_kinds: tuple[str, ...]
    standardization: StandardizationParams
    keys: tuple[tuple[str, str], ...]
    receiver_ids: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def build_feature_matrix(rows: Sequence[PassFeatures],
                         schema: CovariateSchema = DEFAULT_SCHEMA,
                         params: StandardizationParams | None = None) -> FeatureMatrix:
    """Encode, (optionally fit and) apply standardization, and bundle labels."""
    raw = schema.encode([r.covariates for r in rows])
    kinds = schema.column_kinds()
    if params is None:
        params = fit_standardization(raw, schema.column_names, kinds)
    X = params.transform(raw, schema.column_names)
    kind_by_name = dict(zip(schema.column_names, kinds))
    kept_kinds = tuple(kind_by_name[name] for name in params.column_names)
    y = np.array([r.caught for r in rows], dtype=float)
    return FeatureMatrix(
        X=X, y=y,
        column_names=params.column_names,
        column_kinds=kept_kinds,
        standardization=params,
        keys=tuple((r.game_id, r.play_id) for r in rows),
        receiver_ids=tuple(r.receiver_id for r in rows),
    )
