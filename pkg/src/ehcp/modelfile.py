"""Versioned JSON persistence for fitted models and ingested data bundles.

Floats survive the round trip bit-exactly because the JSON writer emits
Python's shortest-repr form. Files ending in .gz are transparently
compressed. A format-version field guards against silently loading artifacts
written by an incompatible release.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

from .bart import BartPosterior
from .engine import Model
from .features import (
    CovariateSchema,
    DEFAULT_SCHEMA,
    PassFeatures,
    StandardizationParams,
)
from .logistic import LogisticPosterior
from .tracking import EventTimeline, PlayMeta, PlaySequence, TrackingFrame

FORMAT_VERSION = 1


class ModelFileError(ValueError):
    """Unreadable, incompatible, or malformed artifact file."""


def _read_json(path: str | Path) -> dict:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    try:
        with opener(path, "rt", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        raise ModelFileError(f"cannot read {path}: {err}") from err


def write_json_atomic(path: str | Path, payload: dict) -> None:
    """Serialize then rename into place so readers never see partial files."""
    path = Path(path)
    text = json.dumps(payload, indent=1, sort_keys=False)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        if path.suffix == ".gz":
            os.close(fd)
            # fixed mtime and no embedded filename keep reruns byte-identical
            with open(tmp, "wb") as raw:
                with gzip.GzipFile(filename="", fileobj=raw, mode="wb",
                                   mtime=0) as gz:
                    gz.write(text.encode("utf-8"))
        else:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_version(data: Mapping, path: str | Path) -> None:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFileError(
            f"{path}: format version {version!r} is not supported by this "
            f"build (expected {FORMAT_VERSION}); re-create the file with the "
            f"matching command")


def dataset_fingerprint(features: Sequence[PassFeatures]) -> str:
    """Content hash over the canonical JSON form of all feature rows."""
    canonical = json.dumps(
        [
            {
                "game_id": pf.game_id, "play_id": pf.play_id,
                "receiver_id": pf.receiver_id, "caught": pf.caught,
                "covariates": {k: pf.covariates[k]
                               for k in sorted(pf.covariates)},
            }
            for pf in features
        ],
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _schema_to_dict(schema: CovariateSchema) -> list[dict]:
    return [
        {
            "name": c.name, "kind": c.kind, "phase": c.phase,
            "hypothetically_observable": c.hypothetically_observable,
            "levels": list(c.levels),
        }
        for c in schema.covariates
    ]


def _schema_from_dict(data: Sequence[Mapping]) -> CovariateSchema:
    from .features import Covariate

    return CovariateSchema(covariates=tuple(
        Covariate(name=d["name"], kind=d["kind"], phase=d["phase"],
                  hypothetically_observable=d["hypothetically_observable"],
                  levels=tuple(d["levels"]))
        for d in data
    ))


def save_model(path: str | Path, model: Model, fingerprint: str = "",
               extra: Mapping | None = None) -> None:
    if model.kind == "logistic":
        posterior = model.posterior.to_dict()
    elif model.kind == "bart":
        posterior = model.posterior.to_dict()
    else:
        raise ModelFileError(f"unknown model kind {model.kind!r}")
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "schema": _schema_to_dict(model.schema),
        "standardization": model.standardization.to_dict(),
        "posterior": posterior,
        "dataset_fingerprint": fingerprint,
    }
    if extra:
        payload["extra"] = dict(extra)
    write_json_atomic(path, payload)


def load_model(path: str | Path) -> tuple[Model, str]:
    data = _read_json(path)
    _check_version(data, path)
    kind = data.get("kind")
    schema = _schema_from_dict(data["schema"])
    standardization = StandardizationParams.from_dict(data["standardization"])
    if kind == "logistic":
        posterior = LogisticPosterior.from_dict(data["posterior"])
    elif kind == "bart":
        posterior = BartPosterior.from_dict(data["posterior"],
                                            standardization=standardization)
    else:
        raise ModelFileError(f"{path}: unknown model kind {kind!r}")
    model = Model(kind=kind, posterior=posterior, schema=schema,
                  standardization=standardization)
    return model, data.get("dataset_fingerprint", "")


def _frame_to_list(fr: TrackingFrame) -> list:
    return [fr.frame_index, fr.entity_id, fr.x, fr.y, fr.speed,
            fr.step_distance, fr.direction, fr.event_tag, fr.team_side]


def _frame_from_list(row: Sequence) -> TrackingFrame:
    return TrackingFrame(
        frame_index=int(row[0]),
        timestamp=(int(row[0]) - 1) / 10.0,
        entity_id=row[1], x=row[2], y=row[3], speed=row[4],
        step_distance=row[5], direction=row[6], event_tag=row[7],
        team_side=row[8],
    )


def play_to_dict(play: PlaySequence) -> dict:
    m = play.meta
    return {
        "meta": {
            "game_id": m.game_id, "play_id": m.play_id, "quarter": m.quarter,
            "clock_seconds": m.clock_seconds, "down": m.down,
            "yards_to_go": m.yards_to_go, "home_score_pre": m.home_score_pre,
            "visitor_score_pre": m.visitor_score_pre,
            "offense_is_home": m.offense_is_home,
            "pass_result": m.pass_result, "pass_length": m.pass_length,
            "description": m.description,
        },
        "timeline": [play.timeline.snap_frame, play.timeline.throw_frame,
                     play.timeline.arrival_frame, play.timeline.outcome_tag],
        "targeted_receiver": play.targeted_receiver,
        "tracks": {
            entity: [_frame_to_list(fr) for fr in frames]
            for entity, frames in play.tracks.items()
        },
    }


def play_from_dict(data: Mapping) -> PlaySequence:
    meta = PlayMeta(**data["meta"])
    tl = data["timeline"]
    return PlaySequence(
        meta=meta,
        tracks={entity: [_frame_from_list(row) for row in frames]
                for entity, frames in data["tracks"].items()},
        timeline=EventTimeline(int(tl[0]), int(tl[1]), int(tl[2]), tl[3]),
        targeted_receiver=data.get("targeted_receiver"),
    )


def features_to_dict(pf: PassFeatures) -> dict:
    return {
        "game_id": pf.game_id, "play_id": pf.play_id,
        "receiver_id": pf.receiver_id, "covariates": pf.covariates,
        "caught": pf.caught,
        "nearest_defender_throw": pf.nearest_defender_throw,
        "nearest_defender_arrival": pf.nearest_defender_arrival,
    }


def features_from_dict(data: Mapping) -> PassFeatures:
    return PassFeatures(
        game_id=data["game_id"], play_id=data["play_id"],
        receiver_id=data["receiver_id"],
        covariates=dict(data["covariates"]), caught=int(data["caught"]),
        nearest_defender_throw=data["nearest_defender_throw"],
        nearest_defender_arrival=data["nearest_defender_arrival"],
    )


def save_bundle(path: str | Path, plays: Sequence[PlaySequence],
                features: Sequence[PassFeatures],
                schema: CovariateSchema = DEFAULT_SCHEMA) -> str:
    """Persist ingested plays and their feature rows; returns the fingerprint."""
    fingerprint = dataset_fingerprint(features)
    payload = {
        "format_version": FORMAT_VERSION,
        "schema": _schema_to_dict(schema),
        "plays": [play_to_dict(p) for p in plays],
        "features": [features_to_dict(pf) for pf in features],
        "dataset_fingerprint": fingerprint,
    }
    write_json_atomic(path, payload)
    return fingerprint


def load_bundle(path: str | Path
                ) -> tuple[list[PlaySequence], list[PassFeatures],
                           CovariateSchema, str]:
    data = _read_json(path)
    _check_version(data, path)
    plays = [play_from_dict(d) for d in data["plays"]]
    features = [features_from_dict(d) for d in data["features"]]
    schema = _schema_from_dict(data["schema"])
    return plays, features, schema, data.get("dataset_fingerprint", "")
