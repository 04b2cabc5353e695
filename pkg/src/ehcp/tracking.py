"""Ingestion of player-tracking and play-level files into validated play sequences.

Tracking data arrives as one row per (entity, frame) at 10 Hz; play data as one
row per play. Column names differ across dataset releases, so both parsers are
driven by a key=value mapping file (see :data:`DEFAULT_MAPPING`). Every input
row is either accepted or recorded as a rejection with its line number; nothing
is dropped silently.

The module also contains a seeded synthetic play generator used as a test
oracle: it records the ground-truth target and covariate values alongside the
tracks it fabricates.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

BALL_ID = "ball"
FRAMES_PER_SECOND = 10
FIELD_LENGTH = 120.0
FIELD_WIDTH = 53.3

PASS_RESULTS = ("caught", "incomplete", "intercepted", "run", "sack")
THROWN_RESULTS = ("caught", "incomplete", "intercepted")

SNAP_TAGS = ("ball_snap",)
THROW_TAGS = ("pass_forward", "pass_shovel")
ARRIVAL_TAGS = (
    "pass_outcome_caught",
    "pass_outcome_incomplete",
    "pass_outcome_interception",
    "pass_outcome_touchdown",
    "pass_arrived",
)

# Columns of the 2019 Big Data Bowl release. Users override via a mapping file.
DEFAULT_MAPPING: dict[str, str] = {
    "tracking.game_id": "gameId",
    "tracking.play_id": "playId",
    "tracking.frame_index": "frame.id",
    "tracking.entity_id": "nflId",
    "tracking.x": "x",
    "tracking.y": "y",
    "tracking.speed": "s",
    "tracking.step_distance": "dis",
    "tracking.direction": "dir",
    "tracking.event_tag": "event",
    "tracking.team_side": "team",
    "plays.game_id": "gameId",
    "plays.play_id": "playId",
    "plays.quarter": "quarter",
    "plays.clock": "GameClock",
    "plays.down": "down",
    "plays.yards_to_go": "yardsToGo",
    "plays.home_score": "HomeScoreBeforePlay",
    "plays.visitor_score": "VisitorScoreBeforePlay",
    "plays.offense_is_home": "offenseIsHome",
    "plays.pass_result": "PassResult",
    "plays.pass_length": "PassLength",
    "plays.description": "playDescription",
    "plays.penalty_flag": "isPenalty",
    "plays.special_teams_flag": "isSTPlay",
    "result.C": "caught",
    "result.I": "incomplete",
    "result.IN": "intercepted",
    "result.R": "run",
    "result.S": "sack",
}

TRACKING_REQUIRED = (
    "game_id", "play_id", "frame_index", "entity_id", "x", "y",
    "speed", "step_distance", "direction", "event_tag", "team_side",
)
PLAYS_REQUIRED = (
    "game_id", "play_id", "quarter", "clock", "down", "yards_to_go",
    "home_score", "visitor_score", "offense_is_home", "pass_result",
)
PLAYS_OPTIONAL = ("pass_length", "description", "penalty_flag", "special_teams_flag")

_TRUTHY = {"1", "true", "t", "yes", "y", "home"}
_FALSY = {"0", "false", "f", "no", "n", "away"}


class SchemaError(ValueError):
    """A required column is missing from an input file."""


class DataIntegrityError(ValueError):
    """Duplicate or contradictory rows that cannot be resolved row-by-row."""


@dataclass(frozen=True)
class TrackingFrame:
    """One entity's state at one 10 Hz frame."""

    frame_index: int
    timestamp: float  # seconds from play start, (frame_index - 1) / 10
    entity_id: str
    x: float  # yards along the long axis, [0, 120]
    y: float  # yards along the short axis, [0, 53.3]
    speed: float  # yards/second
    step_distance: float  # yards moved since the previous frame
    direction: float  # degrees, [0, 360)
    event_tag: str | None
    team_side: str  # "home" | "away" | "ball"


@dataclass(frozen=True)
class PlayMeta:
    game_id: str
    play_id: str
    quarter: int
    clock_seconds: float  # seconds remaining in the quarter
    down: int
    yards_to_go: float
    home_score_pre: int
    visitor_score_pre: int
    offense_is_home: bool
    pass_result: str  # one of PASS_RESULTS
    pass_length: float | None = None
    description: str = ""


@dataclass(frozen=True)
class EventTimeline:
    snap_frame: int
    throw_frame: int
    arrival_frame: int
    outcome_tag: str


@dataclass
class PlaySequence:
    """All tracks, events, and metadata for one pass play."""

    meta: PlayMeta
    tracks: dict[str, list[TrackingFrame]]
    timeline: EventTimeline
    targeted_receiver: str | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.meta.game_id, self.meta.play_id)

    @property
    def offense_side(self) -> str:
        return "home" if self.meta.offense_is_home else "away"

    @property
    def defense_side(self) -> str:
        return "away" if self.meta.offense_is_home else "home"

    def entities_on_side(self, side: str) -> list[str]:
        return [e for e, fr in self.tracks.items() if fr and fr[0].team_side == side]

    def frame_at(self, entity_id: str, frame_index: int) -> TrackingFrame | None:
        for fr in self.tracks.get(entity_id, ()):
            if fr.frame_index == frame_index:
                return fr
        return None

    def seconds_from_snap(self, frame_index: int) -> float:
        return (frame_index - self.timeline.snap_frame) / FRAMES_PER_SECOND

    def frame_for_time(self, t_after_snap: float) -> int:
        """Nearest frame index for a time in seconds after the snap."""
        return self.timeline.snap_frame + round(t_after_snap * FRAMES_PER_SECOND)


@dataclass(frozen=True)
class RowRejection:
    line_number: int
    reason: str


@dataclass(frozen=True)
class PlayExclusion:
    game_id: str
    play_id: str
    reason: str


@dataclass
class ParsedTracking:
    frames: dict[tuple[str, str], list[TrackingFrame]]
    rejections: list[RowRejection]
    row_count: int


@dataclass
class ParsedPlays:
    metas: list[PlayMeta]
    rejections: list[RowRejection]
    row_count: int


def load_mapping(path: str | Path) -> dict[str, str]:
    """Read a key=value mapping file; '#' starts a comment."""
    mapping = dict(DEFAULT_MAPPING)
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"mapping line {raw!r} is not key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        mapping[key] = value
    return mapping


def write_mapping(path: str | Path, mapping: Mapping[str, str] | None = None) -> None:
    mapping = dict(DEFAULT_MAPPING if mapping is None else mapping)
    lines = [f"{k}={v}" for k, v in mapping.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def _columns(mapping: Mapping[str, str], section: str, keys: Iterable[str],
             header: Sequence[str], required: bool = True) -> dict[str, str]:
    cols = {}
    for key in keys:
        col = mapping.get(f"{section}.{key}")
        if col is None or col not in header:
            if required:
                raise SchemaError(f"required column for {section}.{key} "
                                  f"({col!r}) not found in header")
            continue
        cols[key] = col
    return cols


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUTHY:
        return True
    if lowered in _FALSY:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_clock(text: str) -> float:
    """Game clock as seconds; accepts 'MM:SS', 'MM:SS:cc', or plain seconds."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        minutes, seconds = int(parts[0]), int(parts[1])
        return minutes * 60.0 + seconds
    return float(text)


def parse_tracking_csv(path: str | Path, mapping: Mapping[str, str]) -> ParsedTracking:
    """Parse a tracking file into frames grouped by (game_id, play_id).

    Rows that fail to parse or fall outside the field are recorded as
    rejections with their 1-based line number; accepted + rejected counts
    always equal the number of data rows.
    """
    frames: dict[tuple[str, str], list[TrackingFrame]] = {}
    rejections: list[RowRejection] = []
    rows = 0
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        cols = _columns(mapping, "tracking", TRACKING_REQUIRED, reader.fieldnames)
        for line_no, row in enumerate(reader, start=2):
            rows += 1
            try:
                frame, key = _tracking_row(row, cols)
            except ValueError as err:
                rejections.append(RowRejection(line_no, str(err)))
                continue
            frames.setdefault(key, []).append(frame)
    return ParsedTracking(frames, rejections, rows)


def _tracking_row(row: Mapping[str, str], cols: Mapping[str, str]
                  ) -> tuple[TrackingFrame, tuple[str, str]]:
    team = row[cols["team_side"]].strip().lower()
    entity = row[cols["entity_id"]].strip()
    if team == BALL_ID or entity in ("", "NA", "None"):
        team, entity = BALL_ID, BALL_ID
    if team not in ("home", "away", BALL_ID):
        raise ValueError(f"unknown team side {row[cols['team_side']]!r}")
    x = float(row[cols["x"]])
    y = float(row[cols["y"]])
    if not 0.0 <= x <= FIELD_LENGTH:
        raise ValueError(f"x={x} outside field bounds [0, {FIELD_LENGTH}]")
    if not 0.0 <= y <= FIELD_WIDTH:
        raise ValueError(f"y={y} outside field bounds [0, {FIELD_WIDTH}]")
    speed = float(row[cols["speed"]])
    if speed < 0:
        raise ValueError(f"negative speed {speed}")
    step = float(row[cols["step_distance"]])
    if step < 0:
        raise ValueError(f"negative step distance {step}")
    direction = float(row[cols["direction"]]) % 360.0
    frame_index = int(row[cols["frame_index"]])
    if frame_index <= 0:
        raise ValueError(f"frame index {frame_index} must be positive")
    tag = row[cols["event_tag"]].strip()
    event = None if tag in ("", "NA", "None") else tag
    frame = TrackingFrame(
        frame_index=frame_index,
        timestamp=(frame_index - 1) / FRAMES_PER_SECOND,
        entity_id=entity,
        x=x, y=y, speed=speed, step_distance=step, direction=direction,
        event_tag=event, team_side=team,
    )
    return frame, (row[cols["game_id"]].strip(), row[cols["play_id"]].strip())


def parse_plays_csv(path: str | Path, mapping: Mapping[str, str]) -> ParsedPlays:
    """Parse the play-level file into PlayMeta rows.

    Result codes are normalized through the mapping's result.* entries;
    unmapped codes and penalty / special-teams rows become rejections.
    """
    result_codes = {k.split(".", 1)[1]: v for k, v in mapping.items()
                    if k.startswith("result.")}
    metas: list[PlayMeta] = []
    rejections: list[RowRejection] = []
    rows = 0
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        cols = _columns(mapping, "plays", PLAYS_REQUIRED, reader.fieldnames)
        opt = _columns(mapping, "plays", PLAYS_OPTIONAL, reader.fieldnames,
                       required=False)
        for line_no, row in enumerate(reader, start=2):
            rows += 1
            try:
                metas.append(_play_row(row, cols, opt, result_codes))
            except ValueError as err:
                rejections.append(RowRejection(line_no, str(err)))
    return ParsedPlays(metas, rejections, rows)


def _play_row(row: Mapping[str, str], cols: Mapping[str, str],
              opt: Mapping[str, str], result_codes: Mapping[str, str]) -> PlayMeta:
    for flag, label in (("penalty_flag", "penalty play"),
                        ("special_teams_flag", "special-teams play")):
        if flag in opt:
            try:
                flagged = _parse_bool(row[opt[flag]])
            except ValueError:
                flagged = False
            if flagged:
                raise ValueError(label)
    code = row[cols["pass_result"]].strip()
    result = result_codes.get(code, code if code in PASS_RESULTS else None)
    if result is None:
        raise ValueError(f"unknown pass result code {code!r}")
    down = int(row[cols["down"]])
    if down not in (1, 2, 3, 4):
        raise ValueError(f"down {down} outside 1-4")
    quarter = int(row[cols["quarter"]])
    if not 1 <= quarter <= 5:
        raise ValueError(f"quarter {quarter} outside 1-5")
    home = int(float(row[cols["home_score"]]))
    visitor = int(float(row[cols["visitor_score"]]))
    if home < 0 or visitor < 0:
        raise ValueError("negative score")
    yards = float(row[cols["yards_to_go"]])
    if yards <= 0:
        raise ValueError(f"yards to go {yards} must be positive")
    length_text = row.get(opt.get("pass_length", ""), "").strip()
    pass_length = None
    if length_text not in ("", "NA", "None"):
        pass_length = float(length_text)
    return PlayMeta(
        game_id=row[cols["game_id"]].strip(),
        play_id=row[cols["play_id"]].strip(),
        quarter=quarter,
        clock_seconds=_parse_clock(row[cols["clock"]]),
        down=down,
        yards_to_go=yards,
        home_score_pre=home,
        visitor_score_pre=visitor,
        offense_is_home=_parse_bool(row[cols["offense_is_home"]]),
        pass_result=result,
        pass_length=pass_length,
        description=row.get(opt.get("description", ""), ""),
    )


def _entity_sort_key(entity_id: str) -> tuple[int, float, str]:
    try:
        return (0, float(entity_id), entity_id)
    except ValueError:
        return (1, 0.0, entity_id)


def resolve_events(play: PlaySequence) -> EventTimeline:
    """Locate snap, throw, and arrival frames from event tags."""
    timeline = _resolve_events(play.tracks)
    if timeline is None:
        raise ValueError(f"play {play.key}: missing snap/throw/arrival events")
    return timeline


def _resolve_events(tracks: Mapping[str, list[TrackingFrame]]) -> EventTimeline | None:
    tagged: dict[int, str] = {}
    for frames in tracks.values():
        for fr in frames:
            if fr.event_tag is not None:
                tagged.setdefault(fr.frame_index, fr.event_tag)
    order = sorted(tagged)
    snap = next((f for f in order if tagged[f] in SNAP_TAGS), None)
    if snap is None:
        return None
    throw = next((f for f in order if f > snap and tagged[f] in THROW_TAGS), None)
    if throw is None:
        return None
    arrival = next((f for f in order if f > throw and tagged[f] in ARRIVAL_TAGS), None)
    if arrival is None:
        return None
    return EventTimeline(snap, throw, arrival, tagged[arrival])


def identify_passer(play: PlaySequence) -> str | None:
    """Offensive entity nearest the ball at the throw frame."""
    return _nearest_offense(play, play.timeline.throw_frame, exclude=())


def identify_targeted_receiver(play: PlaySequence, max_distance: float = 10.0
                               ) -> str | None:
    """Offensive non-passer nearest the ball at arrival, within a sanity cap.

    Ties break toward the smaller entity id. Returns None when no candidate
    is within ``max_distance`` yards of the ball.
    """
    passer = identify_passer(play)
    exclude = (passer,) if passer is not None else ()
    return _nearest_offense(play, play.timeline.arrival_frame, exclude,
                            max_distance=max_distance)


def _nearest_offense(play: PlaySequence, frame_index: int,
                     exclude: Sequence[str], max_distance: float = math.inf
                     ) -> str | None:
    ball = play.frame_at(BALL_ID, frame_index)
    if ball is None:
        return None
    best: tuple[float, tuple[int, float, str], str] | None = None
    for entity in play.entities_on_side(play.offense_side):
        if entity in exclude:
            continue
        fr = play.frame_at(entity, frame_index)
        if fr is None:
            continue
        dist = math.hypot(fr.x - ball.x, fr.y - ball.y)
        candidate = (dist, _entity_sort_key(entity), entity)
        if best is None or candidate[:2] < best[:2]:
            best = candidate
    if best is None or best[0] > max_distance:
        return None
    return best[2]


def assemble_plays(parsed_tracking: ParsedTracking, parsed_plays: ParsedPlays,
                   require_thrown: bool = True
                   ) -> tuple[list[PlaySequence], list[PlayExclusion]]:
    """Join frames and metadata into validated PlaySequence values.

    Plays missing the ball track, the snap/throw/arrival events, or a
    plausible target are excluded with a reason; run/sack rows are excluded
    from the modeling set when ``require_thrown``. Duplicate (entity, frame)
    rows raise DataIntegrityError.
    """
    plays: list[PlaySequence] = []
    exclusions: list[PlayExclusion] = []
    metas = {(m.game_id, m.play_id): m for m in parsed_plays.metas}
    for key in sorted(parsed_tracking.frames, key=lambda k: (_entity_sort_key(k[0]),
                                                             _entity_sort_key(k[1]))):
        if key not in metas:
            exclusions.append(PlayExclusion(*key, reason="no play row"))
    for meta in parsed_plays.metas:
        key = (meta.game_id, meta.play_id)
        group = parsed_tracking.frames.get(key)
        if not group:
            exclusions.append(PlayExclusion(*key, reason="no tracking"))
            continue
        if require_thrown and meta.pass_result not in THROWN_RESULTS:
            exclusions.append(PlayExclusion(*key, reason="not a thrown pass"))
            continue
        tracks: dict[str, list[TrackingFrame]] = {}
        for fr in group:
            tracks.setdefault(fr.entity_id, []).append(fr)
        for entity, frames in tracks.items():
            frames.sort(key=lambda f: f.frame_index)
            for a, b in zip(frames, frames[1:]):
                if a.frame_index == b.frame_index:
                    raise DataIntegrityError(
                        f"duplicate frame {b.frame_index} for entity {entity} "
                        f"in play {key}")
        if BALL_ID not in tracks:
            exclusions.append(PlayExclusion(*key, reason="no ball track"))
            continue
        timeline = _resolve_events(tracks)
        if timeline is None:
            exclusions.append(PlayExclusion(*key, reason="missing events"))
            continue
        if not (timeline.snap_frame < timeline.throw_frame < timeline.arrival_frame):
            exclusions.append(PlayExclusion(*key, reason="event order invalid"))
            continue
        offense = "home" if meta.offense_is_home else "away"
        for entity in list(tracks):
            frames = tracks[entity]
            if frames[0].team_side != offense or entity == BALL_ID:
                continue
            if (frames[0].frame_index > timeline.snap_frame
                    or frames[-1].frame_index < timeline.arrival_frame):
                del tracks[entity]  # partial offensive track: not a route-runner
        play = PlaySequence(meta=meta, tracks=tracks, timeline=timeline)
        target = identify_targeted_receiver(play)
        if target is None:
            exclusions.append(PlayExclusion(*key, reason="no target"))
            continue
        play.targeted_receiver = target
        plays.append(play)
    return plays, exclusions


def write_rejection_report(path: str | Path, rejections: Sequence[RowRejection]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["line_number", "reason"])
        for rej in rejections:
            writer.writerow([rej.line_number, rej.reason])


def write_exclusion_report(path: str | Path, exclusions: Sequence[PlayExclusion]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["game_id", "play_id", "reason"])
        for exc in exclusions:
            writer.writerow([exc.game_id, exc.play_id, exc.reason])


def write_tracking_csv(path: str | Path, plays: Sequence[PlaySequence],
                       mapping: Mapping[str, str] | None = None) -> None:
    """Serialize plays back to the external tracking schema (round-trippable)."""
    mapping = dict(DEFAULT_MAPPING if mapping is None else mapping)
    cols = {k.split(".", 1)[1]: v for k, v in mapping.items()
            if k.startswith("tracking.")}
    header = [cols[k] for k in TRACKING_REQUIRED]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for play in plays:
            for entity in sorted(play.tracks, key=_entity_sort_key):
                for fr in play.tracks[entity]:
                    writer.writerow([
                        play.meta.game_id, play.meta.play_id, fr.frame_index,
                        "" if entity == BALL_ID else entity,
                        repr(fr.x), repr(fr.y), repr(fr.speed),
                        repr(fr.step_distance), repr(fr.direction),
                        fr.event_tag or "", fr.team_side,
                    ])


def write_plays_csv(path: str | Path, plays: Sequence[PlaySequence],
                    mapping: Mapping[str, str] | None = None) -> None:
    mapping = dict(DEFAULT_MAPPING if mapping is None else mapping)
    cols = {k.split(".", 1)[1]: v for k, v in mapping.items() if k.startswith("plays.")}
    inverse_results = {v: k for k, v in mapping.items() if k.startswith("result.")}
    header = [cols[k] for k in PLAYS_REQUIRED + PLAYS_OPTIONAL]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for play in plays:
            m = play.meta
            code = inverse_results.get(m.pass_result, "")
            writer.writerow([
                m.game_id, m.play_id, m.quarter, repr(m.clock_seconds), m.down,
                repr(m.yards_to_go), m.home_score_pre, m.visitor_score_pre,
                "1" if m.offense_is_home else "0",
                code.split(".", 1)[1] if code else m.pass_result,
                "" if m.pass_length is None else repr(m.pass_length),
                m.description, "0", "0",
            ])


# ---------------------------------------------------------------------------
# Synthetic plays (test oracle)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticParams:
    route_count: int = 3
    air_seconds: float = 2.0
    noise_scale: float = 0.3
    pre_snap_seconds: float = 1.0
    snap_to_throw_seconds: float = 2.0
    tail_seconds: float = 0.5


@dataclass
class SyntheticTruth:
    """Ground truth recorded by the generator for cross-module checks."""

    targeted_receiver: str
    passer: str
    covariates: dict[str, float | str]
    nearest_defender_throw: str
    nearest_defender_arrival: str


@dataclass
class SyntheticPlay:
    play: PlaySequence
    truth: SyntheticTruth


def _smooth_path(rng: np.random.Generator, start: np.ndarray, n_frames: int,
                 noise_scale: float) -> np.ndarray:
    """Piecewise-linear route through random waypoints, mildly jittered."""
    n_way = 4
    step = rng.uniform(0.4, 0.9)  # yards per frame along the main direction
    waypoints = [start]
    heading = rng.uniform(-math.pi / 3, math.pi / 3)
    for _ in range(n_way - 1):
        heading += rng.uniform(-0.8, 0.8)
        seg = rng.integers(max(2, n_frames // n_way), n_frames // 2 + 2)
        delta = np.array([math.cos(heading), math.sin(heading)]) * step * seg
        waypoints.append(waypoints[-1] + delta)
    ts = np.linspace(0.0, 1.0, n_way)
    grid = np.linspace(0.0, 1.0, n_frames)
    path = np.column_stack([
        np.interp(grid, ts, [w[0] for w in waypoints]),
        np.interp(grid, ts, [w[1] for w in waypoints]),
    ])
    jitter = rng.normal(0.0, noise_scale * 0.05, size=path.shape)
    jitter[0] = 0.0
    path += np.cumsum(jitter, axis=0) * 0.1
    path[:, 0] = np.clip(path[:, 0], 1.0, FIELD_LENGTH - 1.0)
    path[:, 1] = np.clip(path[:, 1], 1.0, FIELD_WIDTH - 1.0)
    return path


def _frames_from_path(entity_id: str, team: str, path: np.ndarray,
                      first_frame: int, events: Mapping[int, str]) -> list[TrackingFrame]:
    frames = []
    prev = None
    for i, (x, y) in enumerate(path):
        idx = first_frame + i
        if prev is None:
            step = 0.0
            direction = 0.0
        else:
            dx, dy = x - prev[0], y - prev[1]
            step = math.hypot(dx, dy)
            direction = math.degrees(math.atan2(dy, dx)) % 360.0
        frames.append(TrackingFrame(
            frame_index=idx,
            timestamp=(idx - 1) / FRAMES_PER_SECOND,
            entity_id=entity_id,
            x=float(x), y=float(y),
            speed=step * FRAMES_PER_SECOND,
            step_distance=step,
            direction=direction,
            event_tag=events.get(idx),
            team_side=team,
        ))
        prev = (x, y)
    return frames


def generate_synthetic_play(seed: int, params: SyntheticParams = SyntheticParams(),
                            game_id: str = "1", play_id: str = "1",
                            offense_is_home: bool = True) -> SyntheticPlay:
    """Deterministic synthetic play with recorded ground truth.

    Routes run at 10 Hz; the ball sits with the passer until the throw frame,
    then linearly interpolates to the target's arrival position.
    """
    rng = np.random.default_rng(seed)
    snap_frame = 1 + round(params.pre_snap_seconds * FRAMES_PER_SECOND)
    throw_frame = snap_frame + round(params.snap_to_throw_seconds * FRAMES_PER_SECOND)
    arrival_frame = throw_frame + round(params.air_seconds * FRAMES_PER_SECOND)
    last_frame = arrival_frame + round(params.tail_seconds * FRAMES_PER_SECOND)
    n_frames = last_frame

    caught = bool(rng.random() < 0.6)
    events = {snap_frame: "ball_snap", throw_frame: "pass_forward",
              arrival_frame: "pass_outcome_caught" if caught
              else "pass_outcome_incomplete"}

    offense = "home" if offense_is_home else "away"
    defense = "away" if offense_is_home else "home"
    qb_id = "10"
    qb_pos = np.array([30.0, FIELD_WIDTH / 2])
    tracks: dict[str, list[TrackingFrame]] = {}

    qb_path = np.tile(qb_pos, (n_frames, 1))
    qb_path += rng.normal(0.0, 0.02, size=qb_path.shape).cumsum(axis=0) * 0.1
    tracks[qb_id] = _frames_from_path(qb_id, offense, qb_path, 1, events)

    receiver_ids = [str(20 + i) for i in range(params.route_count)]
    defender_ids = [str(50 + i) for i in range(params.route_count)]
    receiver_paths = {}
    for i, rid in enumerate(receiver_ids):
        start = np.array([
            qb_pos[0] + rng.uniform(3.0, 8.0),
            (i + 1) * FIELD_WIDTH / (params.route_count + 1),
        ])
        pre = np.tile(start, (snap_frame - 1, 1))
        route = _smooth_path(rng, start, n_frames - snap_frame + 1,
                             params.noise_scale)
        path = np.vstack([pre, route])
        receiver_paths[rid] = path
        tracks[rid] = _frames_from_path(rid, offense, path, 1, events)

    defender_offsets = rng.uniform(1.0, 4.0, size=params.route_count)
    for i, did in enumerate(defender_ids):
        shadow = receiver_paths[receiver_ids[i]].copy()
        shadow[:, 0] += defender_offsets[i]
        shadow[:, 1] += rng.normal(0.0, params.noise_scale, size=len(shadow)) * 0.2
        shadow[:, 0] = np.clip(shadow[:, 0], 0.5, FIELD_LENGTH - 0.5)
        shadow[:, 1] = np.clip(shadow[:, 1], 0.5, FIELD_WIDTH - 0.5)
        tracks[did] = _frames_from_path(did, defense, shadow, 1, events)

    target = receiver_ids[int(rng.integers(params.route_count))]
    target_arrival = receiver_paths[target][arrival_frame - 1]
    offset_angle = rng.uniform(0, 2 * math.pi)
    offset = np.array([math.cos(offset_angle), math.sin(offset_angle)])
    offset *= rng.uniform(0.0, 0.8)
    ball_arrival = np.clip(target_arrival + offset,
                           [0.5, 0.5], [FIELD_LENGTH - 0.5, FIELD_WIDTH - 0.5])

    ball_path = np.empty((n_frames, 2))
    ball_path[:throw_frame] = qb_path[:throw_frame]
    air = arrival_frame - throw_frame
    for j in range(air + 1):
        ball_path[throw_frame - 1 + j] = (
            qb_path[throw_frame - 1] * (1 - j / air) + ball_arrival * (j / air))
    ball_path[arrival_frame:] = ball_arrival
    tracks[BALL_ID] = _frames_from_path(BALL_ID, BALL_ID, ball_path, 1, events)

    quarter = int(rng.integers(1, 5))
    meta = PlayMeta(
        game_id=game_id, play_id=play_id,
        quarter=quarter,
        clock_seconds=float(rng.integers(10, 900)),
        down=int(rng.integers(1, 5)),
        yards_to_go=float(rng.integers(1, 16)),
        home_score_pre=int(rng.integers(0, 29)),
        visitor_score_pre=int(rng.integers(0, 29)),
        offense_is_home=offense_is_home,
        pass_result="caught" if caught else "incomplete",
        pass_length=float(ball_arrival[0] - qb_pos[0]),
        description=f"synthetic play seed={seed}",
    )
    timeline = EventTimeline(snap_frame, throw_frame, arrival_frame,
                             events[arrival_frame])
    play = PlaySequence(meta=meta, tracks=tracks, timeline=timeline,
                        targeted_receiver=target)

    truth = _ground_truth(play, target, qb_id)
    return SyntheticPlay(play=play, truth=truth)


def _ground_truth(play: PlaySequence, target: str, passer: str) -> SyntheticTruth:
    """Recompute covariates with plain arithmetic over generated positions."""
    tl = play.timeline

    def snapshot(frame_index: int) -> tuple[dict[str, float], str]:
        rec = play.frame_at(target, frame_index)
        ball = play.frame_at(BALL_ID, frame_index)
        best_id, best = None, math.inf
        for did in play.entities_on_side(play.defense_side):
            d = play.frame_at(did, frame_index)
            dist = math.hypot(d.x - rec.x, d.y - rec.y)
            if (dist, _entity_sort_key(did)) < (best, _entity_sort_key(best_id or "")):
                best_id, best = did, dist
        dfr = play.frame_at(best_id, frame_index)
        cumulative = sum(f.step_distance for f in play.tracks[target]
                         if f.frame_index <= frame_index)
        values = {
            "receiver_speed": rec.speed,
            "receiver_direction": rec.direction,
            "receiver_defender_euclid": math.hypot(rec.x - dfr.x, rec.y - dfr.y),
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
        return values, best_id

    throw_vals, def_throw = snapshot(tl.throw_frame)
    arr_vals, def_arrival = snapshot(tl.arrival_frame)
    direction_delta = (arr_vals["receiver_direction"]
                       - throw_vals["receiver_direction"] + 180.0) % 360.0 - 180.0
    if direction_delta == -180.0:
        direction_delta = 180.0
    meta = play.meta
    offense_score = meta.home_score_pre if meta.offense_is_home else meta.visitor_score_pre
    defense_score = meta.visitor_score_pre if meta.offense_is_home else meta.home_score_pre
    margin = abs(offense_score - defense_score)
    covariates: dict[str, float | str] = {}
    covariates.update({f"{k}_throw": v for k, v in throw_vals.items()})
    covariates.update({f"{k}_arrival": v for k, v in arr_vals.items()})
    covariates.update({
        "delta_receiver_speed": arr_vals["receiver_speed"] - throw_vals["receiver_speed"],
        "delta_separation": (arr_vals["receiver_defender_euclid"]
                             - throw_vals["receiver_defender_euclid"]),
        "delta_receiver_direction": direction_delta,
        "delta_cumulative_distance": (arr_vals["receiver_cumulative_distance"]
                                      - throw_vals["receiver_cumulative_distance"]),
        "snap_to_throw_seconds": (tl.throw_frame - tl.snap_frame) / FRAMES_PER_SECOND,
        "air_seconds": (tl.arrival_frame - tl.throw_frame) / FRAMES_PER_SECOND,
        "snap_to_arrival_seconds": (tl.arrival_frame - tl.snap_frame) / FRAMES_PER_SECOND,
        "seconds_left_in_half": meta.clock_seconds
        + (900.0 if meta.quarter in (1, 3) else 0.0),
        "down": str(meta.down),
        "yards_to_go": meta.yards_to_go,
        "offense_leading": 1.0 if offense_score > defense_score else 0.0,
        "score_margin_category": "0" if margin == 0 else ("1-8" if margin <= 8 else "9+"),
    })
    return SyntheticTruth(
        targeted_receiver=target, passer=passer, covariates=covariates,
        nearest_defender_throw=def_throw, nearest_defender_arrival=def_arrival,
    )


def generate_synthetic_game(seed: int, n_plays: int,
                            params: SyntheticParams = SyntheticParams(),
                            game_id: str = "1") -> list[SyntheticPlay]:
    """A sequence of plays in one game, chronological by integer play_id."""
    rng = np.random.default_rng(seed)
    plays = []
    for i in range(n_plays):
        sp = generate_synthetic_play(
            seed=int(rng.integers(0, 2**31 - 1)),
            params=replace(params,
                           air_seconds=float(rng.uniform(0.8, 3.0)),
                           snap_to_throw_seconds=float(rng.uniform(1.0, 3.5))),
            game_id=game_id, play_id=str(i + 1),
            offense_is_home=bool(rng.random() < 0.5),
        )
        plays.append(sp)
    return plays
