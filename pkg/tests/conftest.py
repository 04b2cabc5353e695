"""Shared fixtures: one synthetic game, small fitted models, a static play.

The fitted-model fixtures use deliberately small sampler settings; tests that
check sampler *correctness* build their own problems with frozen seeds.
"""

from collections.abc import Mapping, Sequence

import numpy as np
import pytest

from ehcp.bart import BartConfig, fit_bart
from ehcp.engine import Model
from ehcp.features import (
    DEFAULT_SCHEMA,
    StandardizationParams,
    build_feature_matrix,
    extract_dataset,
)
from ehcp.imputation import build_donor_pool
from ehcp.logistic import ChainDiagnostics, LogisticPosterior, fit_logistic
from ehcp.tracking import (
    EventTimeline,
    PlayMeta,
    PlaySequence,
    TrackingFrame,
    generate_synthetic_game,
)

GAME_SEED = 21
N_PLAYS = 30


@pytest.fixture(scope="session")
def synthetic_game():
    return generate_synthetic_game(seed=GAME_SEED, n_plays=N_PLAYS)


@pytest.fixture(scope="session")
def plays(synthetic_game):
    return [sp.play for sp in synthetic_game]


@pytest.fixture(scope="session")
def dataset(plays):
    return extract_dataset(plays)


@pytest.fixture(scope="session")
def pool(dataset):
    return build_donor_pool(dataset)


@pytest.fixture(scope="session")
def features(dataset):
    return build_feature_matrix(dataset)


@pytest.fixture(scope="session")
def logistic_model(features):
    post = fit_logistic(
        features.X, features.y,
        column_names=features.column_names,
        column_kinds=features.column_kinds,
        chains=2, warmup=150, draws=150, seed=3,
    )
    return Model(kind="logistic", posterior=post, schema=DEFAULT_SCHEMA,
                 standardization=features.standardization)


@pytest.fixture(scope="session")
def bart_model(features):
    config = BartConfig(num_trees=10, draws=40, burnin=40, seed=3)
    post = fit_bart(
        features.X, features.y, config,
        column_names=features.column_names,
        column_kinds=features.column_kinds,
        standardization=features.standardization,
    )
    return Model(kind="bart", posterior=post, schema=DEFAULT_SCHEMA,
                 standardization=features.standardization)


def linear_model(coef_by_name: Mapping[str, float] | None = None,
                 intercept: float | Sequence[float] = 0.0,
                 n_draws: int = 1) -> Model:
    """Hand-set logistic posterior over raw (identity-standardized) covariates.

    Probability is sigmoid(intercept + sum coef * raw value), exactly, which
    lets tests reason about the engine's arithmetic without sampler noise.
    ``intercept`` may be a sequence of length ``n_draws`` to give the draws
    distinct values.
    """
    cols = tuple(DEFAULT_SCHEMA.column_names)
    std = StandardizationParams(
        column_names=cols,
        means=np.zeros(len(cols)),
        scales=np.ones(len(cols)),
        dropped=(),
    )
    coefs = np.zeros((n_draws, len(cols) + 1))
    coefs[:, 0] = np.broadcast_to(np.asarray(intercept, dtype=float), (n_draws,))
    for name, value in (coef_by_name or {}).items():
        coefs[:, 1 + cols.index(name)] = value
    diag = ChainDiagnostics(rhat=np.ones(len(cols) + 1),
                            ess=np.full(len(cols) + 1, float(n_draws)),
                            warnings=[])
    post = LogisticPosterior(coef_draws=coefs, column_names=cols,
                             diagnostics=diag, seed=0)
    return Model(kind="logistic", posterior=post, schema=DEFAULT_SCHEMA,
                 standardization=std)


def make_static_play(snap: int = 3, throw: int = 6, arrival: int = 10,
                     last: int | None = None, ball_at_receiver: bool = False,
                     shift: tuple[float, float] = (0.0, 0.0),
                     receiver_xy: tuple[float, float] = (45.0, 30.0),
                     defender_xy: tuple[float, float] = (48.0, 34.0),
                     ) -> PlaySequence:
    """A play where nobody moves: exact-zero deltas and frame-flat geometry.

    The ball sits with the passer, jumping onto the receiver's spot at the
    arrival frame when ``ball_at_receiver`` is set.
    """
    if last is None:
        last = arrival + 2
    dx, dy = shift
    spots = {
        "1": (30.0 + dx, 26.65 + dy),
        "20": (receiver_xy[0] + dx, receiver_xy[1] + dy),
        "50": (defender_xy[0] + dx, defender_xy[1] + dy),
    }
    events = {snap: "ball_snap", throw: "pass_forward",
              arrival: "pass_outcome_caught"}

    def frames(entity, side, xy_for):
        out = []
        for i in range(1, last + 1):
            x, y = xy_for(i)
            out.append(TrackingFrame(
                frame_index=i, timestamp=(i - 1) / 10.0, entity_id=entity,
                x=x, y=y, speed=0.0, step_distance=0.0, direction=90.0,
                event_tag=events.get(i), team_side=side))
        return out

    tracks = {
        "1": frames("1", "home", lambda i: spots["1"]),
        "20": frames("20", "home", lambda i: spots["20"]),
        "50": frames("50", "away", lambda i: spots["50"]),
        "ball": frames("ball", "ball",
                       lambda i: spots["20"]
                       if ball_at_receiver and i >= arrival else spots["1"]),
    }
    meta = PlayMeta(game_id="9", play_id="1", quarter=2, clock_seconds=534.0,
                    down=2, yards_to_go=8.0, home_score_pre=14,
                    visitor_score_pre=7, offense_is_home=True,
                    pass_result="caught", pass_length=12.0,
                    description="static play")
    timeline = EventTimeline(snap_frame=snap, throw_frame=throw,
                             arrival_frame=arrival,
                             outcome_tag="pass_outcome_caught")
    return PlaySequence(meta=meta, tracks=tracks, timeline=timeline,
                        targeted_receiver="20")
