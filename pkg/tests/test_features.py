"""Covariate extraction, the schema, and standardization."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_static_play
from ehcp.features import (
    DEFAULT_SCHEMA,
    FeatureMatrix,
    StandardizationParams,
    build_feature_matrix,
    check_standardized,
    extract_dataset,
    extract_pass_features,
    fit_standardization,
    geometry_at_frame,
    situation_covariates,
    wrap_angle_delta,
)


class TestSchema:
    def test_shape(self):
        assert len(DEFAULT_SCHEMA.names) == 36
        assert len(DEFAULT_SCHEMA.column_names) == 39
        assert len(DEFAULT_SCHEMA.missing_at_throw()) == 18

    def test_missing_set_is_arrival_phase(self):
        missing = set(DEFAULT_SCHEMA.missing_at_throw())
        assert {"receiver_speed_arrival", "air_seconds",
                "snap_to_arrival_seconds", "delta_separation"} <= missing
        assert {"receiver_speed_throw", "snap_to_throw_seconds",
                "down", "yards_to_go"} & missing == set()

    def test_categorical_expansion(self):
        row = {name: 0.0 for name in DEFAULT_SCHEMA.names}
        row.update(down="3", score_margin_category="9+",
                   receiver_direction_throw=45.0)
        encoded = DEFAULT_SCHEMA.encode([row])[0]
        cols = DEFAULT_SCHEMA.column_names
        assert encoded[cols.index("down=3")] == 1.0
        assert encoded[cols.index("down=2")] == 0.0
        assert encoded[cols.index("down=4")] == 0.0
        assert encoded[cols.index("score_margin_category=9+")] == 1.0
        # the baseline level encodes as all-zero indicators
        row.update(down="1", score_margin_category="0")
        encoded = DEFAULT_SCHEMA.encode([row])[0]
        for col in ("down=2", "down=3", "down=4",
                    "score_margin_category=1-8", "score_margin_category=9+"):
            assert encoded[cols.index(col)] == 0.0

    def test_validate_row_refusals(self):
        row = {name: 0.0 for name in DEFAULT_SCHEMA.names}
        row.update(down="2", score_margin_category="0")
        DEFAULT_SCHEMA.validate_row(row)
        bad = dict(row)
        del bad["air_seconds"]
        with pytest.raises(ValueError, match="air_seconds"):
            DEFAULT_SCHEMA.validate_row(bad)
        bad = dict(row, down="5")
        with pytest.raises(ValueError, match="down"):
            DEFAULT_SCHEMA.validate_row(bad)
        bad = dict(row, offense_leading=0.5)
        with pytest.raises(ValueError, match="offense_leading"):
            DEFAULT_SCHEMA.validate_row(bad)
        bad = dict(row, receiver_speed_throw=float("nan"))
        with pytest.raises(ValueError, match="not finite"):
            DEFAULT_SCHEMA.validate_row(bad)


class TestAngles:
    def test_known_wraps(self):
        assert wrap_angle_delta(190.0) == -170.0
        assert wrap_angle_delta(-190.0) == 170.0
        assert wrap_angle_delta(180.0) == 180.0
        assert wrap_angle_delta(-180.0) == 180.0
        assert wrap_angle_delta(0.0) == 0.0

    @given(st.floats(-1080, 1080, allow_nan=False))
    def test_range_and_period(self, d):
        w = wrap_angle_delta(d)
        assert -180.0 < w <= 180.0
        assert math.isclose(math.cos(math.radians(w)),
                            math.cos(math.radians(d)), abs_tol=1e-9)
        assert math.isclose(math.sin(math.radians(w)),
                            math.sin(math.radians(d)), abs_tol=1e-9)


class TestGeometry:
    def test_three_four_five_triangle(self):
        play = make_static_play(receiver_xy=(45.0, 30.0),
                                defender_xy=(48.0, 34.0))
        g = geometry_at_frame(play, "20", play.timeline.throw_frame)
        assert g.values["receiver_defender_horiz"] == 3.0
        assert g.values["receiver_defender_vert"] == 4.0
        assert g.values["receiver_defender_euclid"] == 5.0
        assert g.nearest_defender == "50"

    def test_ball_on_receiver_is_distance_zero(self):
        play = make_static_play(ball_at_receiver=True)
        g = geometry_at_frame(play, "20", play.timeline.arrival_frame)
        assert g.values["receiver_ball_euclid"] == 0.0
        assert g.values["receiver_ball_horiz"] == 0.0
        assert g.values["receiver_ball_vert"] == 0.0

    def test_euclid_squares(self, dataset):
        for pf in dataset[:10]:
            row = pf.covariates
            for prefix in ("receiver_defender", "receiver_ball", "defender_ball"):
                for phase in ("throw", "arrival"):
                    e = row[f"{prefix}_euclid_{phase}"]
                    h = row[f"{prefix}_horiz_{phase}"]
                    v = row[f"{prefix}_vert_{phase}"]
                    assert e == pytest.approx(math.hypot(h, v), abs=1e-9)


class TestSituation:
    def test_half_clock_and_margin(self):
        play = make_static_play()
        row = situation_covariates(play)
        assert row["seconds_left_in_half"] == 534.0  # quarter 2: no extra
        assert row["down"] == "2"
        assert row["offense_leading"] == 1.0
        assert row["score_margin_category"] == "1-8"

    def test_first_and_third_quarters_add_900(self):
        play = make_static_play()
        for quarter in (1, 3):
            meta = play.meta.__class__(**{**play.meta.__dict__,
                                          "quarter": quarter})
            patched = make_static_play()
            patched.meta = meta
            assert situation_covariates(patched)["seconds_left_in_half"] == 1434.0


class TestExtraction:
    def test_static_play_exact_values(self):
        play = make_static_play(snap=3, throw=6, arrival=10,
                                ball_at_receiver=True)
        pf = extract_pass_features(play)
        row = pf.covariates
        assert row["snap_to_throw_seconds"] == pytest.approx(0.3)
        assert row["air_seconds"] == pytest.approx(0.4)
        assert row["snap_to_arrival_seconds"] == pytest.approx(0.7)
        for name in ("delta_receiver_speed", "delta_separation",
                     "delta_receiver_direction", "delta_cumulative_distance"):
            assert row[name] == 0.0
        assert row["receiver_cumulative_distance_throw"] == 0.0
        assert row["receiver_ball_euclid_arrival"] == 0.0
        assert pf.caught == 1
        assert pf.receiver_id == "20"

    def test_one_frame_air_time(self):
        play = make_static_play(snap=3, throw=6, arrival=7)
        row = extract_pass_features(play).covariates
        assert row["air_seconds"] == pytest.approx(0.1)
        assert row["delta_receiver_speed"] == 0.0
        assert row["delta_separation"] == 0.0

    def test_phase_identity(self, dataset):
        for pf in dataset:
            row = pf.covariates
            assert row["snap_to_arrival_seconds"] == pytest.approx(
                row["snap_to_throw_seconds"] + row["air_seconds"], abs=1e-9)
            assert row["receiver_cumulative_distance_arrival"] == pytest.approx(
                row["receiver_cumulative_distance_throw"]
                + row["delta_cumulative_distance"], abs=1e-9)

    def test_matches_generator_ground_truth(self, synthetic_game):
        for sp in synthetic_game[:3]:
            pf = extract_pass_features(sp.play)
            assert pf.nearest_defender_throw == sp.truth.nearest_defender_throw
            assert pf.nearest_defender_arrival == sp.truth.nearest_defender_arrival
            for name, want in sp.truth.covariates.items():
                got = pf.covariates[name]
                if isinstance(want, str):
                    assert got == want, name
                else:
                    assert got == pytest.approx(want, abs=1e-9), name

    def test_cumulative_distance_accumulates_over_game(self, plays, dataset):
        # brute-force the running total for the targeted receiver of play 5
        target_play = plays[4]
        rid = target_play.targeted_receiver
        prior = 0.0
        for play in plays[:4]:
            if rid in play.tracks:
                prior += sum(f.step_distance for f in play.tracks[rid])
        within = sum(f.step_distance for f in target_play.tracks[rid]
                     if f.frame_index <= target_play.timeline.throw_frame)
        row = next(pf for pf in dataset
                   if (pf.game_id, pf.play_id) == target_play.key)
        assert row.covariates["receiver_cumulative_distance_throw"] == (
            pytest.approx(prior + within, abs=1e-9))
        assert prior > 0.0  # the check must exercise the cross-play case

    def test_row_has_every_schema_name(self, dataset):
        assert set(dataset[0].covariates) == set(DEFAULT_SCHEMA.names)

    def test_dataset_ordering(self, dataset):
        keys = [(int(pf.game_id), int(pf.play_id)) for pf in dataset]
        assert keys == sorted(keys)


class TestStandardization:
    def test_two_point_column_maps_to_half(self):
        raw = np.array([[0.0], [2.0]])
        params = fit_standardization(raw, ["a"], ["continuous"])
        out = params.transform(raw, ["a"])
        assert out[:, 0] == pytest.approx([-0.5, 0.5], abs=0)
        assert float(np.std(out[:, 0])) == 0.5

    def test_binary_centered_not_scaled(self):
        raw = np.array([[0.0], [0.0], [1.0], [1.0]])
        params = fit_standardization(raw, ["b"], ["binary"])
        out = params.transform(raw, ["b"])
        assert out[:, 0] == pytest.approx([-0.5, -0.5, 0.5, 0.5], abs=0)
        assert params.scales[0] == 1.0

    def test_constant_column_dropped_and_recorded(self):
        raw = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
        params = fit_standardization(raw, ["keep", "const"],
                                     ["continuous", "continuous"])
        assert params.dropped == ("const",)
        assert params.column_names == ("keep",)
        assert params.transform(raw, ["keep", "const"]).shape == (3, 1)

    def test_layout_mismatch_refused(self):
        raw = np.array([[1.0], [2.0]])
        params = fit_standardization(raw, ["a"], ["continuous"])
        with pytest.raises(ValueError, match="layout"):
            params.transform(raw, ["b"])

    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=20),
           st.floats(0.5, 50))
    def test_round_trip(self, values, spread):
        col = np.array(values)
        col[0] = col[1:].max() + spread  # guarantee the column is not constant
        raw = col.reshape(-1, 1)
        params = fit_standardization(raw, ["a"], ["continuous"])
        out = params.transform(raw, ["a"])
        back = out[:, 0] * params.scales[0] + params.means[0]
        assert np.allclose(back, col, atol=1e-9)
        assert abs(float(out[:, 0].mean())) < 1e-9
        assert abs(float(out[:, 0].std()) - 0.5) < 1e-9

    def test_check_standardized_refuses_raw_scale(self):
        rng = np.random.default_rng(0)
        X = rng.normal(0.0, 3.0, size=(50, 2))
        with pytest.raises(ValueError, match="sd"):
            check_standardized(X)
        check_standardized(X / (2 * X.std(axis=0)))  # passes once rescaled

    def test_check_standardized_binary_exempt(self):
        X = np.array([[0.9, -0.45], [-0.1, 0.55], [-0.1, -0.45], [0.9, 0.55],
                      [0.9, 0.55], [-0.1, -0.45]])
        # column 0 is a centered binary with sd far from 0.5
        check_standardized(X, column_kinds=["binary", "continuous"])

    def test_serialization_round_trip(self, features):
        params = features.standardization
        again = StandardizationParams.from_dict(params.to_dict())
        assert again.column_names == params.column_names
        assert np.array_equal(again.means, params.means)
        assert np.array_equal(again.scales, params.scales)
        assert again.dropped == params.dropped


class TestFeatureMatrix:
    def test_shapes_and_labels(self, features, dataset):
        assert isinstance(features, FeatureMatrix)
        assert features.n == len(dataset)
        assert features.p == len(features.column_names)
        assert set(features.y) <= {0.0, 1.0}
        assert features.keys[0] == (dataset[0].game_id, dataset[0].play_id)

    def test_standardized_moments(self, features):
        for j, kind in enumerate(features.column_kinds):
            col = features.X[:, j]
            assert abs(float(col.mean())) < 1e-9
            if kind != "binary":
                assert abs(float(col.std()) - 0.5) < 1e-9

    def test_reusing_params_matches(self, features, dataset):
        again = build_feature_matrix(dataset, params=features.standardization)
        assert np.array_equal(again.X, features.X)

    def test_extract_dataset_skips_untargeted(self, plays):
        clone = [plays[0], plays[1]]
        clone[0] = type(clone[0])(meta=clone[0].meta, tracks=clone[0].tracks,
                                  timeline=clone[0].timeline,
                                  targeted_receiver=None)
        rows = extract_dataset(clone)
        assert [r.play_id for r in rows] == [clone[1].meta.play_id]
