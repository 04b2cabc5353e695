"""End-to-end CLI coverage: synth -> ingest -> train -> query commands."""

import json
from types import SimpleNamespace

import pytest

from ehcp.cli import main
from ehcp.modelfile import load_bundle, load_model


def run(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """One synth -> ingest -> train pass shared by the query-command tests."""
    root = tmp_path_factory.mktemp("cli")
    raw = root / "raw"
    bundle = root / "bundle.json.gz"
    model = root / "bart_model.json.gz"
    assert run("synth", "--out", raw, "--games", 2, "--plays", 12,
               "--seed", 5) == 0
    assert run("ingest", "--tracking", raw / "tracking.csv",
               "--plays", raw / "plays.csv", "--mapping", raw / "mapping.txt",
               "--out", bundle) == 0
    assert run("train", "--data", bundle, "--model", "bart", "--out", model,
               "--trees", 5, "--draws", 30, "--burnin", 30, "--seed", 9) == 0
    plays, rows, schema, fingerprint = load_bundle(bundle)
    return SimpleNamespace(root=root, raw=raw, bundle=bundle, model=model,
                           plays=plays, rows=rows, fingerprint=fingerprint)


def play_args(pl, out, **extra):
    meta = pl.plays[0].meta
    argv = ["play", "--model", pl.model, "--data", pl.bundle,
            "--game", meta.game_id, "--play", meta.play_id, "--out", out,
            "--grid-step", 0.5, "--imputations", 8, "--seed", 3]
    for key, value in extra.items():
        argv += [f"--{key}", value]
    return argv


class TestPipelineArtifacts:
    def test_synth_files(self, pipeline):
        for name in ("tracking.csv", "plays.csv", "mapping.txt"):
            assert (pipeline.raw / name).exists()

    def test_ingest_reports(self, pipeline):
        for name in ("rejected_tracking_rows.csv", "rejected_play_rows.csv",
                     "excluded_plays.csv"):
            assert (pipeline.root / name).exists()
        header = (pipeline.root / "rejected_tracking_rows.csv"
                  ).read_text().splitlines()[0]
        assert header == "line_number,reason"

    def test_bundle_contents(self, pipeline):
        assert len(pipeline.plays) == 24
        assert len(pipeline.rows) > 0
        assert len(pipeline.fingerprint) == 64

    def test_trained_model_loads(self, pipeline):
        model, fingerprint = load_model(pipeline.model)
        assert model.kind == "bart"
        assert fingerprint == pipeline.fingerprint


class TestPlayCommand:
    def test_outputs(self, pipeline, capsys):
        out = pipeline.root / "playout"
        assert run(*play_args(pipeline, out)) == 0
        meta = pipeline.plays[0].meta
        stem = f"play_{meta.game_id}_{meta.play_id}"
        report = json.loads((out / f"{stem}.json").read_text())
        assert report["game_id"] == meta.game_id
        assert report["trajectories"]
        lines = (out / f"{stem}_trajectories.csv").read_text().splitlines()
        assert lines[0] == "receiver_id,t,ehcp_mean,q2.5,q97.5,M,mode,seed"
        assert len(lines) > 1
        assert (out / f"{stem}_trajectories.png").stat().st_size > 0
        assert (out / f"{stem}_field.png").stat().st_size > 0
        stdout = capsys.readouterr().out
        assert "targeted receiver" in stdout

    def test_rerun_is_byte_identical(self, pipeline):
        a = pipeline.root / "play_a"
        b = pipeline.root / "play_b"
        assert run(*play_args(pipeline, a)) == 0
        assert run(*play_args(pipeline, b)) == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_unknown_play_aborts(self, pipeline):
        with pytest.raises(SystemExit, match="not found"):
            run("play", "--model", pipeline.model, "--data", pipeline.bundle,
                "--game", "77", "--play", "1",
                "--out", pipeline.root / "nowhere")


class TestPdpCommand:
    def test_continuous(self, pipeline):
        out = pipeline.root / "pdp_cont"
        assert run("pdp", "--model", pipeline.model, "--data", pipeline.bundle,
                   "--variable", "air_seconds", "--out", out,
                   "--points", 7) == 0
        lines = (out / "pdp_air_seconds.csv").read_text().splitlines()
        assert lines[0] == "value,mean,q2.5,q97.5"
        assert len(lines) == 8
        assert (out / "pdp_air_seconds.png").exists()

    def test_categorical(self, pipeline):
        out = pipeline.root / "pdp_cat"
        assert run("pdp", "--model", pipeline.model, "--data", pipeline.bundle,
                   "--variable", "down", "--out", out) == 0
        lines = (out / "pdp_down.csv").read_text().splitlines()
        values = [line.split(",")[0] for line in lines[1:]]
        assert values == ["1", "2", "3", "4"]

    def test_unknown_variable(self, pipeline, capsys):
        assert run("pdp", "--model", pipeline.model, "--data", pipeline.bundle,
                   "--variable", "bogus", "--out", pipeline.root / "x") == 1
        assert "ehcp: error:" in capsys.readouterr().err


class TestReportCommand:
    def test_qb(self, pipeline, capsys):
        out = pipeline.root / "qb"
        assert run("report", "--model", pipeline.model,
                   "--data", pipeline.bundle, "--kind", "qb", "--out", out,
                   "--min-passes", 1, "--imputations", 5, "--seed", 2) == 0
        lines = (out / "qb_report.csv").read_text().splitlines()
        assert lines[0] == "passer_id,passes,pct_highest,pct_lowest"
        assert len(lines) > 1
        assert (out / "qb_report.png").exists()
        assert "most open" in capsys.readouterr().out

    def test_receiver(self, pipeline):
        out = pipeline.root / "recv"
        assert run("report", "--model", pipeline.model,
                   "--data", pipeline.bundle, "--kind", "receiver",
                   "--out", out, "--min-targets", 1, "--imputations", 5,
                   "--seed", 2) == 0
        lines = (out / "receiver_report.csv").read_text().splitlines()
        assert lines[0] == ("receiver_id,targets,mean_ehcp,mean_fitted,"
                            "difference")
        assert len(lines) > 1


class TestValidateCommand:
    def test_outputs(self, pipeline, capsys):
        out = pipeline.root / "val"
        assert run("validate", "--data", pipeline.bundle, "--out", out,
                   "--splits", 2, "--seed", 1, "--chains", 1, "--draws", 40,
                   "--burnin", 40, "--trees", 5) == 0
        lines = (out / "validation.csv").read_text().splitlines()
        assert lines[0] == "model,metric,mean,sd"
        assert len(lines) == 7  # 2 models x 3 metrics
        assert (out / "validation.txt").read_text().strip()
        assert (out / "validation.png").exists()
        stdout = capsys.readouterr().out
        assert "logistic" in stdout and "bart" in stdout


class TestErrorHandling:
    def test_missing_model_file(self, pipeline, capsys):
        assert run("pdp", "--model", pipeline.root / "absent.json",
                   "--data", pipeline.bundle, "--variable", "air_seconds",
                   "--out", pipeline.root / "y") == 1
        err = capsys.readouterr().err
        assert err.startswith("ehcp: error:")

    def test_fingerprint_mismatch_warns(self, pipeline, tmp_path, capsys):
        raw = tmp_path / "raw2"
        bundle = tmp_path / "other.json.gz"
        assert run("synth", "--out", raw, "--games", 1, "--plays", 4,
                   "--seed", 99) == 0
        assert run("ingest", "--tracking", raw / "tracking.csv",
                   "--plays", raw / "plays.csv",
                   "--mapping", raw / "mapping.txt", "--out", bundle) == 0
        capsys.readouterr()
        assert run("pdp", "--model", pipeline.model, "--data", bundle,
                   "--variable", "air_seconds", "--out", tmp_path / "p") == 0
        assert "different dataset" in capsys.readouterr().err
