"""Command-line interface: ingest, train, validate, play reports, PDP, serve.

Subcommands write delimited tables plus matplotlib figures next to them, all
atomically (temp file + rename) so interrupted runs never leave partial
output. Every command that touches randomness takes --seed and echoes it in
its outputs.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bart, engine, evaluation, features, imputation, logistic
from . import modelfile, plots, tracking

PROG = "ehcp"


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, (float, np.floating)) else str(value)


def cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plays = []
    rng = np.random.default_rng(args.seed)
    for g in range(args.games):
        game = tracking.generate_synthetic_game(
            seed=int(rng.integers(0, 2 ** 31 - 1)), n_plays=args.plays,
            game_id=str(g + 1))
        plays.extend(sp.play for sp in game)
    tracking.write_tracking_csv(out / "tracking.csv", plays)
    tracking.write_plays_csv(out / "plays.csv", plays)
    tracking.write_mapping(out / "mapping.txt")
    print(f"wrote {len(plays)} synthetic plays under {out}")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    mapping = (tracking.load_mapping(args.mapping) if args.mapping
               else dict(tracking.DEFAULT_MAPPING))
    parsed_tracking = tracking.parse_tracking_csv(args.tracking, mapping)
    parsed_plays = tracking.parse_plays_csv(args.plays, mapping)
    plays, exclusions = tracking.assemble_plays(parsed_tracking, parsed_plays)
    rows = features.extract_dataset(plays)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fingerprint = modelfile.save_bundle(out, plays, rows)
    report_dir = Path(args.reports) if args.reports else out.parent
    tracking.write_rejection_report(
        report_dir / "rejected_tracking_rows.csv", parsed_tracking.rejections)
    tracking.write_rejection_report(
        report_dir / "rejected_play_rows.csv", parsed_plays.rejections)
    tracking.write_exclusion_report(
        report_dir / "excluded_plays.csv", exclusions)
    print(f"accepted {len(plays)} plays ({len(rows)} feature rows); "
          f"rejected {len(parsed_tracking.rejections)} tracking rows, "
          f"{len(parsed_plays.rejections)} play rows; "
          f"excluded {len(exclusions)} plays")
    print(f"bundle {out} fingerprint {fingerprint}")
    return 0


def _bart_config(args: argparse.Namespace) -> bart.BartConfig:
    return bart.BartConfig(
        num_trees=args.trees, draws=args.draws, burnin=args.burnin,
        max_depth=args.max_depth, seed=args.seed,
    )


def cmd_train(args: argparse.Namespace) -> int:
    plays, rows, schema, fingerprint = modelfile.load_bundle(args.data)
    matrix = features.build_feature_matrix(rows, schema)
    if args.model == "logistic":
        posterior = logistic.fit_logistic(
            matrix.X, matrix.y, column_names=matrix.column_names,
            column_kinds=matrix.column_kinds, chains=args.chains,
            warmup=args.burnin, draws=args.draws, seed=args.seed)
    else:
        posterior = bart.fit_bart(
            matrix.X, matrix.y, _bart_config(args),
            column_names=matrix.column_names,
            column_kinds=matrix.column_kinds,
            standardization=matrix.standardization)
    model = engine.Model(kind=args.model, posterior=posterior, schema=schema,
                         standardization=matrix.standardization)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    modelfile.save_model(out, model, fingerprint)
    print(f"trained {args.model} on {matrix.n} passes "
          f"({posterior.n_draws} posterior draws) -> {out}")
    if args.model == "logistic" and posterior.diagnostics.warnings:
        for line in posterior.diagnostics.warnings:
            print(f"warning: {line}", file=sys.stderr)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    plays, rows, schema, _ = modelfile.load_bundle(args.data)
    raw = schema.encode([pf.covariates for pf in rows])
    y = np.array([pf.caught for pf in rows], dtype=float)

    def fit_logistic_model(X, y_train, column_names, column_kinds, seed):
        return logistic.fit_logistic(
            X, y_train, column_names=column_names, column_kinds=column_kinds,
            chains=args.chains, warmup=args.burnin, draws=args.draws, seed=seed)

    def fit_bart_model(X, y_train, column_names, column_kinds, seed):
        config = bart.BartConfig(num_trees=args.trees, draws=args.draws,
                                 burnin=args.burnin, seed=seed)
        return bart.fit_bart(X, y_train, config, column_names=column_names,
                             column_kinds=column_kinds)

    result = evaluation.validation_experiment(
        raw, y, schema.column_names, schema.column_kinds(),
        {"logistic": fit_logistic_model, "bart": fit_bart_model},
        n_splits=args.splits, seed=args.seed)
    print(result.table())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    agg = result.aggregate()
    csv_rows = []
    for model_name in sorted(agg):
        for metric in ("mse", "logloss", "misclass"):
            mean, sd = agg[model_name][metric]
            csv_rows.append([model_name, metric, _fmt(mean), _fmt(sd)])
    _atomic_write_text(out / "validation.csv",
                       _csv_text(["model", "metric", "mean", "sd"], csv_rows))
    _atomic_write_text(out / "validation.txt", result.table() + "\n")
    plots.save_figure(plots.validation_figure(agg), out / "validation.png")
    print(f"wrote {out / 'validation.csv'}, validation.txt, validation.png")
    return 0


def _load_model_and_bundle(model_path: str, data_path: str):
    model, fingerprint = modelfile.load_model(model_path)
    plays, rows, schema, data_fingerprint = modelfile.load_bundle(data_path)
    if fingerprint and data_fingerprint and fingerprint != data_fingerprint:
        print("warning: model was trained on a different dataset "
              f"(model fingerprint {fingerprint[:12]}..., "
              f"data {data_fingerprint[:12]}...)", file=sys.stderr)
    return model, plays, rows, schema


def _find_play(plays, game_id: str, play_id: str) -> tracking.PlaySequence:
    for play in plays:
        if play.meta.game_id == game_id and play.meta.play_id == play_id:
            return play
    raise SystemExit(f"{PROG}: play {game_id}/{play_id} not found in the bundle")


def cmd_play(args: argparse.Namespace) -> int:
    model, plays, rows, schema = _load_model_and_bundle(args.model, args.data)
    play = _find_play(plays, args.game, args.play)
    pool = imputation.build_donor_pool(rows, schema)
    report = engine.play_report(model, play, pool, step=args.grid_step,
                                M=args.imputations, mode=args.mode,
                                seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"play_{args.game}_{args.play}"
    modelfile.write_json_atomic(out / f"{stem}.json",
                                report.to_dict(include_draws=False))
    csv_rows = []
    for traj in report.trajectories:
        for point in traj.points:
            est = point.estimate
            csv_rows.append([traj.receiver_id, _fmt(point.t), _fmt(est.mean),
                             _fmt(est.q2_5), _fmt(est.q97_5), est.M, est.mode,
                             est.seed])
    _atomic_write_text(
        out / f"{stem}_trajectories.csv",
        _csv_text(["receiver_id", "t", "ehcp_mean", "q2.5", "q97.5",
                   "M", "mode", "seed"], csv_rows))
    plots.save_figure(plots.play_figure(report, play),
                      out / f"{stem}_trajectories.png")
    plots.save_figure(plots.field_figure(play), out / f"{stem}_field.png")
    if report.actual_fitted:
        fit = report.actual_fitted
        print(f"targeted receiver {fit['receiver_id']}: fitted completion "
              f"probability {100 * fit['mean']:.1f}% "
              f"[{100 * fit['q2.5']:.1f}%, {100 * fit['q97.5']:.1f}%] "
              f"({'caught' if fit['caught'] else 'incomplete'})")
    for traj in report.trajectories:
        for notice in traj.notices:
            print(f"note ({traj.receiver_id}): {notice}", file=sys.stderr)
    print(f"wrote {stem}.json, {stem}_trajectories.csv, "
          f"{stem}_trajectories.png, {stem}_field.png under {out}")
    return 0


def cmd_pdp(args: argparse.Namespace) -> int:
    model, plays, rows, schema = _load_model_and_bundle(args.model, args.data)
    cov = schema.covariate(args.variable)
    if args.game and args.play:
        match = [pf for pf in rows
                 if pf.game_id == args.game and pf.play_id == args.play]
        if not match:
            raise SystemExit(
                f"{PROG}: play {args.game}/{args.play} has no feature row")
        base = dict(match[0].covariates)
    else:
        base = engine.dataset_base_row(rows, schema)
    if cov.kind == "categorical":
        grid: list = list(cov.levels)
    else:
        observed = np.array([float(pf.covariates[args.variable]) for pf in rows])
        grid = list(np.linspace(observed.min(), observed.max(), args.points))
    points = engine.partial_dependence_raw(model, base, args.variable, grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"pdp_{args.variable}"
    _atomic_write_text(
        out / f"{stem}.csv",
        _csv_text(["value", "mean", "q2.5", "q97.5"],
                  [[_fmt(p["value"]) if not isinstance(p["value"], str)
                    else p["value"],
                    _fmt(p["mean"]), _fmt(p["q2.5"]), _fmt(p["q97.5"])]
                   for p in points]))
    plots.save_figure(plots.pdp_figure(points, args.variable),
                      out / f"{stem}.png")
    print(f"wrote {stem}.csv and {stem}.png under {out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    model, plays, rows, schema = _load_model_and_bundle(args.model, args.data)
    pool = imputation.build_donor_pool(rows, schema)
    fitted_by_key = {}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.kind == "qb":
        records = []
        for play in plays:
            passer = tracking.identify_passer(play)
            if passer is None or play.targeted_receiver is None:
                continue
            ehcp = engine.throw_time_ehcp_by_receiver(
                model, play, pool, M=args.imputations, mode=args.mode,
                seed=args.seed)
            records.append(evaluation.PassRanking(
                game_id=play.meta.game_id, play_id=play.meta.play_id,
                passer_id=passer, target_id=play.targeted_receiver,
                ehcp_by_receiver=ehcp))
        table_rows = evaluation.qb_target_analysis(records, args.min_passes)
        columns = [("passer_id", "passer"), ("passes", "passes"),
                   ("pct_highest", "% to most open"),
                   ("pct_lowest", "% to least open")]
        header = ["passer_id", "passes", "pct_highest", "pct_lowest"]
        csv_rows = [[r["passer_id"], r["passes"], _fmt(r["pct_highest"]),
                     _fmt(r["pct_lowest"])] for r in table_rows]
        chart = [(str(r["passer_id"]), r["pct_highest"] / 100.0)
                 for r in table_rows]
        name = "qb_report"
    else:
        records = []
        for play in plays:
            rid = play.targeted_receiver
            if rid is None:
                continue
            pf = [row for row in rows if (row.game_id, row.play_id)
                  == play.key]
            if not pf:
                continue
            t = play.seconds_from_snap(play.timeline.throw_frame)
            try:
                hypo = engine.build_hypothetical(
                    play, rid, t, mode=args.mode, M=args.imputations)
            except ValueError:
                continue
            est = engine.ehcp_estimate(model, hypo, pool, seed=args.seed)
            fitted = model.predict_draws_raw([pf[0].covariates])[:, 0].mean()
            records.append(evaluation.TargetedPassRecord(
                game_id=play.meta.game_id, play_id=play.meta.play_id,
                receiver_id=rid, ehcp_mean=est.mean,
                fitted_mean=float(fitted)))
        table_rows = evaluation.receiver_differential(records, args.min_targets)
        columns = [("receiver_id", "receiver"), ("targets", "targets"),
                   ("mean_ehcp", "EHCP %"), ("mean_fitted", "fitted %"),
                   ("difference", "fitted - EHCP")]
        header = ["receiver_id", "targets", "mean_ehcp", "mean_fitted",
                  "difference"]
        csv_rows = [[r["receiver_id"], r["targets"], _fmt(r["mean_ehcp"]),
                     _fmt(r["mean_fitted"]), _fmt(r["difference"])]
                    for r in table_rows]
        chart = [(str(r["receiver_id"]), r["difference"] / 100.0)
                 for r in table_rows]
        name = "receiver_report"
    print(evaluation.format_report_table(table_rows, columns))
    _atomic_write_text(out / f"{name}.csv", _csv_text(header, csv_rows))
    if chart:
        plots.save_figure(plots.importance_figure(chart, top=30),
                          out / f"{name}.png")
    print(f"wrote {name}.csv" + (f" and {name}.png" if chart else "")
          + f" under {out} (seed {args.seed}, M={args.imputations}, "
          f"mode {args.mode})")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    model, plays, rows, schema = _load_model_and_bundle(args.model, args.data)
    app = create_app(model, plays, rows, schema)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Expected hypothetical completion probability pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic tracking dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--games", type=int, default=2)
    p.add_argument("--plays", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="parse tracking + play files into a bundle")
    p.add_argument("--tracking", required=True)
    p.add_argument("--plays", required=True)
    p.add_argument("--mapping", default=None,
                   help="key=value column mapping file (defaults built in)")
    p.add_argument("--out", required=True, help="bundle path (.json or .json.gz)")
    p.add_argument("--reports", default=None,
                   help="directory for rejection/exclusion reports")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="fit a completion-probability model")
    p.add_argument("--data", required=True)
    p.add_argument("--model", choices=("logistic", "bart"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--trees", type=int, default=200)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--burnin", type=int, default=1000)
    p.add_argument("--max-depth", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("validate", help="repeated train/test split metrics")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chains", type=int, default=2)
    p.add_argument("--trees", type=int, default=50)
    p.add_argument("--draws", type=int, default=200)
    p.add_argument("--burnin", type=int, default=200)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("play", help="EHCP trajectories for one play")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--game", required=True)
    p.add_argument("--play", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--grid-step", type=float, default=engine.DEFAULT_GRID_STEP)
    p.add_argument("--imputations", type=int, default=engine.DEFAULT_M)
    p.add_argument("--mode", choices=imputation.MODES,
                   default=imputation.JOINT_DONOR)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("pdp", help="partial dependence for one covariate")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--variable", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--game", default=None)
    p.add_argument("--play", default=None)
    p.add_argument("--points", type=int, default=25)
    p.set_defaults(func=cmd_pdp)

    p = sub.add_parser("report", help="QB or receiver EHCP summary tables")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--kind", choices=("qb", "receiver"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-passes", type=int, default=100)
    p.add_argument("--min-targets", type=int, default=40)
    p.add_argument("--imputations", type=int, default=engine.DEFAULT_M)
    p.add_argument("--mode", choices=imputation.MODES,
                   default=imputation.JOINT_DONOR)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="read-only HTTP query service")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (modelfile.ModelFileError, tracking.SchemaError,
            tracking.DataIntegrityError, ValueError, KeyError,
            FileNotFoundError) as err:
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
