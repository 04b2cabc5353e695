"""Matplotlib figures for reports: trajectories, field views, PDP, validation.

Everything renders through the Agg backend and saves with fixed metadata so
repeated runs produce byte-identical PNG files.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

from .engine import PlayReport, Trajectory  # noqa: E402
from .tracking import BALL_ID, FIELD_LENGTH, FIELD_WIDTH, PlaySequence  # noqa: E402

FIGSIZE = (8.0, 5.0)
DPI = 100

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf")


def save_figure(fig: plt.Figure, path: str | Path) -> None:
    """Atomic, metadata-stripped PNG save (reruns are byte-identical)."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=f".{path.name}.", suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=DPI, metadata={"Software": None})
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def trajectory_figure(trajectories: Sequence[Trajectory],
                      title: str = "EHCP along each route",
                      throw_time: float | None = None,
                      arrival_time: float | None = None) -> plt.Figure:
    """Posterior mean curve with a 95% band per receiver."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, traj in enumerate(trajectories):
        if not traj.points:
            continue
        color = _COLORS[i % len(_COLORS)]
        ts = [p.t for p in traj.points]
        means = [p.estimate.mean for p in traj.points]
        lo = [p.estimate.q2_5 for p in traj.points]
        hi = [p.estimate.q97_5 for p in traj.points]
        ax.plot(ts, means, color=color, marker="o", markersize=3,
                label=f"receiver {traj.receiver_id}")
        ax.fill_between(ts, lo, hi, color=color, alpha=0.15, linewidth=0)
    if throw_time is not None:
        ax.axvline(throw_time, color="black", linestyle="--", linewidth=1,
                   label="actual throw")
    if arrival_time is not None:
        ax.axvline(arrival_time, color="gray", linestyle=":", linewidth=1,
                   label="ball arrival")
    ax.set_xlabel("hypothetical throw time (s after snap)")
    ax.set_ylabel("EHCP")
    ax.set_ylim(0.0, 1.0)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def field_figure(play: PlaySequence, title: str | None = None) -> plt.Figure:
    """Player tracks and the ball path in field coordinates."""
    fig, ax = plt.subplots(figsize=(9.0, 9.0 * FIELD_WIDTH / FIELD_LENGTH))
    ax.set_xlim(0, FIELD_LENGTH)
    ax.set_ylim(0, FIELD_WIDTH)
    ax.set_aspect("equal")
    for x in range(10, int(FIELD_LENGTH), 10):
        ax.axvline(x, color="#dddddd", linewidth=0.6, zorder=0)
    tl = play.timeline
    offense_color, defense_color = "#1f77b4", "#d62728"
    for entity in sorted(play.tracks):
        frames = [fr for fr in play.tracks[entity]
                  if tl.snap_frame <= fr.frame_index <= tl.arrival_frame]
        if not frames:
            continue
        xs = [fr.x for fr in frames]
        ys = [fr.y for fr in frames]
        if entity == BALL_ID:
            ax.plot(xs, ys, color="#7f4f24", linewidth=1.2, linestyle="--",
                    label="ball")
            continue
        side = frames[0].team_side
        color = offense_color if side == play.offense_side else defense_color
        width = 2.0 if entity == play.targeted_receiver else 0.9
        ax.plot(xs, ys, color=color, linewidth=width)
        ax.annotate(entity, (xs[-1], ys[-1]), fontsize=6, color=color)
    ax.set_title(title or f"play {play.meta.game_id}/{play.meta.play_id}")
    ax.set_xlabel("yards (long axis)")
    ax.set_ylabel("yards")
    fig.tight_layout()
    return fig


def play_figure(report: PlayReport, play: PlaySequence) -> plt.Figure:
    fig = trajectory_figure(
        report.trajectories,
        title=(f"play {report.game_id}/{report.play_id}: EHCP trajectories "
               f"(M={report.M}, {report.mode})"),
        throw_time=report.throw_time,
        arrival_time=report.arrival_time,
    )
    return fig


def pdp_figure(points: Sequence[Mapping], variable: str) -> plt.Figure:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    categorical = points and isinstance(points[0]["value"], str)
    xs = list(range(len(points))) if categorical else [p["value"] for p in points]
    means = [p["mean"] for p in points]
    lo = [p["q2.5"] for p in points]
    hi = [p["q97.5"] for p in points]
    ax.plot(xs, means, color="#1f77b4", marker="o", markersize=3)
    ax.fill_between(xs, lo, hi, color="#1f77b4", alpha=0.2, linewidth=0)
    if categorical:
        ax.set_xticks(xs)
        ax.set_xticklabels([str(p["value"]) for p in points])
    ax.set_xlabel(variable)
    ax.set_ylabel("completion probability")
    ax.set_title(f"partial dependence on {variable}")
    ax.set_ylim(0.0, 1.0)
    fig.tight_layout()
    return fig


def importance_figure(pairs: Sequence[tuple[str, float]],
                      top: int = 20) -> plt.Figure:
    shown = list(pairs[:top])[::-1]
    fig, ax = plt.subplots(figsize=(8.0, max(3.0, 0.3 * len(shown) + 1.0)))
    ax.barh([name for name, _ in shown],
            [100.0 * value for _, value in shown], color="#1f77b4")
    ax.set_xlabel("posterior mean splitting probability (%)")
    ax.set_title("variable importance")
    fig.tight_layout()
    return fig


def validation_figure(aggregate: Mapping[str, Mapping[str, tuple[float, float]]]
                      ) -> plt.Figure:
    metrics = ("mse", "logloss", "misclass")
    models = sorted(aggregate)
    fig, axes = plt.subplots(1, len(metrics), figsize=(10.0, 3.5))
    for ax, metric in zip(axes, metrics):
        means = [aggregate[m][metric][0] for m in models]
        sds = [aggregate[m][metric][1] for m in models]
        ax.bar(models, means, yerr=sds, capsize=4,
               color=_COLORS[:len(models)])
        ax.set_title(metric)
        ax.tick_params(axis="x", labelrotation=20)
    fig.suptitle("validation: mean over splits (error bars: sd)")
    fig.tight_layout()
    return fig


def ehcp_histogram_figure(draws: Sequence[float], title: str) -> plt.Figure:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.hist(list(draws), bins=30, color="#1f77b4", edgecolor="white")
    ax.set_xlabel("EHCP")
    ax.set_ylabel("posterior draws")
    ax.set_title(title)
    fig.tight_layout()
    return fig
