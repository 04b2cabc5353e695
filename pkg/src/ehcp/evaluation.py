"""Model validation over repeated splits and EHCP-based player summaries.

Validation mirrors a table of mean (sd) predictive metrics over ten 75/25
train/test splits. Player summaries aggregate throw-time EHCP rankings per
quarterback and fitted-minus-EHCP differentials per receiver, with minimum
attempt thresholds so the rates are stable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .features import fit_standardization

PROB_FLOOR = 1e-12


def split_dataset(n: int, n_splits: int = 10, train_frac: float = 0.75,
                  seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Independent shuffled train/test index partitions."""
    if n < 2:
        raise ValueError("need at least two rows to split")
    rng = np.random.default_rng(seed)
    n_train = int(train_frac * n)
    if n_train == 0 or n_train == n:
        raise ValueError("train fraction leaves an empty side")
    splits = []
    for _ in range(n_splits):
        order = rng.permutation(n)
        splits.append((np.sort(order[:n_train]), np.sort(order[n_train:])))
    return splits


def compute_metrics(y: np.ndarray, p_hat: np.ndarray) -> dict[str, float]:
    """Mean squared error, log-loss, and misclassification rate.

    Probabilities exactly at 0 or 1 are clamped into [1e-12, 1 - 1e-12] with
    a warning so the log-loss stays finite. The classification threshold is
    p >= 0.5 predicts a catch.
    """
    y = np.asarray(y, dtype=float).ravel()
    p = np.asarray(p_hat, dtype=float).ravel()
    if y.shape != p.shape:
        raise ValueError("y and p_hat lengths differ")
    if np.any((p <= 0.0) | (p >= 1.0)):
        warnings.warn("probabilities at the boundary clamped to "
                      f"[{PROB_FLOOR}, 1 - {PROB_FLOOR}] for log-loss",
                      stacklevel=2)
        p = np.clip(p, PROB_FLOOR, 1.0 - PROB_FLOOR)
    mse = float(np.mean((y - p) ** 2))
    logloss = float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log1p(-p))))
    predicted = (p >= 0.5).astype(float)
    misclass = float(np.mean(predicted != y))
    return {"mse": mse, "logloss": logloss, "misclass": misclass}


Fitter = Callable[..., object]  # (X, y, column_names, column_kinds, seed) -> posterior


@dataclass
class ValidationResult:
    per_split: dict[str, list[dict[str, float]]]
    failures: list[str]
    n_splits: int
    seed: int

    def aggregate(self) -> dict[str, dict[str, tuple[float, float]]]:
        """Per model per metric: (mean, sd) across successful splits."""
        out: dict[str, dict[str, tuple[float, float]]] = {}
        for model, rows in self.per_split.items():
            agg = {}
            for metric in ("mse", "logloss", "misclass"):
                values = np.array([row[metric] for row in rows])
                if values.shape[0] == 0:
                    agg[metric] = (math.nan, 0.0)
                    continue
                sd = float(values.std(ddof=1)) if values.shape[0] > 1 else 0.0
                agg[metric] = (float(values.mean()), sd)
            out[model] = agg
        return out

    def table(self) -> str:
        """Aligned mean (sd) table, one row per model."""
        agg = self.aggregate()
        header = f"{'model':<12}{'mse':>16}{'logloss':>16}{'misclass':>16}"
        lines = [header, "-" * len(header)]
        for model in sorted(agg):
            cells = [f"{agg[model][m][0]:.3f} ({agg[model][m][1]:.3f})"
                     for m in ("mse", "logloss", "misclass")]
            lines.append(f"{model:<12}{cells[0]:>16}{cells[1]:>16}{cells[2]:>16}")
        for failure in self.failures:
            lines.append(f"! {failure}")
        return "\n".join(lines)


def validation_experiment(raw_X: np.ndarray, y: np.ndarray,
                          column_names: Sequence[str],
                          column_kinds: Sequence[str],
                          fitters: Mapping[str, Fitter],
                          n_splits: int = 10, train_frac: float = 0.75,
                          seed: int = 0) -> ValidationResult:
    """Fit every model on each split's training rows and score the test rows.

    Standardization is refit on each training set (it is part of the model).
    A failed fit marks that split for that model and is excluded from the
    aggregate rather than aborting the experiment.
    """
    raw_X = np.asarray(raw_X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    splits = split_dataset(raw_X.shape[0], n_splits, train_frac, seed)
    seeds = np.random.SeedSequence(seed).spawn(n_splits)
    per_split: dict[str, list[dict[str, float]]] = {name: [] for name in fitters}
    failures: list[str] = []
    for s, (train, test) in enumerate(splits):
        params = fit_standardization(raw_X[train], column_names, column_kinds)
        X_train = params.transform(raw_X[train], column_names)
        X_test = params.transform(raw_X[test], column_names)
        kind_by_name = dict(zip(column_names, column_kinds))
        kept_kinds = [kind_by_name[n] for n in params.column_names]
        split_seed = int(seeds[s].generate_state(1)[0] % (2 ** 31))
        for name, fitter in fitters.items():
            try:
                post = fitter(X_train, y[train],
                              column_names=params.column_names,
                              column_kinds=kept_kinds, seed=split_seed)
                p_hat = post.predict_mean(X_test)
                per_split[name].append(compute_metrics(y[test], p_hat))
            except Exception as err:  # noqa: BLE001 - recorded, not swallowed
                failures.append(f"split {s} model {name} failed: {err}")
    return ValidationResult(per_split=per_split, failures=failures,
                            n_splits=n_splits, seed=seed)


@dataclass(frozen=True)
class PassRanking:
    """EHCP context of one thrown pass: who was targeted, who was open."""

    game_id: str
    play_id: str
    passer_id: str
    target_id: str
    ehcp_by_receiver: dict[str, float]


@dataclass(frozen=True)
class TargetedPassRecord:
    """Posterior means for one targeted pass (EHCP vs fitted)."""

    game_id: str
    play_id: str
    receiver_id: str
    ehcp_mean: float
    fitted_mean: float


def qb_target_analysis(records: Sequence[PassRanking], min_passes: int = 100
                       ) -> list[dict[str, float | str | int]]:
    """Share of passes thrown to the highest- and lowest-EHCP receiver.

    Single-receiver plays are excluded. Ties in the posterior mean count the
    target as argmax (or argmin) if it belongs to the tied set. Only passers
    with at least ``min_passes`` qualifying passes are reported.
    """
    counts: dict[str, list[int]] = {}
    for rec in records:
        if len(rec.ehcp_by_receiver) < 2:
            continue
        if rec.target_id not in rec.ehcp_by_receiver:
            continue
        values = rec.ehcp_by_receiver
        top = max(values.values())
        bottom = min(values.values())
        row = counts.setdefault(rec.passer_id, [0, 0, 0])
        row[0] += 1
        if values[rec.target_id] == top:
            row[1] += 1
        if values[rec.target_id] == bottom:
            row[2] += 1
    out = []
    for passer, (n, hi, lo) in counts.items():
        if n < min_passes:
            continue
        out.append({
            "passer_id": passer,
            "passes": n,
            "pct_highest": 100.0 * hi / n,
            "pct_lowest": 100.0 * lo / n,
        })
    out.sort(key=lambda r: (-r["pct_highest"], r["passer_id"]))
    return out


def receiver_differential(records: Sequence[TargetedPassRecord],
                          min_targets: int = 40
                          ) -> list[dict[str, float | str | int]]:
    """Mean EHCP, mean fitted probability, and their difference per receiver.

    Difference is fitted minus EHCP: positive means the receiver caught more
    than route openness alone projected. Sorted by difference, descending.
    """
    grouped: dict[str, list[TargetedPassRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.receiver_id, []).append(rec)
    out = []
    for rid, recs in grouped.items():
        if len(recs) < min_targets:
            continue
        ehcp = float(np.mean([r.ehcp_mean for r in recs]))
        fitted = float(np.mean([r.fitted_mean for r in recs]))
        out.append({
            "receiver_id": rid,
            "targets": len(recs),
            "mean_ehcp": 100.0 * ehcp,
            "mean_fitted": 100.0 * fitted,
            "difference": 100.0 * (fitted - ehcp),
        })
    out.sort(key=lambda r: (-r["difference"], r["receiver_id"]))
    return out


def format_report_table(rows: Sequence[Mapping[str, float | str | int]],
                        columns: Sequence[tuple[str, str]]) -> str:
    """Aligned text table; ``columns`` maps key -> header."""
    if not rows:
        return "(no rows met the threshold)"
    widths = {}
    rendered: list[list[str]] = []
    for row in rows:
        cells = []
        for key, _ in columns:
            value = row[key]
            cells.append(f"{value:.1f}" if isinstance(value, float) else str(value))
        rendered.append(cells)
    for j, (_, header) in enumerate(columns):
        widths[j] = max(len(header), *(len(r[j]) for r in rendered))
    lines = ["  ".join(h.ljust(widths[j]) for j, (_, h) in enumerate(columns))]
    lines.append("  ".join("-" * widths[j] for j in range(len(columns))))
    for cells in rendered:
        lines.append("  ".join(c.rjust(widths[j]) for j, c in enumerate(cells)))
    return "\n".join(lines)
