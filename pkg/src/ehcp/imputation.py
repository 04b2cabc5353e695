"""Donor-pool imputation of covariates that are unobservable at throw time.

A hypothetical pass only reveals the throw-phase and situational covariates;
everything measured at or after ball arrival is missing. Missing blocks are
drawn from the empirical pool of observed passes, either as whole blocks from
a single donor (default, preserves cross-covariate dependence) or group by
group from independent donors. Two timing identities are recomputed against
the hypothetical throw after sampling so each imputed row stays internally
consistent.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .features import (
    DELTA_NAMES,
    GEOMETRY_NAMES,
    CovariateSchema,
    DEFAULT_SCHEMA,
    PassFeatures,
)

# Groups of unobservable covariates; per-group mode draws each from its own
# donor. Order: arrival motion, arrival distances, arrival cumulative
# distance, air time, in-air changes.
MISSING_GROUPS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("arrival_motion", ("receiver_speed_arrival", "receiver_direction_arrival")),
    ("arrival_distances", tuple(
        f"{name}_arrival" for name in GEOMETRY_NAMES
        if name.endswith(("euclid", "horiz", "vert")))),
    ("arrival_cumulative", ("receiver_cumulative_distance_arrival",)),
    ("air_time", ("air_seconds", "snap_to_arrival_seconds")),
    ("in_air_changes", DELTA_NAMES),
)

JOINT_DONOR = "joint-donor"
PER_GROUP = "per-group"
MODES = (JOINT_DONOR, PER_GROUP)


@dataclass(frozen=True)
class MissingPartition:
    observable: tuple[str, ...]
    missing: tuple[str, ...]


def partition_schema(schema: CovariateSchema = DEFAULT_SCHEMA) -> MissingPartition:
    """Split the schema into throw-observable and arrival-missing names."""
    observable = tuple(c.name for c in schema.covariates if c.hypothetically_observable)
    missing = tuple(c.name for c in schema.covariates if not c.hypothetically_observable)
    grouped = [name for _, names in MISSING_GROUPS for name in names]
    if sorted(grouped) != sorted(missing):
        raise ValueError("missing-group definitions drifted from the schema")
    return MissingPartition(observable=observable, missing=missing)


@dataclass
class DonorPool:
    """Empirical collection of observed missing blocks, one per pass."""

    rows: list[dict[str, float]]
    provenance: list[tuple[str, str]]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("donor pool is empty")

    @property
    def size(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])


def build_donor_pool(dataset: Sequence[PassFeatures],
                     schema: CovariateSchema = DEFAULT_SCHEMA) -> DonorPool:
    """One pool row per observed pass, holding its full missing block."""
    if not dataset:
        raise ValueError("cannot build a donor pool from an empty dataset")
    missing = partition_schema(schema).missing
    rows = []
    provenance = []
    for pf in dataset:
        rows.append({name: float(pf.covariates[name]) for name in missing})
        provenance.append((pf.game_id, pf.play_id))
    return DonorPool(rows=rows, provenance=provenance)


def write_pool_csv(path: str | Path, pool: DonorPool) -> None:
    names = list(pool.rows[0].keys())
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["game_id", "play_id"] + names)
        for (game_id, play_id), row in zip(pool.provenance, pool.rows):
            writer.writerow([game_id, play_id] + [repr(row[n]) for n in names])


def _recompute_identities(row: dict[str, float],
                          observables: Mapping[str, float | str],
                          pinned: set[str]) -> None:
    # arrival clock and cumulative distance must agree with the hypothetical
    # throw; explicit pins win over recomputation
    if "snap_to_arrival_seconds" not in pinned:
        row["snap_to_arrival_seconds"] = (
            float(observables["snap_to_throw_seconds"]) + row["air_seconds"])
    if "receiver_cumulative_distance_arrival" not in pinned:
        row["receiver_cumulative_distance_arrival"] = (
            float(observables["receiver_cumulative_distance_throw"])
            + row["delta_cumulative_distance"])


def sample_missing(pool: DonorPool, M: int, mode: str = JOINT_DONOR,
                   pinning: Mapping[str, float] | None = None,
                   seed: int | None = 0,
                   rng: np.random.Generator | None = None,
                   observables: Mapping[str, float | str] | None = None,
                   replace: bool = True) -> list[dict[str, float]]:
    """Draw M missing blocks from the pool.

    Joint-donor mode copies whole rows from uniformly chosen donors;
    per-group mode picks an independent donor per covariate group. Pinned
    covariates overwrite sampled values afterwards. When ``observables`` is
    given, timing identities are recomputed against the hypothetical throw
    (skipped for covariates the caller pinned explicitly). ``replace=False``
    samples donors without replacement; with M equal to the pool size that
    is an exhaustive permutation of the pool.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown imputation mode {mode!r}; pick from {MODES}")
    pinning = dict(pinning or {})
    missing_names = set(pool.rows[0].keys())
    for key in pinning:
        if key not in missing_names:
            raise KeyError(
                f"pinned covariate {key!r} is not in the missing set")
    if not replace and M > pool.size:
        raise ValueError(
            f"cannot draw {M} donors without replacement from a pool of "
            f"{pool.size}")
    if rng is None:
        rng = np.random.default_rng(seed)

    def draw_indices() -> np.ndarray:
        if replace:
            return rng.integers(pool.size, size=M)
        return rng.permutation(pool.size)[:M]

    draws: list[dict[str, float]] = []
    if mode == JOINT_DONOR:
        for i in draw_indices():
            draws.append(dict(pool.rows[int(i)]))
    else:
        group_indices = {name: draw_indices() for name, _ in MISSING_GROUPS}
        for m in range(M):
            row: dict[str, float] = {}
            for group_name, names in MISSING_GROUPS:
                donor = pool.rows[int(group_indices[group_name][m])]
                for name in names:
                    row[name] = donor[name]
            draws.append(row)

    pinned = set(pinning)
    for row in draws:
        row.update(pinning)
        if observables is not None:
            _recompute_identities(row, observables, pinned)
    return draws
