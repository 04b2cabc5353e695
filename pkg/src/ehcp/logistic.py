"""Bayesian logistic regression by exact Gibbs sampling.

Coefficients (intercept included) get independent standard-normal priors,
which is why callers must pass covariates standardized to sd 0.5 (binary
columns centered). Each sweep draws latent PG(1, f_i) weights and then the
full coefficient vector from its Gaussian conditional, so the chain's
stationary distribution is the exact posterior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .features import check_standardized
from .polya_gamma import draw_pg1_vector

DEFAULT_CHAINS = 4
DEFAULT_WARMUP = 1000
DEFAULT_DRAWS = 1000
RHAT_WARN = 1.05


def sigmoid(f: np.ndarray | float) -> np.ndarray | float:
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    pos = f >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-f[pos]))
    ef = np.exp(f[~pos])
    out[~pos] = ef / (1.0 + ef)
    return out


@dataclass
class ChainDiagnostics:
    """Split-chain R-hat and effective sample size per parameter."""

    rhat: np.ndarray
    ess: np.ndarray
    warnings: list[str]


def split_rhat(draws: np.ndarray) -> np.ndarray:
    """Potential scale reduction on half-chains.

    ``draws`` has shape (chains, iterations, params); each chain is split in
    two so within-chain drift also inflates the statistic.
    """
    c, n, p = draws.shape
    half = n // 2
    halves = np.concatenate([draws[:, :half, :], draws[:, half:2 * half, :]], axis=0)
    m, n2, _ = halves.shape
    chain_means = halves.mean(axis=1)
    chain_vars = halves.var(axis=1, ddof=1)
    w = chain_vars.mean(axis=0)
    b = n2 * chain_means.var(axis=0, ddof=1)
    var_plus = (n2 - 1) / n2 * w + b / n2
    with np.errstate(divide="ignore", invalid="ignore"):
        rhat = np.sqrt(var_plus / w)
    return np.where(w > 0, rhat, 1.0)


def effective_sample_size(draws: np.ndarray) -> np.ndarray:
    """Autocorrelation-based ESS with Geyer's initial-positive truncation."""
    c, n, p = draws.shape
    ess = np.empty(p)
    for j in range(p):
        chains = draws[:, :, j]
        centered = chains - chains.mean(axis=1, keepdims=True)
        var = centered.var(axis=1).mean()
        if var == 0:
            ess[j] = c * n
            continue
        # FFT autocovariance averaged over chains
        size = 2 * n
        fft = np.fft.rfft(centered, n=size, axis=1)
        acov = np.fft.irfft(fft * np.conj(fft), n=size, axis=1)[:, :n].real
        acov /= n
        rho = acov.mean(axis=0) / var
        total = 1.0
        k = 1
        while k + 1 < n:
            pair = rho[k] + rho[k + 1]
            if pair < 0:
                break
            total += 2.0 * pair
            k += 2
        ess[j] = c * n / max(total, 1.0 / (c * n))
    return ess


@dataclass
class LogisticPosterior:
    """Posterior draws for the linear completion-probability model."""

    coef_draws: np.ndarray  # (S, p + 1); column 0 is the intercept
    column_names: tuple[str, ...]
    diagnostics: ChainDiagnostics
    seed: int

    @property
    def n_draws(self) -> int:
        return self.coef_draws.shape[0]

    def linear_predictor(self, X: np.ndarray) -> np.ndarray:
        """f values, shape (S, n)."""
        return self.coef_draws[:, :1] + self.coef_draws[:, 1:] @ X.T

    def predict_draws(self, X: np.ndarray) -> np.ndarray:
        """Completion probability per draw, shape (S, n)."""
        return sigmoid(self.linear_predictor(X))

    def predict_mean(self, X: np.ndarray) -> np.ndarray:
        return self.predict_draws(X).mean(axis=0)

    def coefficient_summary(self) -> list[dict[str, float | str]]:
        names = ("intercept",) + self.column_names
        out = []
        for j, name in enumerate(names):
            col = self.coef_draws[:, j]
            out.append({
                "name": name,
                "mean": float(col.mean()),
                "sd": float(col.std(ddof=1)),
                "q2.5": float(np.quantile(col, 0.025)),
                "q97.5": float(np.quantile(col, 0.975)),
                "rhat": float(self.diagnostics.rhat[j]),
                "ess": float(self.diagnostics.ess[j]),
            })
        return out

    def to_dict(self) -> dict:
        return {
            "coef_draws": [[float(v) for v in row] for row in self.coef_draws],
            "column_names": list(self.column_names),
            "rhat": [float(v) for v in self.diagnostics.rhat],
            "ess": [float(v) for v in self.diagnostics.ess],
            "warnings": list(self.diagnostics.warnings),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LogisticPosterior":
        return cls(
            coef_draws=np.asarray(data["coef_draws"], dtype=float),
            column_names=tuple(data["column_names"]),
            diagnostics=ChainDiagnostics(
                rhat=np.asarray(data["rhat"], dtype=float),
                ess=np.asarray(data["ess"], dtype=float),
                warnings=list(data["warnings"]),
            ),
            seed=int(data["seed"]),
        )


def fit_logistic(X: np.ndarray, y: np.ndarray,
                 column_names: Sequence[str] | None = None,
                 column_kinds: Sequence[str] | None = None,
                 chains: int = DEFAULT_CHAINS,
                 warmup: int = DEFAULT_WARMUP,
                 draws: int = DEFAULT_DRAWS,
                 seed: int = 0) -> LogisticPosterior:
    """Fit the linear model on a standardized design matrix.

    Raises if a continuous column is not on the sd-0.5 scale. Chains run
    sequentially from distinct substreams of ``seed``; kept draws are the
    post-warmup sweeps of every chain, concatenated.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("y must be 0/1")
    check_standardized(X, column_kinds)
    n, p = X.shape
    design = np.column_stack([np.ones(n), X])
    kappa = y - 0.5
    xt_kappa = design.T @ kappa
    prior_precision = np.eye(p + 1)

    seeds = np.random.SeedSequence(seed).spawn(chains)
    kept = np.empty((chains, draws, p + 1))
    for c in range(chains):
        rng = np.random.default_rng(seeds[c])
        theta = np.zeros(p + 1)
        for sweep in range(warmup + draws):
            f = design @ theta
            omega = draw_pg1_vector(rng, f)
            precision = design.T @ (design * omega[:, None]) + prior_precision
            chol = np.linalg.cholesky(precision)
            mean = np.linalg.solve(precision, xt_kappa)
            noise = np.linalg.solve(chol.T, rng.standard_normal(p + 1))
            theta = mean + noise
            if sweep >= warmup:
                kept[c, sweep - warmup] = theta

    rhat = split_rhat(kept)
    ess = effective_sample_size(kept)
    warnings = [
        f"rhat {rhat[j]:.3f} above {RHAT_WARN} for parameter {j}"
        for j in range(p + 1) if rhat[j] > RHAT_WARN
    ]
    names = tuple(column_names) if column_names else tuple(
        f"x{j}" for j in range(1, p + 1))
    return LogisticPosterior(
        coef_draws=kept.reshape(chains * draws, p + 1),
        column_names=names,
        diagnostics=ChainDiagnostics(rhat=rhat, ess=ess, warnings=warnings),
        seed=seed,
    )
