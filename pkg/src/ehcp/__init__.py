"""Expected hypothetical completion probability from player-tracking data.

Pipeline: ingest tracking/play files, extract pass-level covariates, fit a
Bayesian completion-probability model (linear or sum-of-trees), impute the
covariates a hypothetical pass cannot reveal, and average model predictions
over those imputations to score throws that were never attempted.
"""

from .bart import BartConfig, BartPosterior, fit_bart, partial_dependence, splitting_importance
from .engine import (
    EhcpEstimate,
    HypotheticalPass,
    Model,
    build_hypothetical,
    ehcp_estimate,
    play_report,
    route_trajectory,
)
from .features import CovariateSchema, DEFAULT_SCHEMA, build_feature_matrix, extract_dataset
from .imputation import DonorPool, build_donor_pool, partition_schema, sample_missing
from .logistic import LogisticPosterior, fit_logistic
from .modelfile import load_bundle, load_model, save_bundle, save_model
from .tracking import PlaySequence, assemble_plays, parse_plays_csv, parse_tracking_csv

__version__ = "0.1.0"

__all__ = [
    "BartConfig", "BartPosterior", "fit_bart", "partial_dependence",
    "splitting_importance", "EhcpEstimate", "HypotheticalPass", "Model",
    "build_hypothetical", "ehcp_estimate", "play_report", "route_trajectory",
    "CovariateSchema", "DEFAULT_SCHEMA", "build_feature_matrix",
    "extract_dataset", "DonorPool", "build_donor_pool", "partition_schema",
    "sample_missing", "LogisticPosterior", "fit_logistic", "load_bundle",
    "load_model", "save_bundle", "save_model", "PlaySequence",
    "assemble_plays", "parse_plays_csv", "parse_tracking_csv",
    "__version__",
]
