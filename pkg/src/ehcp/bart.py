"""Logistic BART: a sum-of-trees log-odds model fit by backfitting MCMC.

The log-odds f(x) is a sum of m regression trees. Each sweep draws latent
PG(1, f_i) weights (making the working likelihood Gaussian), then resamples
every tree with grow/prune/change Metropolis-Hastings proposals scored by the
integrated leaf likelihood, then redraws leaf values from their Gaussian
conditionals, and finally redraws the per-variable splitting probabilities
from their Dirichlet full conditional given split-variable usage counts. The
Dirichlet prior concentrates mass on few variables, so the posterior mean of
the splitting probabilities doubles as a variable-importance measure.

Trees are kept as packed parallel arrays (variable, cutpoint, child indices,
leaf value) so a whole posterior draw predicts via one vectorized descent and
serializes as plain node lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .features import StandardizationParams, check_standardized
from .polya_gamma import draw_pg1_vector


@dataclass(frozen=True)
class BartConfig:
    num_trees: int = 200
    draws: int = 1000
    burnin: int = 1000
    split_alpha: float = 0.95  # P(node at depth d splits) = alpha * (1+d)^-beta
    split_beta: float = 2.0
    leaf_sd_total: float = 3.0  # prior sd of f(x); per-leaf sd is this / sqrt(m)
    dirichlet_alpha: float = 1.0
    alpha_hyperprior: bool = False  # grid-Gibbs update of dirichlet_alpha
    prob_grow: float = 0.25
    prob_prune: float = 0.25
    prob_change: float = 0.50
    max_depth: int | None = None
    max_cutpoints: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_trees < 1:
            raise ValueError("num_trees must be >= 1")
        if self.draws < 1:
            raise ValueError("draws must be >= 1")
        total = self.prob_grow + self.prob_prune + self.prob_change
        if abs(total - 1.0) > 1e-12:
            raise ValueError("move probabilities must sum to 1")

    def to_dict(self) -> dict:
        return {
            "num_trees": self.num_trees, "draws": self.draws,
            "burnin": self.burnin, "split_alpha": self.split_alpha,
            "split_beta": self.split_beta, "leaf_sd_total": self.leaf_sd_total,
            "dirichlet_alpha": self.dirichlet_alpha,
            "alpha_hyperprior": self.alpha_hyperprior,
            "prob_grow": self.prob_grow, "prob_prune": self.prob_prune,
            "prob_change": self.prob_change, "max_depth": self.max_depth,
            "max_cutpoints": self.max_cutpoints, "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "BartConfig":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


@dataclass(frozen=True)
class PackedTree:
    """One tree as parallel node arrays; node 0 is the root.

    ``var[i] < 0`` marks a leaf; internal nodes route x to ``left[i]`` when
    x[var[i]] < cut[i] and to ``right[i]`` otherwise.
    """

    var: np.ndarray
    cut: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def node_list(self) -> list[list]:
        out = []
        for i in range(self.var.shape[0]):
            if self.var[i] < 0:
                out.append([None, None, None, None, float(self.value[i])])
            else:
                out.append([int(self.var[i]), float(self.cut[i]),
                            int(self.left[i]), int(self.right[i]), None])
        return out

    @classmethod
    def from_node_list(cls, nodes: Sequence[Sequence]) -> "PackedTree":
        n = len(nodes)
        var = np.full(n, -1, dtype=np.int64)
        cut = np.zeros(n)
        left = np.full(n, -1, dtype=np.int64)
        right = np.full(n, -1, dtype=np.int64)
        value = np.zeros(n)
        for i, (v, c, lo, hi, val) in enumerate(nodes):
            if v is None:
                value[i] = float(val)
            else:
                var[i], cut[i], left[i], right[i] = int(v), float(c), int(lo), int(hi)
        return cls(var, cut, left, right, value)


@dataclass
class ForestDraw:
    """All m trees of one posterior draw, concatenated for fast descent."""

    var: np.ndarray
    cut: np.ndarray
    left: np.ndarray  # absolute indices into the concatenated arrays
    right: np.ndarray
    value: np.ndarray
    roots: np.ndarray  # node index of each tree's root
    ends: np.ndarray  # one past each tree's last node
    split_probs: np.ndarray

    @property
    def num_trees(self) -> int:
        return self.roots.shape[0]

    def tree(self, j: int) -> PackedTree:
        lo, hi = int(self.roots[j]), int(self.ends[j])
        return PackedTree(
            var=self.var[lo:hi].copy(), cut=self.cut[lo:hi].copy(),
            left=np.where(self.left[lo:hi] >= 0, self.left[lo:hi] - lo, -1),
            right=np.where(self.right[lo:hi] >= 0, self.right[lo:hi] - lo, -1),
            value=self.value[lo:hi].copy(),
        )

    def log_odds(self, X: np.ndarray) -> np.ndarray:
        """f(x) for every row of X via simultaneous descent of all trees."""
        n = X.shape[0]
        pos = np.broadcast_to(self.roots, (n, self.num_trees)).copy()
        while True:
            v = self.var[pos]
            internal = v >= 0
            if not internal.any():
                break
            xv = np.take_along_axis(X, np.maximum(v, 0), axis=1)
            nxt = np.where(xv < self.cut[pos], self.left[pos], self.right[pos])
            pos = np.where(internal, nxt, pos)
        return self.value[pos].sum(axis=1)


def evaluate_tree(tree: PackedTree, x: np.ndarray) -> float:
    """Scalar tree evaluation by explicit path walk."""
    i = 0
    while tree.var[i] >= 0:
        i = int(tree.left[i] if x[tree.var[i]] < tree.cut[i] else tree.right[i])
    return float(tree.value[i])


def evaluate_ensemble(draw: ForestDraw, x: np.ndarray) -> float:
    """f(x) as the exact sum of per-tree evaluations."""
    return sum(evaluate_tree(draw.tree(j), x) for j in range(draw.num_trees))


def _mh_accept(rng: np.random.Generator, log_ratio: float) -> bool:
    if log_ratio >= 0.0:
        return True
    if log_ratio == -math.inf:
        return False
    return rng.random() < math.exp(log_ratio)


def cutpoint_grid(column: np.ndarray, max_cutpoints: int = 100) -> np.ndarray:
    """Candidate cutpoints: midpoints between consecutive unique values,
    thinned through quantiles so no variable offers more than the cap."""
    uniq = np.unique(column)
    if uniq.shape[0] < 2:
        return np.empty(0)
    if uniq.shape[0] - 1 > max_cutpoints:
        qs = np.quantile(column, np.linspace(0.0, 1.0, max_cutpoints + 1))
        uniq = np.unique(qs)
    return (uniq[:-1] + uniq[1:]) / 2.0


class _Node:
    __slots__ = ("var", "cut", "left", "right", "value", "idx", "depth")

    def __init__(self, idx: np.ndarray, depth: int):
        self.var = -1
        self.cut = 0.0
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.value = 0.0
        self.idx = idx
        self.depth = depth

    @property
    def is_leaf(self) -> bool:
        return self.var < 0


def _leaves(node: _Node, out: list[_Node]) -> list[_Node]:
    if node.is_leaf:
        out.append(node)
    else:
        _leaves(node.left, out)
        _leaves(node.right, out)
    return out


def _nogs(node: _Node, out: list[_Node]) -> list[_Node]:
    # internal nodes whose children are both leaves (prune/change candidates)
    if not node.is_leaf:
        if node.left.is_leaf and node.right.is_leaf:
            out.append(node)
        else:
            _nogs(node.left, out)
            _nogs(node.right, out)
    return out


def _parent_of(node: _Node, target: _Node) -> _Node | None:
    if node.is_leaf:
        return None
    if node.left is target or node.right is target:
        return node
    return _parent_of(node.left, target) or _parent_of(node.right, target)


class _TreeSampler:
    """MCMC state and moves for one tree within the backfitting loop."""

    def __init__(self, n: int, X: np.ndarray, grids: list[np.ndarray],
                 config: BartConfig):
        self.X = X
        self.grids = grids
        self.config = config
        self.root = _Node(np.arange(n), 0)
        self.fitted = np.zeros(n)
        self.tau_precision = config.num_trees / config.leaf_sd_total ** 2

    def _p_split(self, depth: int) -> float:
        cfg = self.config
        if cfg.max_depth is not None and depth >= cfg.max_depth:
            return 0.0
        return cfg.split_alpha * (1.0 + depth) ** (-cfg.split_beta)

    def _leaf_loglik(self, idx: np.ndarray, omega: np.ndarray,
                     omega_r: np.ndarray) -> float:
        # structure-dependent part of the integrated Gaussian leaf likelihood
        s_w = float(omega[idx].sum())
        s_wr = float(omega_r[idx].sum())
        prec = self.tau_precision
        return (0.5 * (math.log(prec) - math.log(prec + s_w))
                + 0.5 * s_wr * s_wr / (prec + s_w))

    def _draw_rule(self, rng: np.random.Generator,
                   split_probs: np.ndarray) -> tuple[int, float] | None:
        v = int(rng.choice(split_probs.shape[0], p=split_probs))
        grid = self.grids[v]
        if grid.shape[0] == 0:
            return None
        return v, float(grid[rng.integers(grid.shape[0])])

    def structure_move(self, rng: np.random.Generator, omega: np.ndarray,
                       omega_r: np.ndarray, split_probs: np.ndarray) -> str:
        cfg = self.config
        u = rng.random()
        if u < cfg.prob_grow:
            return self._grow(rng, omega, omega_r, split_probs)
        if u < cfg.prob_grow + cfg.prob_prune:
            return self._prune(rng, omega, omega_r)
        return self._change(rng, omega, omega_r, split_probs)

    def _grow(self, rng, omega, omega_r, split_probs) -> str:
        leaves = _leaves(self.root, [])
        leaf = leaves[int(rng.integers(len(leaves)))]
        ps = self._p_split(leaf.depth)
        if ps <= 0.0:
            return "grow_reject"
        rule = self._draw_rule(rng, split_probs)
        if rule is None:
            return "grow_reject"
        v, cut = rule
        mask = self.X[leaf.idx, v] < cut
        left_idx = leaf.idx[mask]
        right_idx = leaf.idx[~mask]
        if left_idx.shape[0] == 0 or right_idx.shape[0] == 0:
            return "grow_reject"  # both children need data
        delta = (self._leaf_loglik(left_idx, omega, omega_r)
                 + self._leaf_loglik(right_idx, omega, omega_r)
                 - self._leaf_loglik(leaf.idx, omega, omega_r))
        ps_child = self._p_split(leaf.depth + 1)
        log_prior = (math.log(ps) + 2.0 * math.log1p(-ps_child)
                     - math.log1p(-ps))
        parent = _parent_of(self.root, leaf)
        n_nog_new = len(_nogs(self.root, [])) + 1
        if parent is not None and parent.left.is_leaf and parent.right.is_leaf:
            n_nog_new -= 1
        log_proposal = (math.log(self.config.prob_prune / self.config.prob_grow)
                        + math.log(len(leaves)) - math.log(n_nog_new))
        if _mh_accept(rng, log_prior + log_proposal + delta):
            leaf.var, leaf.cut = v, cut
            leaf.left = _Node(left_idx, leaf.depth + 1)
            leaf.right = _Node(right_idx, leaf.depth + 1)
            return "grow_accept"
        return "grow_reject"

    def _prune(self, rng, omega, omega_r) -> str:
        nogs = _nogs(self.root, [])
        if not nogs:
            return "prune_reject"  # single-leaf tree: move impossible
        node = nogs[int(rng.integers(len(nogs)))]
        delta = (self._leaf_loglik(node.idx, omega, omega_r)
                 - self._leaf_loglik(node.left.idx, omega, omega_r)
                 - self._leaf_loglik(node.right.idx, omega, omega_r))
        ps = self._p_split(node.depth)
        ps_child = self._p_split(node.depth + 1)
        log_prior = -(math.log(ps) + 2.0 * math.log1p(-ps_child)
                      - math.log1p(-ps))
        n_leaves_new = len(_leaves(self.root, [])) - 1
        log_proposal = (math.log(self.config.prob_grow / self.config.prob_prune)
                        + math.log(len(nogs)) - math.log(n_leaves_new))
        if _mh_accept(rng, log_prior + log_proposal + delta):
            node.var, node.left, node.right = -1, None, None
            return "prune_accept"
        return "prune_reject"

    def _change(self, rng, omega, omega_r, split_probs) -> str:
        nogs = _nogs(self.root, [])
        if not nogs:
            return "change_reject"
        node = nogs[int(rng.integers(len(nogs)))]
        rule = self._draw_rule(rng, split_probs)
        if rule is None:
            return "change_reject"
        v, cut = rule
        mask = self.X[node.idx, v] < cut
        left_idx = node.idx[mask]
        right_idx = node.idx[~mask]
        if left_idx.shape[0] == 0 or right_idx.shape[0] == 0:
            return "change_reject"
        delta = (self._leaf_loglik(left_idx, omega, omega_r)
                 + self._leaf_loglik(right_idx, omega, omega_r)
                 - self._leaf_loglik(node.left.idx, omega, omega_r)
                 - self._leaf_loglik(node.right.idx, omega, omega_r))
        if _mh_accept(rng, delta):
            node.var, node.cut = v, cut
            node.left = _Node(left_idx, node.depth + 1)
            node.right = _Node(right_idx, node.depth + 1)
            return "change_accept"
        return "change_reject"

    def resample_leaves(self, rng: np.random.Generator, omega: np.ndarray,
                        omega_r: np.ndarray) -> None:
        for leaf in _leaves(self.root, []):
            s_w = float(omega[leaf.idx].sum())
            s_wr = float(omega_r[leaf.idx].sum())
            precision = self.tau_precision + s_w
            mean = s_wr / precision
            leaf.value = mean + rng.standard_normal() / math.sqrt(precision)
            self.fitted[leaf.idx] = leaf.value

    def usage_counts(self, p: int) -> np.ndarray:
        counts = np.zeros(p)

        def walk(node: _Node) -> None:
            if not node.is_leaf:
                counts[node.var] += 1
                walk(node.left)
                walk(node.right)

        walk(self.root)
        return counts

    def pack(self) -> PackedTree:
        nodes: list[_Node] = []

        def order(node: _Node) -> int:
            i = len(nodes)
            nodes.append(node)
            if not node.is_leaf:
                order(node.left)
                order(node.right)
            return i

        order(self.root)
        index = {id(n): i for i, n in enumerate(nodes)}
        size = len(nodes)
        var = np.full(size, -1, dtype=np.int64)
        cut = np.zeros(size)
        left = np.full(size, -1, dtype=np.int64)
        right = np.full(size, -1, dtype=np.int64)
        value = np.zeros(size)
        for i, n in enumerate(nodes):
            if n.is_leaf:
                value[i] = n.value
            else:
                var[i], cut[i] = n.var, n.cut
                left[i], right[i] = index[id(n.left)], index[id(n.right)]
        return PackedTree(var, cut, left, right, value)


def _pack_forest(samplers: Sequence[_TreeSampler],
                 split_probs: np.ndarray) -> ForestDraw:
    trees = [s.pack() for s in samplers]
    sizes = np.array([t.var.shape[0] for t in trees], dtype=np.int64)
    roots = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    offsets = np.repeat(roots, sizes)
    left = np.concatenate([t.left for t in trees])
    right = np.concatenate([t.right for t in trees])
    return ForestDraw(
        var=np.concatenate([t.var for t in trees]),
        cut=np.concatenate([t.cut for t in trees]),
        left=np.where(left >= 0, left + offsets, -1),
        right=np.where(right >= 0, right + offsets, -1),
        value=np.concatenate([t.value for t in trees]),
        roots=roots,
        ends=roots + sizes,
        split_probs=split_probs.copy(),
    )


def _resample_split_probs(rng: np.random.Generator, counts: np.ndarray,
                          alpha: float) -> np.ndarray:
    probs = rng.dirichlet(alpha / counts.shape[0] + counts)
    probs = np.maximum(probs, 1e-300)  # guard exact zeros from tiny gammas
    return probs / probs.sum()


_ALPHA_GRID = np.linspace(0.05, 0.95, 19)  # over lambda = alpha / (alpha + p)


def _resample_alpha(rng: np.random.Generator, split_probs: np.ndarray,
                    p: int) -> float:
    """Grid Gibbs for the Dirichlet concentration, lambda ~ Beta(0.5, 1)."""
    log_post = np.empty(_ALPHA_GRID.shape[0])
    log_s = np.log(split_probs)
    for i, lam in enumerate(_ALPHA_GRID):
        alpha = lam * p / (1.0 - lam)
        a = alpha / p
        log_post[i] = (math.lgamma(alpha) - p * math.lgamma(a)
                       + (a - 1.0) * log_s.sum()
                       + (0.5 - 1.0) * math.log(lam))
    log_post -= log_post.max()
    weights = np.exp(log_post)
    weights /= weights.sum()
    lam = float(rng.choice(_ALPHA_GRID, p=weights))
    return lam * p / (1.0 - lam)


@dataclass
class BartPosterior:
    """Kept posterior draws plus everything needed to predict from raw rows."""

    draws: list[ForestDraw]
    column_names: tuple[str, ...]
    config: BartConfig
    train_min: np.ndarray
    train_max: np.ndarray
    standardization: StandardizationParams | None = None
    acceptance: dict[str, float] = field(default_factory=dict)

    @property
    def n_draws(self) -> int:
        return len(self.draws)

    def linear_predictor(self, X: np.ndarray) -> np.ndarray:
        """f values on standardized rows, shape (S, n)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(self.draws), X.shape[0]))
        for s, draw in enumerate(self.draws):
            out[s] = draw.log_odds(X)
        return out

    def predict_draws(self, X: np.ndarray) -> np.ndarray:
        """Completion probability per draw, shape (S, n)."""
        return 1.0 / (1.0 + np.exp(-self.linear_predictor(X)))

    def predict_mean(self, X: np.ndarray) -> np.ndarray:
        return self.predict_draws(X).mean(axis=0)

    def split_prob_draws(self) -> np.ndarray:
        return np.stack([d.split_probs for d in self.draws])

    def to_dict(self) -> dict:
        return {
            "column_names": list(self.column_names),
            "config": self.config.to_dict(),
            "train_min": [float(v) for v in self.train_min],
            "train_max": [float(v) for v in self.train_max],
            "acceptance": {k: float(v) for k, v in self.acceptance.items()},
            "draws": [
                {
                    "split_probs": [float(v) for v in d.split_probs],
                    "trees": [d.tree(j).node_list() for j in range(d.num_trees)],
                }
                for d in self.draws
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping,
                  standardization: StandardizationParams | None = None
                  ) -> "BartPosterior":
        draws = []
        for dd in data["draws"]:
            trees = [PackedTree.from_node_list(nodes) for nodes in dd["trees"]]
            draws.append(_pack_forest_from_trees(trees,
                                                 np.asarray(dd["split_probs"])))
        return cls(
            draws=draws,
            column_names=tuple(data["column_names"]),
            config=BartConfig.from_dict(data["config"]),
            train_min=np.asarray(data["train_min"], dtype=float),
            train_max=np.asarray(data["train_max"], dtype=float),
            standardization=standardization,
            acceptance=dict(data.get("acceptance", {})),
        )


def _pack_forest_from_trees(trees: Sequence[PackedTree],
                            split_probs: np.ndarray) -> ForestDraw:
    sizes = np.array([t.var.shape[0] for t in trees], dtype=np.int64)
    roots = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    offsets = np.repeat(roots, sizes)
    left = np.concatenate([t.left for t in trees])
    right = np.concatenate([t.right for t in trees])
    return ForestDraw(
        var=np.concatenate([t.var for t in trees]),
        cut=np.concatenate([t.cut for t in trees]),
        left=np.where(left >= 0, left + offsets, -1),
        right=np.where(right >= 0, right + offsets, -1),
        value=np.concatenate([t.value for t in trees]),
        roots=roots, ends=roots + sizes,
        split_probs=np.asarray(split_probs, dtype=float),
    )


def fit_bart(X: np.ndarray, y: np.ndarray, config: BartConfig = BartConfig(),
             column_names: Sequence[str] | None = None,
             column_kinds: Sequence[str] | None = None,
             standardization: StandardizationParams | None = None
             ) -> BartPosterior:
    """Run the backfitting sampler on a standardized design matrix."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("X must be 2-D with at least one column")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("y must be 0/1")
    if np.all(y == y[0]):
        raise ValueError("y is constant; nothing to model")
    check_standardized(X, column_kinds)
    n, p = X.shape
    rng = np.random.default_rng(config.seed)
    grids = [cutpoint_grid(X[:, j], config.max_cutpoints) for j in range(p)]

    samplers = [_TreeSampler(n, X, grids, config)
                for _ in range(config.num_trees)]
    f_total = np.zeros(n)
    split_probs = np.full(p, 1.0 / p)
    alpha = config.dirichlet_alpha
    kappa = y - 0.5
    move_counts: dict[str, int] = {}
    kept: list[ForestDraw] = []

    for sweep in range(config.burnin + config.draws):
        omega = draw_pg1_vector(rng, f_total)
        z = kappa / omega
        for tree in samplers:
            residual = z - f_total + tree.fitted
            omega_r = omega * residual
            outcome = tree.structure_move(rng, omega, omega_r, split_probs)
            move_counts[outcome] = move_counts.get(outcome, 0) + 1
            old_fit = tree.fitted.copy()
            tree.resample_leaves(rng, omega, omega_r)
            f_total += tree.fitted - old_fit
        counts = np.zeros(p)
        for tree in samplers:
            counts += tree.usage_counts(p)
        split_probs = _resample_split_probs(rng, counts, alpha)
        if config.alpha_hyperprior:
            alpha = _resample_alpha(rng, split_probs, p)
        if sweep >= config.burnin:
            kept.append(_pack_forest(samplers, split_probs))

    acceptance = {}
    for move in ("grow", "prune", "change"):
        a = move_counts.get(f"{move}_accept", 0)
        r = move_counts.get(f"{move}_reject", 0)
        acceptance[move] = a / max(a + r, 1)
    names = tuple(column_names) if column_names else tuple(
        f"x{j}" for j in range(p))
    return BartPosterior(
        draws=kept, column_names=names, config=config,
        train_min=X.min(axis=0), train_max=X.max(axis=0),
        standardization=standardization, acceptance=acceptance,
    )


def predict_bart(post: BartPosterior, x_raw: np.ndarray) -> np.ndarray:
    """Probability draws for one raw (unstandardized) encoded row.

    Applies the stored standardization when the posterior carries one;
    otherwise the row is assumed already standardized.
    """
    row = np.atleast_2d(np.asarray(x_raw, dtype=float))
    if post.standardization is not None:
        names = list(post.standardization.column_names) + list(
            post.standardization.dropped)
        if row.shape[1] == len(post.standardization.column_names):
            row = (row - post.standardization.means) / post.standardization.scales
        elif row.shape[1] == len(names):
            raise ValueError("raw row includes dropped columns; encode through "
                             "the schema transform first")
        else:
            raise ValueError(
                f"expected {len(post.standardization.column_names)} covariate "
                f"values, got {row.shape[1]}")
    return post.predict_draws(row)[:, 0]


def splitting_importance(post: BartPosterior) -> list[tuple[str, float]]:
    """Posterior mean splitting probability per variable, sorted descending."""
    means = post.split_prob_draws().mean(axis=0)
    pairs = [(name, float(means[j])) for j, name in enumerate(post.column_names)]
    pairs.sort(key=lambda item: (-item[1], item[0]))
    return pairs


def partial_dependence(post: BartPosterior, x_base: np.ndarray, variable: int | str,
                       grid: Sequence[float]) -> list[dict[str, float]]:
    """Posterior completion-probability curve as one column varies.

    ``x_base`` is a standardized row; grid values are on the same scale and
    must stay within the column's training range.
    """
    if len(grid) == 0:
        raise ValueError("empty partial-dependence grid")
    if isinstance(variable, str):
        try:
            j = post.column_names.index(variable)
        except ValueError:
            raise KeyError(f"unknown variable {variable!r}") from None
    else:
        j = int(variable)
    lo, hi = post.train_min[j], post.train_max[j]
    for v in grid:
        if not lo - 1e-9 <= v <= hi + 1e-9:
            raise ValueError(
                f"grid value {v} outside the training range [{lo}, {hi}]")
    rows = np.tile(np.asarray(x_base, dtype=float), (len(grid), 1))
    rows[:, j] = grid
    probs = post.predict_draws(rows)
    return [
        {
            "value": float(v),
            "mean": float(probs[:, i].mean()),
            "q2.5": float(np.quantile(probs[:, i], 0.025)),
            "q97.5": float(np.quantile(probs[:, i], 0.975)),
        }
        for i, v in enumerate(grid)
    ]
