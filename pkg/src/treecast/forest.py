"""Bagging and random forests over regression trees.

Every tree is fit on a bootstrap resample of the training set; random
forests additionally draw a fresh random subset of ``mtry`` candidate
features at each split attempt. All randomness comes from per-tree
SplitMix64 streams derived from the ensemble seed (see ``rng``), so a
fixed (data, params, seed) triple always produces the bit-identical
forest. Trees are independent given their streams; fitting them in any
order or in parallel yields the same ensemble.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyTrainingSet
from .rng import SplitMix64
from .series import TrainingSet
from .tree import RegressionTree, TreeParams, fit_tree

__all__ = [
    "EnsembleParams",
    "Forest",
    "deep_tree_params",
    "fit_forest",
    "predict_forest",
    "tree_stream_seeds",
    "bootstrap_indices",
]


def deep_tree_params() -> TreeParams:
    """Member-tree defaults: grow deep, prune nothing."""
    return TreeParams(min_split=2, min_bucket=1, max_depth=30, cp=0.0)


@dataclass(frozen=True)
class EnsembleParams:
    """Ensemble configuration.

    ``mtry`` is the number of candidate features drawn per split attempt;
    ``None`` means all features (plain bagging).
    """

    n_trees: int = 25
    mtry: int | None = None
    tree_params: TreeParams = field(default_factory=deep_tree_params)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.mtry is not None and self.mtry < 1:
            raise ValueError("mtry must be >= 1 when given")


@dataclass(eq=False)
class Forest:
    trees: tuple[RegressionTree, ...]
    params: EnsembleParams

    @property
    def n_features(self) -> int:
        return self.trees[0].n_features

    def predict(self, x) -> float:
        return predict_forest(self, x)

    def to_dict(self) -> dict:
        return {
            "n_trees": self.params.n_trees,
            "mtry": self.params.mtry,
            "seed": self.params.seed,
            "tree_params": {
                "min_split": self.params.tree_params.min_split,
                "min_bucket": self.params.tree_params.min_bucket,
                "max_depth": self.params.tree_params.max_depth,
                "cp": self.params.tree_params.cp,
            },
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Forest":
        tp = d["tree_params"]
        params = EnsembleParams(
            n_trees=int(d["n_trees"]),
            mtry=None if d["mtry"] is None else int(d["mtry"]),
            tree_params=TreeParams(
                min_split=int(tp["min_split"]),
                min_bucket=int(tp["min_bucket"]),
                max_depth=int(tp["max_depth"]),
                cp=float(tp["cp"]),
            ),
            seed=int(d["seed"]),
        )
        return cls(trees=tuple(RegressionTree.from_dict(t) for t in d["trees"]), params=params)


def tree_stream_seeds(seed: int, n_trees: int) -> list[int]:
    """Per-tree stream seeds: the first ``n_trees`` outputs of the master stream."""
    master = SplitMix64(seed)
    return [master.next_uint64() for _ in range(n_trees)]


def bootstrap_indices(rng: SplitMix64, n: int) -> list[int]:
    """A size-n sample with replacement from range(n); n draws from ``rng``."""
    return rng.integers_below(n, size=n)


def _resample(ts: TrainingSet, idx) -> TrainingSet:
    sel = np.asarray(idx, dtype=int)
    return TrainingSet(
        feature_names=ts.feature_names,
        features=ts.features[sel],
        targets=ts.targets[sel],
        row_feature_means=ts.row_feature_means[sel],
    )


def fit_forest(ts: TrainingSet, params: EnsembleParams, bootstrap: bool = True) -> Forest:
    """Fit an ensemble of trees on bootstrap resamples.

    ``bootstrap=False`` replaces every resample with the identity sample
    (a test hook; the feature-subset draws still consume the stream in the
    same order). Per tree, the stream is consumed as: n bootstrap draws,
    then one subset of ``mtry`` features per split attempt in depth-first
    pre-order.
    """
    if ts.n_examples == 0:
        raise EmptyTrainingSet("cannot fit a forest on zero examples")
    p = ts.n_features
    mtry = p if params.mtry is None else params.mtry
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must lie in 1..{p}, got {mtry}")
    n = ts.n_examples
    trees = []
    for stream_seed in tree_stream_seeds(params.seed, params.n_trees):
        rng = SplitMix64(stream_seed)
        if bootstrap:
            sample = _resample(ts, bootstrap_indices(rng, n))
        else:
            sample = ts
        sampler = None if mtry == p else (lambda rng=rng: rng.subset(p, mtry))
        trees.append(fit_tree(sample, params.tree_params, feature_sampler=sampler))
    return Forest(trees=tuple(trees), params=params)


def predict_forest(forest: Forest, x) -> float:
    """Arithmetic mean of the member predictions.

    Summation uses ``math.fsum`` (correctly rounded), so the result is
    independent of tree order at full precision.
    """
    vec = np.asarray(x, dtype=float).reshape(-1)
    if vec.size != forest.n_features:
        raise DimensionMismatch(f"expected {forest.n_features} features, got {vec.size}")
    return math.fsum(t.predict(vec) for t in forest.trees) / len(forest.trees)
