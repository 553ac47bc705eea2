"""CART regression trees: greedy SSE-minimizing binary partitions.

Each internal node asks one yes/no question ``feature < threshold``;
thresholds are midpoints between consecutive distinct sorted feature
values. The split kept at a node is the one with the largest reduction in
sum of squared errors, subject to the stopping controls in TreeParams.
Ties are broken toward the lowest feature index, then the smallest
threshold, so fitting is fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyTrainingSet
from .series import TrainingSet

__all__ = [
    "TreeParams",
    "TreeNode",
    "RegressionTree",
    "Rule",
    "RuleCondition",
    "fit_tree",
    "predict_tree",
    "tree_to_rules",
    "apply_rules",
    "rules_to_text",
    "tree_to_text",
]

# A feature sampler supplies the candidate feature indices for one split
# attempt; random forests pass a fresh random subset per attempt.
FeatureSampler = Callable[[], Sequence[int]]


@dataclass(frozen=True)
class TreeParams:
    """Stopping controls for tree growth.

    ``min_split`` is the minimum number of examples in a node for a split
    to be attempted, ``min_bucket`` the minimum per child (defaults to
    ``ceil(min_split / 3)``), and ``cp`` the minimum SSE reduction a split
    must achieve, measured relative to the root node's SSE.
    """

    min_split: int = 20
    min_bucket: int | None = None
    max_depth: int = 30
    cp: float = 0.01

    def __post_init__(self) -> None:
        if self.min_split < 1:
            raise ValueError("min_split must be >= 1")
        bucket = self.min_bucket
        if bucket is None:
            bucket = math.ceil(self.min_split / 3)
            object.__setattr__(self, "min_bucket", bucket)
        if not 1 <= bucket <= self.min_split:
            raise ValueError(f"need 1 <= min_bucket <= min_split, got {bucket}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0.0 <= self.cp <= 1.0:
            raise ValueError("cp must lie in [0, 1]")


@dataclass
class TreeNode:
    """One region of the partition: example count, mean target and SSE.

    Internal nodes also carry the split (feature index, threshold); the
    left child holds examples with ``feature < threshold``.
    """

    n: int
    mean: float
    sse: float
    feature: int | None = None
    threshold: float | None = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def to_dict(self) -> dict:
        d = {"n": self.n, "mean": self.mean, "sse": self.sse}
        if not self.is_leaf:
            d["feature"] = self.feature
            d["threshold"] = self.threshold
            d["left"] = self.left.to_dict()
            d["right"] = self.right.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNode":
        node = cls(n=int(d["n"]), mean=float(d["mean"]), sse=float(d["sse"]))
        if "feature" in d:
            node.feature = int(d["feature"])
            node.threshold = float(d["threshold"])
            node.left = cls.from_dict(d["left"])
            node.right = cls.from_dict(d["right"])
        return node


@dataclass
class RegressionTree:
    """A fitted tree plus the feature names it was trained on."""

    root: TreeNode
    feature_names: tuple[str, ...]

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def predict(self, x) -> float:
        return predict_tree(self, x)

    def to_dict(self) -> dict:
        return {"feature_names": list(self.feature_names), "root": self.root.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionTree":
        return cls(root=TreeNode.from_dict(d["root"]), feature_names=tuple(d["feature_names"]))


def _node_stats(y: np.ndarray) -> tuple[float, float]:
    mean = float(y.mean())
    dev = y - mean
    return mean, float(np.dot(dev, dev))


# Reductions within this relative tolerance of the best one count as tied;
# it absorbs summation rounding so tie-breaking is stable under reordering.
_TIE_RTOL = 1e-10


def _best_split(
    X: np.ndarray,
    y: np.ndarray,
    node_mean: float,
    node_sse: float,
    candidates: Sequence[int],
    min_bucket: int,
) -> tuple[float, int, float] | None:
    """Best (reduction, feature, threshold) over the candidate features.

    Tie-break: among splits whose SSE reduction is within ``_TIE_RTOL *
    node_sse`` of the maximum, the lowest feature index and then the
    smallest threshold wins.
    """
    n = y.size
    yc = y - node_mean  # centering keeps the prefix-sum identity well conditioned
    per_feature: list[tuple[int, np.ndarray, np.ndarray]] = []
    best_gain = -np.inf
    for j in candidates:
        col = X[:, j]
        order = np.argsort(col, kind="stable")
        cs = col[order]
        if cs[0] == cs[-1]:  # constant column: no valid midpoint
            continue
        ys = yc[order]
        prefix_sum = np.cumsum(ys)
        prefix_sq = np.cumsum(ys * ys)
        total_sum = prefix_sum[-1]
        total_sq = prefix_sq[-1]
        left_n = np.arange(1, n)
        valid = (cs[1:] != cs[:-1]) & (left_n >= min_bucket) & ((n - left_n) >= min_bucket)
        if not valid.any():
            continue
        s_left = prefix_sum[:-1]
        q_left = prefix_sq[:-1]
        sse_left = q_left - s_left * s_left / left_n
        sse_right = (total_sq - q_left) - (total_sum - s_left) ** 2 / (n - left_n)
        reduction = np.where(valid, node_sse - sse_left - sse_right, -np.inf)
        feature_best = float(reduction.max())
        if feature_best > best_gain:
            best_gain = feature_best
        per_feature.append((j, cs, reduction))
    if not per_feature:
        return None
    window = best_gain - _TIE_RTOL * node_sse
    for j, cs, reduction in per_feature:
        for k in np.flatnonzero(reduction >= window):
            threshold = (cs[k] + cs[k + 1]) / 2.0
            # guard against the midpoint rounding onto the left value
            if cs[k] < threshold <= cs[k + 1]:
                return (float(reduction[k]), j, float(threshold))
    return None


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    depth: int,
    params: TreeParams,
    root_sse: float,
    sampler: FeatureSampler | None,
) -> TreeNode:
    mean, sse = _node_stats(y)
    node = TreeNode(n=int(y.size), mean=mean, sse=sse)
    if y.size < params.min_split or depth >= params.max_depth:
        return node
    if y.max() == y.min():  # pure node: no SSE improvement possible
        return node
    if sampler is None:
        candidates: Sequence[int] = range(X.shape[1])
    else:
        candidates = sorted(sampler())
    best = _best_split(X, y, mean, sse, candidates, params.min_bucket)
    if best is None:
        return node
    gain, feature, threshold = best
    if gain <= 0.0 or gain < params.cp * root_sse:
        return node
    mask = X[:, feature] < threshold
    node.feature = feature
    node.threshold = threshold
    node.left = _grow(X[mask], y[mask], depth + 1, params, root_sse, sampler)
    node.right = _grow(X[~mask], y[~mask], depth + 1, params, root_sse, sampler)
    return node


def fit_tree(
    ts: TrainingSet,
    params: TreeParams | None = None,
    feature_sampler: FeatureSampler | None = None,
) -> RegressionTree:
    """Grow a regression tree on a training set.

    ``feature_sampler``, when given, is called once per split attempt and
    must return the candidate feature indices for that attempt (the random
    forest hook). With no sampler every feature is a candidate.
    """
    if ts.n_examples == 0:
        raise EmptyTrainingSet("cannot fit a tree on zero examples")
    params = params or TreeParams()
    X = np.asarray(ts.features, dtype=float)
    y = np.asarray(ts.targets, dtype=float)
    _, root_sse = _node_stats(y)
    root = _grow(X, y, 0, params, root_sse, feature_sampler)
    return RegressionTree(root=root, feature_names=ts.feature_names)


def predict_tree(tree: RegressionTree, x) -> float:
    """Route a feature vector to its leaf and return the leaf mean."""
    vec = np.asarray(x, dtype=float).reshape(-1)
    if vec.size != tree.n_features:
        raise DimensionMismatch(f"expected {tree.n_features} features, got {vec.size}")
    node = tree.root
    while not node.is_leaf:
        node = node.left if vec[node.feature] < node.threshold else node.right
    return node.mean


@dataclass(frozen=True)
class RuleCondition:
    feature: int
    op: str  # "<" or ">="
    threshold: float


@dataclass(frozen=True)
class Rule:
    conditions: tuple[RuleCondition, ...]
    prediction: float

    def matches(self, x) -> bool:
        for c in self.conditions:
            v = x[c.feature]
            if c.op == "<":
                if not v < c.threshold:
                    return False
            elif not v >= c.threshold:
                return False
        return True


def tree_to_rules(tree: RegressionTree) -> list[Rule]:
    """One (condition conjunction -> constant) rule per leaf.

    The rules' regions partition the feature space, so applying them
    reproduces ``predict_tree`` exactly.
    """
    rules: list[Rule] = []

    def walk(node: TreeNode, conds: tuple[RuleCondition, ...]) -> None:
        if node.is_leaf:
            rules.append(Rule(conditions=conds, prediction=node.mean))
            return
        walk(node.left, conds + (RuleCondition(node.feature, "<", node.threshold),))
        walk(node.right, conds + (RuleCondition(node.feature, ">=", node.threshold),))

    walk(tree.root, ())
    return rules


def apply_rules(rules: Sequence[Rule], x) -> float:
    vec = np.asarray(x, dtype=float).reshape(-1)
    for rule in rules:
        if rule.matches(vec):
            return rule.prediction
    raise ValueError("no rule matched; rules do not cover the input")


def rules_to_text(rules: Sequence[Rule], feature_names: Sequence[str]) -> str:
    lines = []
    for i, rule in enumerate(rules, 1):
        if rule.conditions:
            conds = " and ".join(
                f"{feature_names[c.feature]} {c.op} {_fmt(c.threshold)}" for c in rule.conditions
            )
            lines.append(f"{i}. if {conds}, predict {_fmt(rule.prediction)}.")
        else:
            lines.append(f"{i}. predict {_fmt(rule.prediction)}.")
    return "\n".join(lines)


def _fmt(v: float) -> str:
    return f"{v:g}"


def tree_to_text(tree: RegressionTree) -> str:
    """Console listing of a fitted tree, one line per node.

    Nodes are numbered root=1, children 2i and 2i+1, indented two spaces
    per level; each line shows the split condition, example count,
    deviance (SSE) and mean value, with ``*`` marking leaves.
    """
    lines = [
        f"n= {tree.root.n}",
        "",
        "node), split, n, deviance, yval",
        "      * denotes terminal node",
        "",
    ]

    def walk(node: TreeNode, number: int, depth: int, label: str) -> None:
        star = " *" if node.is_leaf else ""
        lines.append(f"{'  ' * depth}{number}) {label} {node.n} {_fmt(node.sse)} {_fmt(node.mean)}{star}")
        if not node.is_leaf:
            name = tree.feature_names[node.feature]
            walk(node.left, 2 * number, depth + 1, f"{name}< {_fmt(node.threshold)}")
            walk(node.right, 2 * number + 1, depth + 1, f"{name}>={_fmt(node.threshold)}")

    walk(tree.root, 1, 0, "root")
    return "\n".join(lines)
