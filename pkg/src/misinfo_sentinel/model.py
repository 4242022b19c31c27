"""Decision trees, random forests, cross-validation, grid search, metrics.

Trees are greedy CART: each node scans a random sqrt-sized feature subset
(all features when ``max_features="all"``), evaluates thresholds at
midpoints of consecutive distinct sorted values, and takes the split with
the largest weighted Gini decrease.  Scans go through candidate features
in ascending index and through thresholds in ascending value, and a
strictly greater gain is required to replace the incumbent, so ties
resolve to the first candidate and training is deterministic per
(seed, tree index) regardless of any parallel scheduling.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .balance import LabeledSet
from .errors import ArgumentError, ModelError

_MIN_GAIN = 1e-12


@dataclass
class TreeNode:
    """Either a split (feature/threshold/children) or a leaf (class counts)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"counts": [int(c) for c in self.counts]}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNode":
        if "counts" in d:
            return cls(counts=np.asarray(d["counts"], dtype=float))
        return cls(
            feature=d["feature"],
            threshold=d["threshold"],
            left=cls.from_dict(d["left"]),
            right=cls.from_dict(d["right"]),
        )


@dataclass
class ForestConfig:
    n_estimators: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_features: str | int = "sqrt"  # "sqrt", "all", or an explicit count
    bootstrap: bool = True

    def resolve_max_features(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(np.ceil(np.sqrt(n_features))))
        if self.max_features in ("all", None):
            return n_features
        return min(int(self.max_features), n_features)


@dataclass
class ForestModel:
    trees: list[TreeNode]
    config: ForestConfig
    seed: int
    classes: np.ndarray
    feature_names: list[str]
    importances: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    averaging: str = "weighted"
    per_fold: dict[str, list[float]] | None = None
    spread: dict[str, float] | None = None  # (max - min) / 2 over folds
    std: dict[str, float] | None = None

    def __post_init__(self):
        for name in ("accuracy", "precision", "recall", "f1"):
            v = getattr(self, name)
            if not (0.0 - 1e-9 <= v <= 1.0 + 1e-9):
                raise ArgumentError(f"{name}={v} outside [0, 1]")


def gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - (p * p).sum())


def _best_split_for_feature(x: np.ndarray, codes: np.ndarray, n_classes: int, min_leaf: int):
    """Best (gain, threshold) for one feature, or None when unsplittable.

    Vectorized over thresholds: sort rows by the feature, take cumulative
    class counts, and score every boundary between distinct values.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if xs[0] == xs[-1]:
        return None
    ys = codes[order]
    n = len(xs)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    prefix = np.cumsum(onehot, axis=0)  # prefix[i] = counts of first i+1 rows
    total = prefix[-1]

    boundaries = np.flatnonzero(xs[:-1] < xs[1:])  # split after index i
    if min_leaf > 1:
        boundaries = boundaries[(boundaries + 1 >= min_leaf) & (n - boundaries - 1 >= min_leaf)]
    if len(boundaries) == 0:
        return None
    left = prefix[boundaries]
    right = total - left
    nl = left.sum(axis=1)
    nr = right.sum(axis=1)
    gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
    gini_r = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
    weighted = (nl * gini_l + nr * gini_r) / n
    parent = 1.0 - ((total / n) ** 2).sum()
    gains = parent - weighted
    best = int(np.argmax(gains))  # first index wins ties -> lowest threshold
    threshold = (xs[boundaries[best]] + xs[boundaries[best] + 1]) / 2.0
    return float(gains[best]), float(threshold)


def _build_tree(
    X: np.ndarray,
    codes: np.ndarray,
    idx: np.ndarray,
    depth: int,
    config: ForestConfig,
    rng: np.random.Generator,
    n_classes: int,
    n_root: int,
    importance: np.ndarray,
) -> TreeNode:
    counts = np.bincount(codes[idx], minlength=n_classes).astype(float)
    if (
        (counts > 0).sum() <= 1
        or (config.max_depth is not None and depth >= config.max_depth)
        or len(idx) < config.min_samples_split
    ):
        return TreeNode(counts=counts)

    n_features = X.shape[1]
    n_cand = config.resolve_max_features(n_features)
    if n_cand < n_features:
        cand = np.sort(rng.choice(n_features, size=n_cand, replace=False))
    else:
        cand = np.arange(n_features)

    best = None
    for f in cand:
        found = _best_split_for_feature(X[idx, f], codes[idx], n_classes, config.min_samples_leaf)
        if found is None:
            continue
        gain, threshold = found
        if best is None or gain > best[0] + _MIN_GAIN:
            best = (gain, int(f), threshold)
    if best is None or best[0] <= _MIN_GAIN:
        return TreeNode(counts=counts)

    gain, feature, threshold = best
    mask = X[idx, feature] <= threshold
    left_idx = idx[mask]
    right_idx = idx[~mask]
    importance[feature] += (len(idx) / n_root) * gain
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_build_tree(X, codes, left_idx, depth + 1, config, rng, n_classes, n_root, importance),
        right=_build_tree(X, codes, right_idx, depth + 1, config, rng, n_classes, n_root, importance),
    )


def train_forest(
    dataset: LabeledSet,
    config: ForestConfig | None = None,
    seed: int = 0,
    feature_names: list[str] | None = None,
    metadata: dict | None = None,
) -> ForestModel:
    """Train a random forest; deterministic per (seed, tree index)."""
    if config is None:
        config = ForestConfig()
    X, y = dataset.X, dataset.y
    if len(X) == 0:
        raise ArgumentError("training set is empty")
    classes, codes = np.unique(y, return_inverse=True)
    if feature_names is None:
        feature_names = [f"f{i}" for i in range(X.shape[1])]
    if len(feature_names) != X.shape[1]:
        raise ArgumentError("feature_names must match the feature count")

    if len(classes) == 1:
        warnings.warn("single-class training set; model degenerates to a constant")
        counts = np.array([float(len(y))])
        trees = [TreeNode(counts=counts) for _ in range(max(config.n_estimators, 1))]
        return ForestModel(
            trees=trees,
            config=config,
            seed=seed,
            classes=classes,
            feature_names=list(feature_names),
            importances=np.zeros(X.shape[1]),
            metadata=metadata or {},
        )

    importance = np.zeros(X.shape[1])
    trees = []
    n = len(X)
    for t in range(config.n_estimators):
        rng = np.random.default_rng([seed, t])
        idx = rng.integers(0, n, size=n) if config.bootstrap else np.arange(n)
        trees.append(
            _build_tree(X, codes, idx, 0, config, rng, len(classes), len(idx), importance)
        )
    total = importance.sum()
    if total > 0:
        importance = importance / total
    return ForestModel(
        trees=trees,
        config=config,
        seed=seed,
        classes=classes,
        feature_names=list(feature_names),
        importances=importance,
        metadata=metadata or {},
    )


def _tree_proba(node: TreeNode, X: np.ndarray, idx: np.ndarray, out: np.ndarray, n_classes: int):
    if node.is_leaf:
        counts = node.counts
        if len(counts) < n_classes:
            counts = np.pad(counts, (0, n_classes - len(counts)))
        total = counts.sum()
        out[idx] += counts / total if total > 0 else 1.0 / n_classes
        return
    mask = X[idx, node.feature] <= node.threshold
    left_idx = idx[mask]
    right_idx = idx[~mask]
    if len(left_idx):
        _tree_proba(node.left, X, left_idx, out, n_classes)
    if len(right_idx):
        _tree_proba(node.right, X, right_idx, out, n_classes)


def predict_proba(model: ForestModel, X: np.ndarray) -> np.ndarray:
    """Per-class probability = mean of the trees' leaf class fractions."""
    if not model.trees:
        raise ModelError("model has no trees")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n_classes = len(model.classes)
    out = np.zeros((len(X), n_classes))
    idx = np.arange(len(X))
    for tree in model.trees:
        _tree_proba(tree, X, idx, out, n_classes)
    return out / len(model.trees)


def predict(model: ForestModel, X: np.ndarray) -> np.ndarray:
    """Argmax class per row; ties go to the lowest class label."""
    proba = predict_proba(model, X)
    return model.classes[np.argmax(proba, axis=1)]


def compute_metrics(y_true, y_pred, averaging: str = "weighted") -> Metrics:
    """Accuracy plus averaged precision/recall; f1 is their harmonic mean.

    Weighted averaging weights per-class scores by true support; macro
    weights classes equally.  A class never predicted scores precision 0.
    """
    if averaging not in ("weighted", "macro"):
        raise ArgumentError("averaging must be 'weighted' or 'macro'")
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if len(y_true) != len(y_pred) or len(y_true) == 0:
        raise ArgumentError("prediction vectors must be non-empty and aligned")
    labels = np.unique(np.concatenate([y_true, y_pred]))
    accuracy = float((y_true == y_pred).mean())
    precisions, recalls, weights = [], [], []
    for label in labels:
        tp = float(((y_true == label) & (y_pred == label)).sum())
        fp = float(((y_true != label) & (y_pred == label)).sum())
        fn = float(((y_true == label) & (y_pred != label)).sum())
        precisions.append(tp / (tp + fp) if tp + fp > 0 else 0.0)
        recalls.append(tp / (tp + fn) if tp + fn > 0 else 0.0)
        weights.append(float((y_true == label).sum()))
    w = np.asarray(weights)
    if averaging == "weighted":
        w = w / w.sum()
    else:
        w = np.full(len(labels), 1.0 / len(labels))
    precision = float(np.dot(w, precisions))
    recall = float(np.dot(w, recalls))
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1, averaging=averaging)


def stratified_folds(y: np.ndarray, k: int, seed: int = 0) -> list[np.ndarray]:
    """Index arrays for k stratified folds; overall sizes differ by <= 1."""
    y = np.asarray(y)
    if k < 2:
        raise ArgumentError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for label in np.unique(y):
        members = np.flatnonzero(y == label)
        if len(members) < k:
            raise ArgumentError(
                f"class {label!r} has {len(members)} members; stratified {k}-fold needs >= {k}"
            )
        members = members[rng.permutation(len(members))]
        for i in members:
            folds[cursor % k].append(int(i))
            cursor += 1
    return [np.asarray(sorted(f)) for f in folds]


def _aggregate_fold_metrics(fold_metrics: list[Metrics], averaging: str) -> Metrics:
    names = ("accuracy", "precision", "recall", "f1")
    per_fold = {n: [getattr(m, n) for m in fold_metrics] for n in names}
    means = {n: float(np.mean(v)) for n, v in per_fold.items()}
    spread = {n: float((max(v) - min(v)) / 2.0) for n, v in per_fold.items()}
    std = {n: float(np.std(v)) for n, v in per_fold.items()}
    return Metrics(
        accuracy=means["accuracy"],
        precision=means["precision"],
        recall=means["recall"],
        f1=means["f1"],
        averaging=averaging,
        per_fold=per_fold,
        spread=spread,
        std=std,
    )


def cross_validate(
    dataset: LabeledSet,
    config: ForestConfig | None = None,
    k: int = 3,
    seed: int = 0,
    balancer: Callable[[LabeledSet], LabeledSet] | None = None,
    averaging: str = "weighted",
) -> Metrics:
    """Stratified k-fold CV; any rebalancing touches training folds only."""
    if config is None:
        config = ForestConfig()
    folds = stratified_folds(dataset.y, k, seed)
    fold_metrics = []
    for fold_no, test_idx in enumerate(folds):
        mask = np.ones(len(dataset), dtype=bool)
        mask[test_idx] = False
        train = LabeledSet(dataset.X[mask], dataset.y[mask])
        if balancer is not None:
            train = balancer(train)
        model = train_forest(train, config, seed=seed * 1000 + fold_no)
        y_pred = predict(model, dataset.X[test_idx])
        fold_metrics.append(compute_metrics(dataset.y[test_idx], y_pred, averaging))
    return _aggregate_fold_metrics(fold_metrics, averaging)


@dataclass
class GridSearchResult:
    best_config: ForestConfig
    best_metrics: Metrics
    results: list[tuple[ForestConfig, Metrics]]


def grid_search(
    dataset: LabeledSet,
    param_grid: dict[str, Sequence],
    base_config: ForestConfig | None = None,
    k: int = 3,
    seed: int = 0,
    balancer: Callable[[LabeledSet], LabeledSet] | None = None,
) -> GridSearchResult:
    """Exhaustive search over the grid; mean-accuracy ties keep grid order."""
    if base_config is None:
        base_config = ForestConfig()
    if not param_grid:
        raise ArgumentError("param_grid is empty")
    keys = list(param_grid)
    results = []
    best = None
    for values in itertools.product(*(param_grid[key] for key in keys)):
        config = replace(base_config, **dict(zip(keys, values)))
        metrics = cross_validate(dataset, config, k=k, seed=seed, balancer=balancer)
        results.append((config, metrics))
        if best is None or metrics.accuracy > best[1].accuracy:
            best = (config, metrics)
    return GridSearchResult(best_config=best[0], best_metrics=best[1], results=results)


DEFAULT_GRID = {
    "n_estimators": [100, 200, 400],
    "max_depth": [None, 10, 20],
    "min_samples_split": [2, 5],
}


def evaluate(model: ForestModel, X: np.ndarray, y: np.ndarray, averaging: str = "weighted") -> Metrics:
    return compute_metrics(y, predict(model, np.asarray(X, dtype=float)), averaging)


def feature_importance(model: ForestModel) -> dict[str, float]:
    """Impurity-decrease importances by feature name (non-negative, sum 1)."""
    return {name: float(v) for name, v in zip(model.feature_names, model.importances)}


MODEL_FILE_VERSION = 1


def save_model(model: ForestModel, path):
    payload = {
        "version": MODEL_FILE_VERSION,
        "config": {
            "n_estimators": model.config.n_estimators,
            "max_depth": model.config.max_depth,
            "min_samples_split": model.config.min_samples_split,
            "min_samples_leaf": model.config.min_samples_leaf,
            "max_features": model.config.max_features,
            "bootstrap": model.config.bootstrap,
        },
        "seed": model.seed,
        "classes": model.classes.tolist(),
        "feature_names": model.feature_names,
        "importances": model.importances.tolist(),
        "metadata": model.metadata,
        "trees": [t.to_dict() for t in model.trees],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def load_model(path) -> ForestModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("version") != MODEL_FILE_VERSION:
        raise ModelError(f"unsupported model file version in {path}")
    config = ForestConfig(**payload["config"])
    return ForestModel(
        trees=[TreeNode.from_dict(t) for t in payload["trees"]],
        config=config,
        seed=payload["seed"],
        classes=np.asarray(payload["classes"]),
        feature_names=payload["feature_names"],
        importances=np.asarray(payload["importances"]),
        metadata=payload.get("metadata", {}),
    )
