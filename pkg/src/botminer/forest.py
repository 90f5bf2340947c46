"""Self-contained random-forest classifier and evaluation toolkit.

Binary classification with integer labels: 1 = bot, 0 = human. Trees are
grown on bootstrap samples with Gini-impurity splits at midpoints between
adjacent sorted feature values. Per-tree RNG streams are derived from
(seed, tree index), so parallel and serial training build identical
forests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyInput, SingleClass

HUMAN = 0
BOT = 1

MODEL_MAGIC = "botminer-forest"
MODEL_VERSION = 1


@dataclass(frozen=True)
class ForestConfig:
    ntree: int = 100
    mtry: int = 2
    min_node_size: int = 1
    seed: int = 0


@dataclass
class _Node:
    # Leaf when left is None; internal nodes carry (feature, threshold).
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    n_human: int = 0
    n_bot: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class RandomForestModel:
    trees: list[_Node]
    config: ForestConfig
    feature_names: tuple[str, ...]
    importances: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    sensitivity: float
    specificity: float


def _best_split_1d(x: np.ndarray, y: np.ndarray) -> tuple[float, float] | None:
    """Best (weighted child Gini, midpoint threshold) for one feature.

    Returns None when every value is identical. Ties go to the lowest
    threshold (first index of the argmin).
    """
    n = len(y)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    valid = xs[1:] != xs[:-1]
    if not valid.any():
        return None
    left_n = np.arange(1, n, dtype=float)
    right_n = n - left_n
    left_b = np.cumsum(ys)[:-1].astype(float)
    left_h = left_n - left_b
    right_b = float(ys.sum()) - left_b
    right_h = right_n - right_b
    gini_left = 1.0 - (left_b / left_n) ** 2 - (left_h / left_n) ** 2
    gini_right = 1.0 - (right_b / right_n) ** 2 - (right_h / right_n) ** 2
    weighted = (left_n * gini_left + right_n * gini_right) / n
    weighted[~valid] = np.inf
    pos = int(np.argmin(weighted))
    threshold = (xs[pos] + xs[pos + 1]) / 2.0
    return float(weighted[pos]), float(threshold)


def _gini(n_bot: int, n_human: int) -> float:
    n = n_bot + n_human
    if n == 0:
        return 0.0
    pb = n_bot / n
    return 1.0 - pb * pb - (1.0 - pb) ** 2


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    config: ForestConfig,
    rng: np.random.Generator,
    importances: np.ndarray,
    n_root: int,
) -> _Node:
    n, d = X.shape
    n_bot = int(y.sum())
    n_human = n - n_bot
    node = _Node(n_human=n_human, n_bot=n_bot)
    if n_bot == 0 or n_human == 0 or n < config.min_node_size:
        return node
    candidates = np.sort(rng.choice(d, size=config.mtry, replace=False))
    best: tuple[float, int, float] | None = None
    for f in candidates:
        res = _best_split_1d(X[:, f], y)
        if res is not None and (best is None or res[0] < best[0]):
            best = (res[0], int(f), res[1])
    if best is None:
        return node
    gini_split, feature, threshold = best
    importances[feature] += (n / n_root) * (_gini(n_bot, n_human) - gini_split)
    mask = X[:, feature] <= threshold
    node.feature = feature
    node.threshold = threshold
    node.left = _grow(X[mask], y[mask], config, rng, importances, n_root)
    node.right = _grow(X[~mask], y[~mask], config, rng, importances, n_root)
    return node


def fit(
    X: Sequence[Sequence[float]],
    y: Sequence[int],
    config: ForestConfig | None = None,
    feature_names: Sequence[str] | None = None,
) -> RandomForestModel:
    """Train a forest; deterministic given (rows order, config.seed)."""
    if config is None:
        config = ForestConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.size == 0 or len(y) == 0:
        raise EmptyInput("no training rows")
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one label per row")
    if y.min() == y.max():
        raise SingleClass("training data contains a single class")
    n, d = X.shape
    if config.mtry > d:
        raise ValueError(f"mtry={config.mtry} exceeds feature dimension {d}")
    if feature_names is None:
        feature_names = tuple(f"x{i}" for i in range(d))
    importances = np.zeros(d)
    trees = []
    for t in range(config.ntree):
        rng = np.random.default_rng([config.seed, t])
        idx = rng.integers(0, n, size=n)
        trees.append(_grow(X[idx], y[idx], config, rng, importances, n))
    importances /= config.ntree
    total = importances.sum()
    if total > 0:
        importances = importances / total
    return RandomForestModel(
        trees=trees,
        config=config,
        feature_names=tuple(feature_names),
        importances=importances,
    )


def _tree_vote(node: _Node, x: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    # Leaf ties break toward human.
    return BOT if node.n_bot > node.n_human else HUMAN


def predict_proba(model: RandomForestModel, x: Sequence[float]) -> float:
    """Fraction of trees voting bot; resolution exactly 1/ntree."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_features,):
        raise DimensionMismatch(
            f"expected {model.n_features} features, got shape {x.shape}"
        )
    votes = sum(_tree_vote(tree, x) for tree in model.trees)
    return votes / len(model.trees)


def predict_proba_many(model: RandomForestModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.array([predict_proba(model, row) for row in X])


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their average rank."""
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    cum = np.cumsum(counts)
    avg = cum - (counts - 1) / 2.0
    return avg[inverse]


def auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Probability a random bot outscores a random human (ties count 0.5)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int)
    bots = labels == BOT
    nb = int(bots.sum())
    nh = len(labels) - nb
    if nb == 0 or nh == 0:
        raise SingleClass("AUC needs both classes")
    ranks = _average_ranks(scores)
    u = ranks[bots].sum() - nb * (nb + 1) / 2.0
    return float(u / (nb * nh))


def roc_points(scores: Sequence[float], labels: Sequence[int]) -> list[RocPoint]:
    """One point per distinct score, with the bot rule ``score > threshold``."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int)
    bots = labels == BOT
    if bots.all() or not bots.any():
        raise SingleClass("ROC needs both classes")
    points = []
    for t in np.unique(scores):
        sens = float((scores[bots] > t).mean())
        spec = float((scores[~bots] <= t).mean())
        points.append(RocPoint(threshold=float(t), sensitivity=sens, specificity=spec))
    return points


def select_threshold(points: Sequence[RocPoint]) -> RocPoint:
    """Point minimizing (1-sens)^2 + (1-spec)^2; ties go to lower threshold."""
    if not points:
        raise EmptyInput("no ROC points")
    return min(
        points,
        key=lambda p: ((1 - p.sensitivity) ** 2 + (1 - p.specificity) ** 2, p.threshold),
    )


def _stratified_folds(y: np.ndarray, folds: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    fold_id = np.empty(len(y), dtype=int)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        fold_id[idx] = np.arange(len(idx)) % folds
    return fold_id


def grid_tune(
    X,
    y,
    ntree_grid: Sequence[int] = (50, 100, 200),
    mtry_grid: Sequence[int] = (1, 2, 3),
    folds: int = 10,
    seed: int = 0,
    min_node_size: int = 1,
) -> ForestConfig:
    """Stratified k-fold CV accuracy over the grid; returns the argmax config.

    Ties break toward smaller ntree, then smaller mtry.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if folds < 2 or folds > len(y):
        raise ValueError(f"folds must be in [2, n]: {folds}")
    fold_id = _stratified_folds(y, folds, seed)
    best_config = None
    best_acc = -1.0
    for ntree, mtry in product(sorted(ntree_grid), sorted(mtry_grid)):
        correct = 0
        for k in range(folds):
            test = fold_id == k
            config = ForestConfig(
                ntree=ntree, mtry=mtry, min_node_size=min_node_size, seed=seed + k
            )
            model = fit(X[~test], y[~test], config)
            probs = predict_proba_many(model, X[test])
            preds = np.where(probs > 0.5, BOT, HUMAN)
            correct += int((preds == y[test]).sum())
        acc = correct / len(y)
        if acc > best_acc:
            best_acc = acc
            best_config = ForestConfig(
                ntree=ntree, mtry=mtry, min_node_size=min_node_size, seed=seed
            )
    return best_config


def _preorder(node: _Node) -> list[list]:
    """Flat preorder node list; children of an internal node follow it."""
    out: list[list] = []

    def walk(n: _Node):
        if n.is_leaf:
            out.append(["leaf", n.n_human, n.n_bot])
        else:
            out.append(["split", n.feature, n.threshold])
            walk(n.left)
            walk(n.right)

    walk(node)
    return out


def _from_preorder(nodes: list[list]) -> _Node:
    pos = 0

    def build() -> _Node:
        nonlocal pos
        entry = nodes[pos]
        pos += 1
        if entry[0] == "leaf":
            return _Node(n_human=int(entry[1]), n_bot=int(entry[2]))
        node = _Node(feature=int(entry[1]), threshold=float(entry[2]))
        node.left = build()
        node.right = build()
        return node

    root = build()
    if pos != len(nodes):
        raise ValueError("trailing nodes in tree record")
    return root


def save_model(model: RandomForestModel, path: str) -> None:
    """Versioned flat text file: magic line, JSON header, one tree per line."""
    header = {
        "config": {
            "ntree": model.config.ntree,
            "mtry": model.config.mtry,
            "min_node_size": model.config.min_node_size,
            "seed": model.config.seed,
        },
        "feature_names": list(model.feature_names),
        "importances": [float(v) for v in model.importances],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MODEL_MAGIC} {MODEL_VERSION}\n")
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for tree in model.trees:
            fh.write(json.dumps(_preorder(tree)) + "\n")


def load_model(path: str) -> RandomForestModel:
    with open(path, "r", encoding="utf-8") as fh:
        magic = fh.readline().split()
        if len(magic) != 2 or magic[0] != MODEL_MAGIC:
            raise ValueError(f"not a botminer forest model: {path}")
        if int(magic[1]) != MODEL_VERSION:
            raise ValueError(f"unsupported model version {magic[1]}")
        header = json.loads(fh.readline())
        trees = [_from_preorder(json.loads(line)) for line in fh if line.strip()]
    config = ForestConfig(**header["config"])
    if len(trees) != config.ntree:
        raise ValueError(
            f"model has {len(trees)} trees, header says ntree={config.ntree}"
        )
    return RandomForestModel(
        trees=trees,
        config=config,
        feature_names=tuple(header["feature_names"]),
        importances=np.array(header.get("importances", []), dtype=float),
    )
