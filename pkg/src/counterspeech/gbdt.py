"""Gradient-boosted decision trees for binary classification, plus the
single-feature threshold rule used by the live responder.

Logistic loss: per boosting round the gradients are ``g_i = p_i - y_i``
and hessians ``h_i = p_i (1 - p_i)``; a leaf's weight is
``-sum(g) / (sum(h) + l2_lambda)`` and a split's gain is

    0.5 * [ GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l) ]

Trees grow leaf-wise: the highest-gain leaf is expanded until
``max_leaves`` is reached or no split's gain exceeds ``min_gain``.
Split search is exact: every boundary between distinct sorted feature
values is enumerated, with midpoint thresholds.  Rows routed by
``value <= threshold`` go left.  Ties in gain resolve to the lower
feature index, then the lower threshold, so training is deterministic
and invariant to row order.

The ensemble prediction is ``sigmoid(base_score + learning_rate *
sum(tree outputs))``; leaf weights are stored unscaled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GbdtError(ValueError):
    pass


@dataclass(frozen=True)
class TrainParams:
    num_trees: int = 100
    learning_rate: float = 0.1
    max_leaves: int = 31
    min_samples_leaf: int = 20
    l2_lambda: float = 1.0
    min_gain: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.num_trees < 0:
            raise GbdtError("num_trees must be >= 0")
        if self.learning_rate <= 0:
            raise GbdtError("learning_rate must be positive")
        if self.max_leaves < 2:
            raise GbdtError("max_leaves must be >= 2")
        if self.min_samples_leaf < 1:
            raise GbdtError("min_samples_leaf must be >= 1")
        if self.l2_lambda < 0:
            raise GbdtError("l2_lambda must be >= 0")


class TreeNode:
    """Internal node (feature_index, threshold, children) or leaf (weight)."""

    __slots__ = ("feature_index", "threshold", "left", "right", "weight")

    def __init__(self, weight=0.0, feature_index=None, threshold=None, left=None, right=None):
        self.feature_index = feature_index
        self.threshold = threshold
        self.left = left
        self.right = right
        self.weight = weight

    @property
    def is_leaf(self) -> bool:
        return self.feature_index is None

    def output(self, row: np.ndarray) -> float:
        node = self
        while not node.is_leaf:
            node = node.left if row[node.feature_index] <= node.threshold else node.right
        return node.weight

    def outputs(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(len(x))
        self._fill(x, np.arange(len(x)), out)
        return out

    def _fill(self, x, rows, out):
        if self.is_leaf:
            out[rows] = self.weight
            return
        mask = x[rows, self.feature_index] <= self.threshold
        self.left._fill(x, rows[mask], out)
        self.right._fill(x, rows[~mask], out)

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"weight": self.weight}
        return {
            "feature_index": int(self.feature_index),
            "threshold": float(self.threshold),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TreeNode":
        if "weight" in obj:
            return cls(weight=float(obj["weight"]))
        return cls(
            feature_index=int(obj["feature_index"]),
            threshold=float(obj["threshold"]),
            left=cls.from_dict(obj["left"]),
            right=cls.from_dict(obj["right"]),
        )


def _sigmoid(z):
    # clipping keeps the output strictly inside (0, 1) in float64
    return 1.0 / (1.0 + np.exp(-np.clip(z, -36.0, 36.0)))


@dataclass
class Ensemble:
    registry: tuple[str, ...]
    base_score: float
    learning_rate: float
    trees: list[TreeNode] = field(default_factory=list)
    train_loss: list[float] = field(default_factory=list, compare=False)

    def raw_scores(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        score = np.full(len(x), self.base_score)
        for tree in self.trees:
            score += self.learning_rate * tree.outputs(x)
        return score

    def predict_scores(self, x: np.ndarray) -> np.ndarray:
        """Probabilities for a feature matrix."""
        return _sigmoid(self.raw_scores(x))

    def predict(self, fv) -> float:
        """Probability for one feature vector; registry must match."""
        values = getattr(fv, "values", fv)
        names = getattr(getattr(fv, "registry", None), "names", None)
        if names is not None and tuple(names) != tuple(self.registry):
            raise GbdtError("feature vector registry does not match the model registry")
        row = np.asarray(values, dtype=np.float64)
        if row.shape != (len(self.registry),):
            raise GbdtError(
                f"expected {len(self.registry)} features, got {row.shape}"
            )
        z = self.base_score + self.learning_rate * sum(t.output(row) for t in self.trees)
        return float(_sigmoid(np.array(z)))

    # -- persistence ----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "registry": list(self.registry),
                "base_score": self.base_score,
                "learning_rate": self.learning_rate,
                "trees": [t.to_dict() for t in self.trees],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Ensemble":
        obj = json.loads(text)
        return cls(
            registry=tuple(obj["registry"]),
            base_score=float(obj["base_score"]),
            learning_rate=float(obj["learning_rate"]),
            trees=[TreeNode.from_dict(t) for t in obj["trees"]],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Ensemble":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


# -- training ------------------------------------------------------------

def best_split(x, g, h, rows, params):
    """Exact greedy search over every distinct-value boundary of every
    feature.  Returns (gain, feature_index, threshold) or None."""
    g_sum = g[rows].sum()
    h_sum = h[rows].sum()
    lam = params.l2_lambda
    parent_term = g_sum**2 / (h_sum + lam)
    n = len(rows)
    best = None
    for j in range(x.shape[1]):
        vals = x[rows, j]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sg = g[rows][order]
        sh = h[rows][order]
        boundaries = np.flatnonzero(sv[:-1] != sv[1:])
        if len(boundaries) == 0:
            continue
        n_left = boundaries + 1
        ok = (n_left >= params.min_samples_leaf) & (n - n_left >= params.min_samples_leaf)
        boundaries = boundaries[ok]
        if len(boundaries) == 0:
            continue
        gl = np.cumsum(sg)[boundaries]
        hl = np.cumsum(sh)[boundaries]
        gr, hr = g_sum - gl, h_sum - hl
        gains = 0.5 * (gl**2 / (hl + lam) + gr**2 / (hr + lam) - parent_term)
        k = int(np.argmax(gains))  # first max: lowest threshold wins ties
        if best is None or gains[k] > best[0]:
            b = boundaries[k]
            threshold = (sv[b] + sv[b + 1]) / 2.0
            best = (float(gains[k]), j, float(threshold))
    return best


def _leaf_weight(g, h, rows, lam):
    return float(-g[rows].sum() / (h[rows].sum() + lam))


def _grow_tree(x, g, h, params) -> TreeNode:
    all_rows = np.arange(len(x))
    root = TreeNode(weight=_leaf_weight(g, h, all_rows, params.l2_lambda))
    leaves = [(root, all_rows, best_split(x, g, h, all_rows, params))]
    n_leaves = 1
    while n_leaves < params.max_leaves:
        best_i = -1
        for i, (_, _, split) in enumerate(leaves):
            if split is None or split[0] <= params.min_gain:
                continue
            if best_i < 0 or split[0] > leaves[best_i][2][0]:
                best_i = i
        if best_i < 0:
            break
        node, rows, (gain, j, threshold) = leaves.pop(best_i)
        mask = x[rows, j] <= threshold
        left_rows, right_rows = rows[mask], rows[~mask]
        node.feature_index = j
        node.threshold = threshold
        node.left = TreeNode(weight=_leaf_weight(g, h, left_rows, params.l2_lambda))
        node.right = TreeNode(weight=_leaf_weight(g, h, right_rows, params.l2_lambda))
        node.weight = 0.0
        leaves.append((node.left, left_rows, best_split(x, g, h, left_rows, params)))
        leaves.append((node.right, right_rows, best_split(x, g, h, right_rows, params)))
        n_leaves += 1
    return root


def _mean_logloss(y, p):
    eps = 1e-12
    p = np.clip(p, eps, 1 - eps)
    return float(-(y * np.log(p) + (1 - y) * np.log(1 - p)).mean())


def train(x, y, params: TrainParams = TrainParams(), registry=None) -> Ensemble:
    """Fit an ensemble; both classes must be present and features finite."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or len(x) != len(y):
        raise GbdtError("x must be (n, d) with one label per row")
    bad = np.flatnonzero(~np.isfinite(x).all(axis=1))
    if len(bad):
        raise GbdtError(f"non-finite feature value at row {int(bad[0])}")
    if not set(np.unique(y)) <= {0.0, 1.0}:
        raise GbdtError("labels must be 0/1")
    positive = y.mean()
    if positive == 0.0 or positive == 1.0:
        raise GbdtError("both classes must be present")

    if registry is None:
        registry = tuple(f"f{i}" for i in range(x.shape[1]))
    else:
        registry = tuple(getattr(registry, "names", registry))
    if len(registry) != x.shape[1]:
        raise GbdtError("registry size does not match feature count")

    base = math.log(positive / (1.0 - positive))
    ensemble = Ensemble(registry=registry, base_score=base, learning_rate=params.learning_rate)
    score = np.full(len(y), base)
    ensemble.train_loss.append(_mean_logloss(y, _sigmoid(score)))
    for _ in range(params.num_trees):
        p = _sigmoid(score)
        g = p - y
        h = p * (1.0 - p)
        tree = _grow_tree(x, g, h, params)
        ensemble.trees.append(tree)
        score += params.learning_rate * tree.outputs(x)
        ensemble.train_loss.append(_mean_logloss(y, _sigmoid(score)))
    return ensemble


# -- deployed decision rule ----------------------------------------------

def threshold_decide(toxicity: float, theta: float) -> bool:
    """True (respond) iff the trigger feature reaches the threshold.
    The comparison is inclusive: a score exactly at theta triggers."""
    if not 0.0 <= toxicity <= 1.0:
        raise GbdtError(f"toxicity score {toxicity} outside [0, 1]")
    if not 0.0 <= theta <= 1.0:
        raise GbdtError(f"threshold {theta} outside [0, 1]")
    return toxicity >= theta
