"""Validation harness: ROC AUC, stratified k-fold CV, the feature-family
ablation, the hyperparameter sweep grid, and score-distribution reports.

AUC uses the Mann-Whitney statistic with half credit for ties, computed
from average ranks.  Cross-validation folds are stratified (per-class
sizes differ by at most one) and deterministic under a seed; resampling,
when configured, is applied to the training portion of each fold only.
The ablation runs every feature group over the *same* folds so the
comparison is paired, and always includes a stratified-random baseline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .balance import BalancerConfig, adasyn
from .gbdt import TrainParams, train


class EvalError(ValueError):
    pass


# -- ROC AUC --------------------------------------------------------------

def auc(scored: Sequence[tuple[float, int]]) -> float:
    """Probability a random positive outranks a random negative;
    tied scores count half.  ``scored`` is (score, label) with label 1
    for the positive class."""
    scores = np.asarray([s for s, _ in scored], dtype=np.float64)
    labels = np.asarray([l for _, l in scored])
    positives = int((labels == 1).sum())
    negatives = int((labels != 1).sum())
    if positives == 0 or negatives == 0:
        raise EvalError("auc needs both classes present")

    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(len(scores), dtype=np.float64)
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    rank_sum = ranks[labels == 1].sum()
    return float((rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives))


# -- stratified folds and CV ----------------------------------------------

def stratified_folds(labels: np.ndarray, k: int, seed: int) -> list[np.ndarray]:
    """k disjoint index arrays; per class the fold sizes differ by <= 1."""
    if k < 2:
        raise EvalError("k must be >= 2")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0  # continues across classes so total fold sizes also differ by <= 1
    for value in np.unique(labels):
        members = np.flatnonzero(labels == value)
        if len(members) < k:
            raise EvalError(
                f"class {value!r} has {len(members)} members, fewer than k={k}"
            )
        members = members[rng.permutation(len(members))]
        for m in members:
            folds[pointer % k].append(int(m))
            pointer += 1
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


# trainer protocol: trainer(x_train, y_train, seed) -> score_fn(x) -> scores
Trainer = Callable[[np.ndarray, np.ndarray, int], Callable[[np.ndarray], np.ndarray]]


def make_gbdt_trainer(params: TrainParams = TrainParams()) -> Trainer:
    def trainer(x, y, seed):
        model = train(x, y, params)
        return model.predict_scores

    return trainer


def make_random_baseline_trainer() -> Trainer:
    """Stratified random scorer: draws from the training label prior,
    carrying no feature information (expected AUC 0.5)."""

    def trainer(x, y, seed):
        prior = float(np.asarray(y).mean())
        rng = np.random.default_rng(seed)

        def score(x_eval):
            return (rng.random(len(x_eval)) < prior).astype(np.float64)

        return score

    return trainer


@dataclass
class CVReport:
    fold_aucs: list[float]
    model: str = "gbdt"
    feature_set: str = "all"

    @property
    def k(self) -> int:
        return len(self.fold_aucs)

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.fold_aucs))

    @property
    def std_auc(self) -> float:
        return float(np.std(self.fold_aucs))

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "feature_set": self.feature_set,
            "k": self.k,
            "fold_aucs": list(self.fold_aucs),
            "mean_auc": self.mean_auc,
            "std_auc": self.std_auc,
        }


def cv_over_folds(
    x: np.ndarray,
    y: np.ndarray,
    folds: list[np.ndarray],
    trainer: Trainer,
    seed: int,
    balancer: BalancerConfig | None = None,
    model: str = "gbdt",
    feature_set: str = "all",
) -> CVReport:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    fold_aucs = []
    for i, test_idx in enumerate(folds):
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        x_train, y_train = x[mask], y[mask]
        if balancer is not None:
            x_train, y_train = adasyn(x_train, y_train, balancer)
        score_fn = trainer(x_train, y_train, seed + i)
        scores = score_fn(x[test_idx])
        fold_aucs.append(auc(list(zip(scores, y[test_idx]))))
    return CVReport(fold_aucs, model=model, feature_set=feature_set)


def kfold_cv(
    x: np.ndarray,
    y: np.ndarray,
    k: int,
    trainer: Trainer,
    seed: int,
    balancer: BalancerConfig | None = None,
    model: str = "gbdt",
    feature_set: str = "all",
) -> CVReport:
    folds = stratified_folds(np.asarray(y), k, seed)
    return cv_over_folds(x, y, folds, trainer, seed, balancer, model, feature_set)


# -- ablation ---------------------------------------------------------------

def default_feature_groups(names: Sequence[str]) -> dict[str, list[int]]:
    from .scorers.features import family_of

    groups = {
        "all": list(range(len(names))),
        "toxicity": [i for i, n in enumerate(names) if family_of(n) == "toxicity"],
        "sentiment": [i for i, n in enumerate(names) if family_of(n) == "sentiment"],
        "hate": [i for i, n in enumerate(names) if family_of(n) == "hate"],
    }
    return groups


def ablation(
    x: np.ndarray,
    y: np.ndarray,
    feature_groups: Mapping[str, Sequence[int]],
    trainer: Trainer,
    k: int,
    seed: int,
    balancer: BalancerConfig | None = None,
) -> list[CVReport]:
    """One CV report per feature group plus the random baseline; all rows
    share the same fold assignment so the comparison is paired."""
    for name, columns in feature_groups.items():
        if len(columns) == 0:
            raise EvalError(f"feature group {name!r} is empty")
    x = np.asarray(x, dtype=np.float64)
    folds = stratified_folds(np.asarray(y), k, seed)
    reports = []
    for name, columns in feature_groups.items():
        reports.append(
            cv_over_folds(
                x[:, list(columns)], y, folds, trainer, seed, balancer,
                model="gbdt", feature_set=name,
            )
        )
    reports.append(
        cv_over_folds(
            x, y, folds, make_random_baseline_trainer(), seed, None,
            model="stratified_random", feature_set="random-baseline",
        )
    )
    return reports


# -- hyperparameter sweep -----------------------------------------------------

DEFAULT_SWEEP_GRID: dict[str, list] = {
    "num_trees": [50, 100],
    "learning_rate": [0.05, 0.1],
    "max_leaves": [15, 31],
}


def sweep(
    x: np.ndarray,
    y: np.ndarray,
    grid: Mapping[str, Sequence] | None = None,
    k: int = 10,
    seed: int = 0,
    balancer: BalancerConfig | None = None,
    base_params: TrainParams = TrainParams(),
) -> tuple[TrainParams, list[tuple[TrainParams, CVReport]]]:
    """Fixed-grid model selection by CV mean AUC (first best wins ties)."""
    grid = dict(grid or DEFAULT_SWEEP_GRID)
    keys = sorted(grid)
    results = []
    folds = stratified_folds(np.asarray(y), k, seed)
    for combo in itertools.product(*(grid[key] for key in keys)):
        overrides = dict(zip(keys, combo))
        params = TrainParams(**{**base_params.__dict__, **overrides})
        report = cv_over_folds(
            x, y, folds, make_gbdt_trainer(params), seed, balancer,
            feature_set=str(overrides),
        )
        results.append((params, report))
    best = max(results, key=lambda pair: pair[1].mean_auc)
    return best[0], results


# -- KDE / histogram report ---------------------------------------------------

GRID_POINTS = 512
HISTOGRAM_BINS = 40


@dataclass
class KDECurves:
    grid: np.ndarray
    densities: dict[str, np.ndarray]
    histograms: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    bandwidths: dict[str, float] = field(default_factory=dict)

    def integral(self, label: str) -> float:
        return float(np.trapezoid(self.densities[label], self.grid))


def scott_bandwidth(scores: np.ndarray) -> float:
    sigma = float(np.std(scores, ddof=1)) if len(scores) > 1 else 0.0
    return sigma * len(scores) ** (-1.0 / 5.0)


def kde_report(
    scores_by_class: Mapping[str, Sequence[float]],
    bandwidth: float | None = None,
) -> KDECurves:
    """Gaussian-kernel densities on a 512-point grid over [0, 1],
    renormalized so each class integrates to one, plus density-normalized
    40-bin histograms."""
    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    densities: dict[str, np.ndarray] = {}
    histograms: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    bandwidths: dict[str, float] = {}
    for label, scores in scores_by_class.items():
        scores = np.asarray(scores, dtype=np.float64)
        if len(scores) == 0:
            raise EvalError(f"class {label!r} has no scores")
        bw = bandwidth if bandwidth is not None else scott_bandwidth(scores)
        if bw <= 1e-12:
            raise EvalError(
                f"class {label!r} has zero variance; pass an explicit bandwidth"
            )
        z = (grid[:, None] - scores[None, :]) / bw
        density = np.exp(-0.5 * z**2).sum(axis=1) / (len(scores) * bw * math.sqrt(2 * math.pi))
        area = np.trapezoid(density, grid)
        if area <= 0:
            raise EvalError(f"class {label!r} has no density mass inside [0, 1]")
        densities[label] = density / area
        counts, edges = np.histogram(scores, bins=HISTOGRAM_BINS, range=(0.0, 1.0), density=True)
        histograms[label] = (edges, counts)
        bandwidths[label] = float(bw)
    return KDECurves(grid=grid, densities=densities, histograms=histograms, bandwidths=bandwidths)
