"""Adaptive synthetic oversampling (ADASYN) for the minority class.

Given minority count ``m_s`` and majority count ``m_l``, the generation
budget is ``G = (m_l - m_s) * beta``.  Each minority point ``x_i`` gets a
share of that budget proportional to the majority density around it:
``delta_i`` counts majority members among its ``k`` nearest neighbours
(Euclidean, over all points, self excluded), ``r_i = delta_i / k`` is
normalized to ``r_hat_i`` and ``g_i = round(r_hat_i * G)`` synthetics are
interpolated as ``x_i + lam * (x_z - x_i)`` with ``lam ~ U[0, 1)`` and
``x_z`` drawn from the ``k`` nearest *minority* neighbours of ``x_i``.

Originals are always retained; synthetics are appended in seed order, so
output is deterministic for a fixed ``BalancerConfig``.  Applied to
training folds only; evaluation folds must never contain synthetics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class BalanceError(ValueError):
    pass


@dataclass(frozen=True)
class BalancerConfig:
    k: int = 5
    beta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise BalanceError(f"k must be >= 1, got {self.k}")
        if not 0.0 <= self.beta <= 1.0:
            raise BalanceError(f"beta must be in [0, 1], got {self.beta}")


def nearest_neighbors(points: np.ndarray, queries: np.ndarray, k: int,
                      exclude: np.ndarray | None = None) -> np.ndarray:
    """Indices (into ``points``) of the k nearest neighbours of each query,
    ordered by distance with ties broken by lower index.  ``exclude[q]``
    names one point index to skip for query q (the query itself)."""
    out = np.empty((len(queries), min(k, len(points) - (exclude is not None))), dtype=np.int64)
    # chunked to keep the distance matrix small for large inputs
    chunk = max(1, int(2e7) // max(1, len(points)))
    for start in range(0, len(queries), chunk):
        stop = min(start + chunk, len(queries))
        block = queries[start:stop]
        d2 = ((block[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
        if exclude is not None:
            d2[np.arange(stop - start), exclude[start:stop]] = np.inf
        order = np.argsort(d2, axis=1, kind="stable")
        out[start:stop] = order[:, : out.shape[1]]
    return out


def adasyn(
    features: np.ndarray,
    labels: np.ndarray,
    config: BalancerConfig = BalancerConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """Oversample the minority class; returns (features, labels) with the
    originals first and synthetics appended under the minority label."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if features.ndim != 2 or len(features) != len(labels):
        raise BalanceError("features must be (n, d) with one label per row")

    values, counts = np.unique(labels, return_counts=True)
    if len(values) < 2:
        raise BalanceError("both classes must be present")
    if len(values) > 2:
        raise BalanceError(f"expected binary labels, got {len(values)} classes")

    minority_value = values[np.argmin(counts)]
    minority_idx = np.flatnonzero(labels == minority_value)
    m_s = len(minority_idx)
    m_l = len(labels) - m_s
    budget = (m_l - m_s) * config.beta
    if budget <= 0:
        return features.copy(), labels.copy()

    minority_points = features[minority_idx]

    # density ratio from the k-NN over *all* points
    all_nn = nearest_neighbors(features, minority_points, config.k, exclude=minority_idx)
    majority_mask = labels != minority_value
    delta = majority_mask[all_nn].sum(axis=1)
    r = delta / config.k
    r_total = r.sum()
    if r_total == 0:
        r_hat = np.full(m_s, 1.0 / m_s)
    else:
        r_hat = r / r_total
    g = np.array([round(v) for v in r_hat * budget], dtype=np.int64)

    # interpolation partners come from the k-NN among minority points
    if m_s > 1:
        within = nearest_neighbors(
            minority_points, minority_points, config.k, exclude=np.arange(m_s)
        )
    else:
        within = np.empty((1, 0), dtype=np.int64)

    rng = np.random.default_rng(config.seed)
    synthetic = []
    for i in range(m_s):
        candidates = within[i]
        for _ in range(int(g[i])):
            if len(candidates) == 0:
                synthetic.append(minority_points[i].copy())
                continue
            z = minority_points[candidates[rng.integers(len(candidates))]]
            lam = rng.random()
            synthetic.append(minority_points[i] + lam * (z - minority_points[i]))

    if not synthetic:
        return features.copy(), labels.copy()
    out_x = np.vstack([features, np.array(synthetic)])
    out_y = np.concatenate([labels, np.full(len(synthetic), minority_value, dtype=labels.dtype)])
    return out_x, out_y
