import numpy as np
import pytest

from counterspeech.balance import BalancerConfig
from counterspeech.evaluation import (
    CVReport,
    EvalError,
    ablation,
    auc,
    default_feature_groups,
    kde_report,
    kfold_cv,
    make_gbdt_trainer,
    make_random_baseline_trainer,
    scott_bandwidth,
    stratified_folds,
    sweep,
)
from counterspeech.gbdt import TrainParams
from counterspeech.scorers import DEFAULT_REGISTRY


def brute_force_auc(scored):
    """Independent oracle: enumerate every positive/negative pair."""
    positives = [s for s, l in scored if l == 1]
    negatives = [s for s, l in scored if l != 1]
    total = 0.0
    for p in positives:
        for n in negatives:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(positives) * len(negatives))


class TestAuc:
    def test_perfect_ranking(self):
        scored = [(0.9, 1), (0.8, 1), (0.2, 0), (0.1, 0)]
        assert auc(scored) == 1.0

    def test_all_ties_is_half(self):
        scored = [(0.5, 1), (0.5, 0), (0.5, 1), (0.5, 0)]
        assert auc(scored) == 0.5

    def test_four_pair_enumeration(self):
        # pairs: pos .35 vs neg .1 (concordant), .35 vs .4 (discordant),
        # pos .8 beats both -> 3 of 4 concordant
        scored = [(0.1, 0), (0.35, 1), (0.4, 0), (0.8, 1)]
        assert brute_force_auc(scored) == 0.75
        assert auc(scored) == 0.75

    def test_single_class_rejected(self):
        with pytest.raises(EvalError):
            auc([(0.5, 1), (0.2, 1)])

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_pair_enumeration_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 60))
        scores = rng.integers(0, 8, n) / 7.0  # coarse grid forces ties
        labels = (rng.random(n) < 0.4).astype(int)
        if labels.min() == labels.max():
            labels[:2] = [0, 1]
        scored = list(zip(scores, labels))
        assert auc(scored) == pytest.approx(brute_force_auc(scored), abs=1e-12)

    def test_invariant_under_monotone_transform(self):
        rng = np.random.default_rng(3)
        scores = rng.random(40)
        labels = (rng.random(40) < 0.5).astype(int)
        labels[:2] = [0, 1]
        base = auc(list(zip(scores, labels)))
        squashed = auc(list(zip(np.tanh(3 * scores), labels)))
        assert base == pytest.approx(squashed, abs=1e-12)


class TestFolds:
    def test_sizes_and_ratios(self):
        y = np.array([1] * 25 + [0] * 75)
        folds = stratified_folds(y, 10, seed=0)
        assert all(len(f) == 10 for f in folds)
        for fold in folds:
            hateful = int(y[fold].sum())
            assert abs(hateful - 2.5) <= 0.5 + 1e-9

    def test_partition(self):
        y = np.array([0, 1] * 30)
        folds = stratified_folds(y, 7, seed=1)
        joined = np.concatenate(folds)
        assert sorted(joined.tolist()) == list(range(60))

    def test_same_seed_same_folds(self):
        y = np.array([0, 1] * 20)
        a = stratified_folds(y, 5, seed=9)
        b = stratified_folds(y, 5, seed=9)
        for fa, fb in zip(a, b):
            np.testing.assert_array_equal(fa, fb)

    def test_class_smaller_than_k_rejected(self):
        y = np.array([1] * 3 + [0] * 30)
        with pytest.raises(EvalError, match="fewer than k"):
            stratified_folds(y, 5, seed=0)


def signal_dataset(n=300, seed=0, noise_columns=4):
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < 0.3).astype(float)
    signal = np.where(y == 1, rng.normal(0.75, 0.12, n), rng.normal(0.3, 0.12, n))
    x = rng.random((n, noise_columns + 1))
    x[:, 0] = np.clip(signal, 0, 1)
    return x, y


SMALL_PARAMS = TrainParams(num_trees=10, max_leaves=4, min_samples_leaf=5)


class TestKfoldCv:
    def test_deterministic_per_fold_aucs(self):
        x, y = signal_dataset()
        a = kfold_cv(x, y, 5, make_gbdt_trainer(SMALL_PARAMS), seed=4)
        b = kfold_cv(x, y, 5, make_gbdt_trainer(SMALL_PARAMS), seed=4)
        assert a.fold_aucs == b.fold_aucs
        assert a.k == 5

    def test_signal_is_learned(self):
        x, y = signal_dataset()
        report = kfold_cv(x, y, 5, make_gbdt_trainer(SMALL_PARAMS), seed=0)
        assert report.mean_auc > 0.9

    def test_random_labels_score_near_half(self):
        rng = np.random.default_rng(11)
        x = rng.random((1000, 4))
        y = (rng.random(1000) < 0.4).astype(float)  # independent of x
        report = kfold_cv(x, y, 10, make_gbdt_trainer(SMALL_PARAMS), seed=0)
        assert report.mean_auc == pytest.approx(0.5, abs=0.05)

    def test_balancer_applies_to_training_only(self):
        """Test folds keep their original size even when training is
        resampled."""
        seen_sizes = []

        def probe_trainer(x_train, y_train, seed):
            seen_sizes.append(len(y_train))
            return lambda x_eval: np.zeros(len(x_eval)) + 0.5

        x, y = signal_dataset(n=120)
        report = kfold_cv(x, y, 4, probe_trainer, seed=0, balancer=BalancerConfig(seed=0))
        # resampling adds synthetics to every training portion
        assert all(size > 90 for size in seen_sizes)
        assert report.k == 4

    def test_report_dict_shape(self):
        report = CVReport([0.5, 0.7], model="gbdt", feature_set="all")
        d = report.to_dict()
        assert set(d) == {"model", "feature_set", "k", "fold_aucs", "mean_auc", "std_auc"}
        assert d["mean_auc"] == pytest.approx(0.6)


class TestAblation:
    def make_data(self, seed=0):
        """22-column layout matching the default registry: only the
        TOXICITY column carries signal."""
        rng = np.random.default_rng(seed)
        n = 260
        y = (rng.random(n) < 0.3).astype(float)
        x = rng.random((n, len(DEFAULT_REGISTRY)))
        tox = DEFAULT_REGISTRY.index_of("TOXICITY")
        x[:, tox] = np.clip(
            np.where(y == 1, rng.normal(0.8, 0.1, n), rng.normal(0.25, 0.1, n)), 0, 1
        )
        compound = DEFAULT_REGISTRY.index_of("vader_compound")
        x[:, compound] = rng.random(n) * 2 - 1
        return x, y

    def test_row_count_and_groups(self):
        x, y = self.make_data()
        groups = default_feature_groups(DEFAULT_REGISTRY.names)
        reports = ablation(x, y, groups, make_gbdt_trainer(SMALL_PARAMS), k=4, seed=0)
        assert len(reports) == len(groups) + 1
        assert [r.feature_set for r in reports] == [
            "all", "toxicity", "sentiment", "hate", "random-baseline",
        ]

    def test_toxicity_only_tracks_full_model(self):
        x, y = self.make_data()
        groups = default_feature_groups(DEFAULT_REGISTRY.names)
        reports = {
            r.feature_set: r
            for r in ablation(x, y, groups, make_gbdt_trainer(SMALL_PARAMS), k=4, seed=0)
        }
        assert reports["all"].mean_auc > 0.9
        assert abs(reports["toxicity"].mean_auc - reports["all"].mean_auc) < 0.02
        assert reports["random-baseline"].mean_auc == pytest.approx(0.5, abs=0.12)

    def test_empty_group_rejected(self):
        x, y = self.make_data()
        with pytest.raises(EvalError, match="empty"):
            ablation(x, y, {"nothing": []}, make_gbdt_trainer(SMALL_PARAMS), k=4, seed=0)

    def test_baseline_trainer_is_featureless(self):
        trainer = make_random_baseline_trainer()
        rng = np.random.default_rng(0)
        y = (rng.random(400) < 0.5).astype(float)
        score = trainer(np.zeros((400, 3)), y, seed=1)
        scored = list(zip(score(np.zeros((400, 3))), y))
        assert auc(scored) == pytest.approx(0.5, abs=0.1)


class TestSweep:
    def test_picks_best_by_mean_auc(self):
        x, y = signal_dataset(n=150)
        grid = {"num_trees": [2, 8], "max_leaves": [3]}
        best, results = sweep(
            x, y, grid, k=3, seed=0,
            base_params=TrainParams(min_samples_leaf=5),
        )
        assert len(results) == 2
        best_report = max(results, key=lambda pair: pair[1].mean_auc)[1]
        chosen = [r for p, r in results if p == best][0]
        assert chosen.mean_auc == best_report.mean_auc


class TestKde:
    def test_single_kernel_mode_at_score(self):
        curves = kde_report({"only": [0.5]}, bandwidth=0.05)
        peak = curves.grid[np.argmax(curves.densities["only"])]
        assert peak == pytest.approx(0.5, abs=1 / 511)

    def test_densities_integrate_to_one(self):
        rng = np.random.default_rng(2)
        curves = kde_report({
            "hateful": np.clip(rng.normal(0.7, 0.15, 50), 0, 1),
            "not_hateful": np.clip(rng.normal(0.2, 0.1, 200), 0, 1),
        })
        for label in ("hateful", "not_hateful"):
            assert curves.integral(label) == pytest.approx(1.0, abs=0.01)

    def test_separated_clusters_density_ratio(self):
        rng = np.random.default_rng(3)
        hateful = np.clip(rng.normal(0.9, 0.02, 80), 0, 1)
        not_hateful = np.clip(rng.normal(0.1, 0.02, 80), 0, 1)
        curves = kde_report({"hateful": hateful, "not_hateful": not_hateful})
        at_09 = np.argmin(np.abs(curves.grid - 0.9))
        ratio = curves.densities["hateful"][at_09] / max(
            curves.densities["not_hateful"][at_09], 1e-300
        )
        assert ratio >= 10

    def test_zero_variance_requires_bandwidth(self):
        with pytest.raises(EvalError, match="bandwidth"):
            kde_report({"flat": [0.4, 0.4, 0.4]})
        curves = kde_report({"flat": [0.4, 0.4, 0.4]}, bandwidth=0.02)
        assert curves.integral("flat") == pytest.approx(1.0, abs=0.01)

    def test_empty_class_rejected(self):
        with pytest.raises(EvalError, match="no scores"):
            kde_report({"empty": []})

    def test_histogram_shape(self):
        curves = kde_report({"c": np.linspace(0.1, 0.9, 30)})
        edges, counts = curves.histograms["c"]
        assert len(edges) == 41 and len(counts) == 40

    def test_scott_rule(self):
        scores = np.array([0.2, 0.4, 0.6, 0.8])
        expected = np.std(scores, ddof=1) * 4 ** (-0.2)
        assert scott_bandwidth(scores) == pytest.approx(expected)
