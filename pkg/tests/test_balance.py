import numpy as np
import pytest

from counterspeech.balance import BalanceError, BalancerConfig, adasyn, nearest_neighbors


def brute_force_knn(points, queries, k, exclude=None):
    """Independent all-pairs oracle: sort by (distance, index), skip self."""
    out = []
    for qi, q in enumerate(queries):
        ranked = []
        for pi, p in enumerate(points):
            if exclude is not None and pi == exclude[qi]:
                continue
            ranked.append((float(((q - p) ** 2).sum()), pi))
        ranked.sort()
        out.append([pi for _, pi in ranked[:k]])
    return np.array(out)


def on_segment(s, a, b, tol=1e-9):
    """True iff s lies on the closed segment [a, b]."""
    ab = b - a
    asv = s - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return bool(np.allclose(s, a, atol=tol))
    t = float(asv @ ab) / denom
    if not -tol <= t <= 1 + tol:
        return False
    return bool(np.allclose(a + t * ab, s, atol=tol))


def toy_dataset():
    rng = np.random.default_rng(5)
    majority = rng.normal(0.0, 0.05, size=(8, 2))
    minority = np.array([[1.0, 1.0], [1.1, 0.9]])
    x = np.vstack([majority, minority])
    y = np.array([0] * 8 + [1] * 2)
    return x, y


class TestKnn:
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force_oracle(self, seed):
        rng = np.random.default_rng(seed)
        points = rng.random((60, 4))
        exclude = np.arange(60)
        mine = nearest_neighbors(points, points, 5, exclude=exclude)
        oracle = brute_force_knn(points, points, 5, exclude=exclude)
        np.testing.assert_array_equal(mine, oracle)

    def test_ties_break_to_lower_index(self):
        points = np.array([[0.0], [1.0], [1.0], [1.0]])
        nn = nearest_neighbors(points, points[:1], 2, exclude=np.array([0]))
        np.testing.assert_array_equal(nn, [[1, 2]])


class TestAdasyn:
    def test_balanced_input_unchanged(self):
        x = np.random.default_rng(0).random((10, 3))
        y = np.array([0] * 5 + [1] * 5)
        out_x, out_y = adasyn(x, y, BalancerConfig())
        np.testing.assert_array_equal(out_x, x)
        np.testing.assert_array_equal(out_y, y)

    def test_single_class_rejected(self):
        x = np.zeros((4, 2))
        with pytest.raises(BalanceError):
            adasyn(x, np.zeros(4, dtype=int))

    def test_toy_dataset_against_hand_arithmetic(self):
        """8 majority at the origin, 2 minority far away: every budget
        formula term is recomputed here from the brute-force oracle."""
        x, y = toy_dataset()
        cfg = BalancerConfig(k=5, beta=1.0, seed=3)
        out_x, out_y = adasyn(x, y, cfg)

        budget = (8 - 2) * 1.0
        assert budget == 6.0
        minority_idx = np.flatnonzero(y == 1)
        oracle_nn = brute_force_knn(x, x[minority_idx], 5, exclude=minority_idx)
        delta = np.array([(y[nn] == 0).sum() for nn in oracle_nn])
        r = delta / 5
        r_hat = r / r.sum()
        expected_g = [round(v) for v in r_hat * budget]
        n_synthetic = len(out_y) - len(y)
        assert n_synthetic == sum(expected_g)
        assert (out_y[len(y):] == 1).all()

    def test_synthetics_on_minority_segments(self):
        x, y = toy_dataset()
        cfg = BalancerConfig(k=5, beta=1.0, seed=11)
        out_x, out_y = adasyn(x, y, cfg)
        minority = x[y == 1]
        for s in out_x[len(y):]:
            assert any(
                on_segment(s, a, b) for a in minority for b in minority
            )

    def test_lambda_zero_duplicates_seed_point(self):
        """With a single minority point there is no interpolation partner:
        every synthetic must coincide with its seed."""
        x = np.vstack([np.random.default_rng(1).random((6, 2)), [[5.0, 5.0]]])
        y = np.array([0] * 6 + [1])
        out_x, out_y = adasyn(x, y, BalancerConfig(k=3, beta=1.0, seed=0))
        for s in out_x[len(y):]:
            np.testing.assert_array_equal(s, [5.0, 5.0])

    def test_deterministic_under_seed(self):
        rng = np.random.default_rng(9)
        x = rng.random((40, 6))
        y = (rng.random(40) < 0.25).astype(int)
        if y.sum() in (0, 40):
            y[0] = 1 - y[0]
        a = adasyn(x, y, BalancerConfig(seed=21))
        b = adasyn(x, y, BalancerConfig(seed=21))
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_uniform_fallback_when_no_majority_neighbors(self):
        """Minority cluster so tight that all k-NN of minority points are
        minority: r sums to zero, budget spreads uniformly."""
        minority = np.array([[10.0, 10.0], [10.01, 10.0], [10.0, 10.01], [10.01, 10.01]])
        majority = np.random.default_rng(2).normal(0, 0.1, (12, 2))
        x = np.vstack([majority, minority])
        y = np.array([0] * 12 + [1] * 4)
        out_x, out_y = adasyn(x, y, BalancerConfig(k=3, beta=1.0, seed=1))
        # budget 8, uniform 1/4 each -> every minority point contributes 2
        assert len(out_y) - len(y) == 8

    @pytest.mark.parametrize("seed", range(8))
    def test_minority_count_lands_within_slack(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(20, 120))
        x = rng.random((n, 5))
        y = (rng.random(n) < 0.3).astype(int)
        if y.sum() == 0 or y.sum() == n:
            y[:2] = [0, 1]
        m_s = int(min(y.sum(), n - y.sum()))
        m_l = n - m_s
        out_x, out_y = adasyn(x, y, BalancerConfig(seed=seed))
        new_minority = m_s + (len(out_y) - len(y))
        assert abs(new_minority - m_l) <= m_s
