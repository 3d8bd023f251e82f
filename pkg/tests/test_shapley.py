"""Attribution tests, anchored by a brute-force oracle: exact Shapley via
2^F subset enumeration with absent features marginalized to the single
background reference."""

from fractions import Fraction
from itertools import combinations
from math import factorial

import numpy as np
import pytest

from retrolens.modeling import (
    GradientBoostedModel,
    LinearModel,
    PerceptronModel,
    RandomForestModel,
    RegressionTree,
    shapley_attribution,
)


def brute_force_shapley(predict, x, z):
    """phi_i = sum over subsets S of F\\{i} of w(|S|) [v(S+i) - v(S)]."""
    n = len(x)
    weights = {
        s: float(Fraction(factorial(s) * factorial(n - s - 1), factorial(n)))
        for s in range(n)
    }

    def value(subset):
        point = z.copy()
        point[list(subset)] = x[list(subset)]
        return float(predict(point[None, :])[0])

    values = {}
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            values[subset] = value(subset)

    phi = np.zeros(n)
    for i in range(n):
        rest = [j for j in range(n) if j != i]
        for size in range(n):
            for subset in combinations(rest, size):
                with_i = tuple(sorted(subset + (i,)))
                phi[i] += weights[size] * (values[with_i] - values[subset])
    return phi


def make_dataset(seed=0, n=48, f=6):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, f))
    y = (
        2.0 * X[:, 0]
        - 1.5 * X[:, 1]
        + np.where(X[:, 2] > 0, 3.0, -1.0)
        + 0.5 * X[:, 3] * X[:, 4]
        + rng.normal(0, 0.1, n)
    )
    return X, y


# -- closed forms -----------------------------------------------------------------


def test_linear_closed_form_example():
    model = LinearModel()
    model.coef_ = np.array([2.0, -1.0])
    model.intercept_ = 0.0
    x = np.array([[3.0, 4.0]])
    means = np.array([1.0, 1.0])
    result = shapley_attribution(model, x, means)
    assert np.allclose(result.values[0], [4.0, -3.0])
    assert result.base_value == pytest.approx(model.predict(means[None, :])[0])


def _leaf_tree(feature, threshold, left_value, right_value):
    tree = RegressionTree(max_depth=1)
    tree.feature = [feature, -1, -1]
    tree.threshold = [threshold, 0.0, 0.0]
    tree.left = [1, -1, -1]
    tree.right = [2, -1, -1]
    tree.value = [0.0, left_value, right_value]
    return tree


def test_depth_one_tree_null_players():
    forest = RandomForestModel(n_trees=1)
    forest.trees = [_leaf_tree(1, 0.5, 2.0, 10.0)]
    x = np.array([[0.3, 0.9, 0.1, 0.7]])
    z = np.array([0.5, 0.2, 0.5, 0.5])
    result = shapley_attribution(forest, x, z)
    assert result.values[0][0] == 0.0
    assert result.values[0][2] == 0.0
    assert result.values[0][3] == 0.0
    # x goes right (10), z goes left (2): the split feature carries it all
    assert result.values[0][1] == pytest.approx(8.0)


def test_symmetric_tree_symmetric_attribution():
    # f(x) = [x0 > 0.5] + [x1 > 0.5], built as a mirrored two-level tree
    tree = RegressionTree(max_depth=2)
    tree.feature = [0, 1, 1, -1, -1, -1, -1]
    tree.threshold = [0.5, 0.5, 0.5, 0, 0, 0, 0]
    tree.left = [1, 3, 5, -1, -1, -1, -1]
    tree.right = [2, 4, 6, -1, -1, -1, -1]
    tree.value = [0, 0, 0, 0.0, 1.0, 1.0, 2.0]
    forest = RandomForestModel(n_trees=1)
    forest.trees = [tree]
    x = np.array([[1.0, 1.0]])
    z = np.array([0.0, 0.0])
    result = shapley_attribution(forest, x, z)
    assert result.values[0][0] == result.values[0][1]
    assert result.values[0].sum() == pytest.approx(2.0)


# -- oracle equivalence -------------------------------------------------------------


def test_tree_families_match_brute_force():
    X, y = make_dataset()
    z = X[:30].mean(axis=0)
    rows = X[::12]
    for model in (
        RandomForestModel(n_trees=20, max_depth=4, seed=3).fit(X, y),
        GradientBoostedModel(n_rounds=40, max_depth=3, seed=3).fit(X, y),
    ):
        result = shapley_attribution(model, rows, z)
        for i, x in enumerate(rows):
            oracle = brute_force_shapley(model.predict, x.copy(), z.copy())
            assert np.allclose(result.values[i], oracle, atol=1e-6), type(model).__name__
        assert result.method == "tree_exact"


def test_linear_matches_brute_force():
    X, y = make_dataset(seed=1)
    model = LinearModel(seed=0).fit(X, y)
    z = X.mean(axis=0)
    rows = X[:3]
    result = shapley_attribution(model, rows, z)
    for i, x in enumerate(rows):
        oracle = brute_force_shapley(model.predict, x.copy(), z.copy())
        assert np.allclose(result.values[i], oracle, atol=1e-6)


def test_sampled_perceptron_within_three_standard_errors():
    X, y = make_dataset(seed=2)
    model = PerceptronModel(seed=0).fit(X, y)
    z = X.mean(axis=0)
    rows = X[:2]
    within = 0
    total = 0
    for seed in range(20):
        result = shapley_attribution(model, rows, z, seed=seed)
        for i, x in enumerate(rows):
            oracle = brute_force_shapley(model.predict, x.copy(), z.copy())
            err = np.abs(result.values[i] - oracle)
            bound = 3 * result.standard_errors[i] + 1e-12
            within += int((err <= bound).sum())
            total += len(x)
    assert within / total >= 0.95


# -- local accuracy ------------------------------------------------------------------


@pytest.mark.parametrize("family", ["linear", "random_forest", "gradient_boosted", "perceptron"])
def test_local_accuracy(family):
    from retrolens.modeling import make_family

    X, y = make_dataset(seed=4)
    model = make_family(family, seed=9).fit(X, y)
    z = X.mean(axis=0)
    result = shapley_attribution(model, X[:6], z, seed=1)
    reconstructed = result.base_value + result.values.sum(axis=1)
    assert np.allclose(reconstructed, model.predict(X[:6]), atol=1e-6)


def test_null_player_constant_feature():
    X, y = make_dataset(seed=5)
    X[:, 3] = 2.0  # constant in data and background
    z = X.mean(axis=0)
    for family in ("linear", "random_forest", "gradient_boosted"):
        from retrolens.modeling import make_family

        model = make_family(family, seed=1).fit(X, y)
        result = shapley_attribution(model, X[:4], z)
        assert np.all(result.values[:, 3] == 0.0), family
    model = PerceptronModel(seed=1).fit(X, y)
    result = shapley_attribution(model, X[:4], z, seed=0)
    bound = 3 * result.standard_errors[:, 3] + 1e-12
    assert np.all(np.abs(result.values[:, 3]) <= bound)


def test_sampling_residual_is_recorded():
    X, y = make_dataset(seed=6)
    model = PerceptronModel(seed=2).fit(X, y)
    result = shapley_attribution(model, X[:2], X.mean(axis=0), seed=3)
    assert "raw_residual_max_abs" in result.metadata
    assert result.metadata["raw_residual_max_abs"] < 1e-9  # telescoping sums
