"""The four forecaster families, implemented directly over numpy so tree
internals stay available to the attribution layer and every fit is
deterministic under its seed.

Families (selection order for ties): regularized linear, random forest
(bagged CART, 100 trees, depth <= 6), gradient-boosted trees (200 rounds,
depth <= 3, shrinkage 0.1, squared loss), and a single-hidden-layer
perceptron (32 tanh units, full-batch gradient descent, fixed epochs).
"""

from __future__ import annotations

import numpy as np

from ..errors import UnfittedModel

FAMILY_ORDER = ("linear", "random_forest", "gradient_boosted", "perceptron")


class RegressionTree:
    """CART regression tree minimizing squared error."""

    def __init__(self, max_depth: int, min_samples_leaf: int = 1):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        # parallel node arrays; feature == -1 marks a leaf
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RegressionTree":
        self._build(X, y, depth=0)
        return self

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _build(self, X: np.ndarray, y: np.ndarray, depth: int) -> int:
        node = self._new_node()
        self.value[node] = float(y.mean())
        if depth >= self.max_depth or len(y) < 2 * self.min_samples_leaf or np.ptp(y) == 0.0:
            return node
        split = self._best_split(X, y)
        if split is None:
            return node
        f, t = split
        mask = X[:, f] <= t
        self.feature[node] = f
        self.threshold[node] = t
        self.left[node] = self._build(X[mask], y[mask], depth + 1)
        self.right[node] = self._build(X[~mask], y[~mask], depth + 1)
        return node

    def _best_split(self, X: np.ndarray, y: np.ndarray):
        n = len(y)
        best = None
        best_sse = np.sum((y - y.mean()) ** 2)
        for f in range(X.shape[1]):
            order = np.argsort(X[:, f], kind="stable")
            xs, ys = X[order, f], y[order]
            csum = np.cumsum(ys)
            csq = np.cumsum(ys * ys)
            total, total_sq = csum[-1], csq[-1]
            for k in range(self.min_samples_leaf, n - self.min_samples_leaf + 1):
                if k < 1 or k >= n or xs[k - 1] == xs[k]:
                    continue
                left_sse = csq[k - 1] - csum[k - 1] ** 2 / k
                right_sum = total - csum[k - 1]
                right_sse = (total_sq - csq[k - 1]) - right_sum ** 2 / (n - k)
                sse = left_sse + right_sse
                if sse < best_sse - 1e-12:
                    best_sse = sse
                    best = (f, (xs[k - 1] + xs[k]) / 2.0)
        return best

    def predict_one(self, x: np.ndarray) -> float:
        node = 0
        while self.feature[node] >= 0:
            node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
        return self.value[node]

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict_one(x) for x in np.atleast_2d(X)])


class LinearModel:
    """Ridge regression on standardized features; coefficients are exposed
    in original units for the closed-form attribution."""

    kind = "linear"

    def __init__(self, alpha: float = 0.1, seed: int = 0):
        self.alpha = alpha
        self.seed = seed
        self.coef_: np.ndarray | None = None
        self.intercept_: float = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearModel":
        mu = X.mean(axis=0)
        sigma = X.std(axis=0)
        sigma[sigma == 0] = 1.0
        Xs = (X - mu) / sigma
        y_mean = y.mean()
        w = np.linalg.solve(Xs.T @ Xs + self.alpha * np.eye(X.shape[1]), Xs.T @ (y - y_mean))
        self.coef_ = w / sigma
        self.intercept_ = float(y_mean - self.coef_ @ mu)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.coef_ is None:
            raise UnfittedModel("linear model not fitted")
        return np.atleast_2d(X) @ self.coef_ + self.intercept_


class RandomForestModel:
    kind = "random_forest"

    def __init__(self, n_trees: int = 100, max_depth: int = 6, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.seed = seed
        self.trees: list[RegressionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestModel":
        rng = np.random.default_rng(self.seed)
        n = len(y)
        self.trees = []
        for _ in range(self.n_trees):
            idx = rng.integers(0, n, n)
            self.trees.append(RegressionTree(self.max_depth).fit(X[idx], y[idx]))
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self.trees:
            raise UnfittedModel("forest not fitted")
        return np.mean([t.predict(X) for t in self.trees], axis=0)

    def scaled_trees(self) -> list[tuple[RegressionTree, float]]:
        return [(t, 1.0 / len(self.trees)) for t in self.trees]

    def base_offset(self) -> float:
        return 0.0


class GradientBoostedModel:
    kind = "gradient_boosted"

    def __init__(self, n_rounds: int = 200, max_depth: int = 3, shrinkage: float = 0.1, seed: int = 0):
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.shrinkage = shrinkage
        self.seed = seed
        self.init_: float = 0.0
        self.trees: list[RegressionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GradientBoostedModel":
        self.init_ = float(y.mean())
        pred = np.full(len(y), self.init_)
        self.trees = []
        for _ in range(self.n_rounds):
            tree = RegressionTree(self.max_depth).fit(X, y - pred)
            pred = pred + self.shrinkage * tree.predict(X)
            self.trees.append(tree)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self.trees:
            raise UnfittedModel("boosted model not fitted")
        X = np.atleast_2d(X)
        pred = np.full(len(X), self.init_)
        for tree in self.trees:
            pred = pred + self.shrinkage * tree.predict(X)
        return pred

    def scaled_trees(self) -> list[tuple[RegressionTree, float]]:
        return [(t, self.shrinkage) for t in self.trees]

    def base_offset(self) -> float:
        return self.init_


class PerceptronModel:
    """One hidden tanh layer; inputs and target are standardized on fit."""

    kind = "perceptron"

    def __init__(self, hidden: int = 32, epochs: int = 800, lr: float = 0.05, seed: int = 0):
        self.hidden = hidden
        self.epochs = epochs
        self.lr = lr
        self.seed = seed
        self._fitted = False
        self._constant: float | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "PerceptronModel":
        self._fitted = True
        if np.ptp(y) == 0.0:
            self._constant = float(y[0]) if len(y) else 0.0
            return self
        self._constant = None
        rng = np.random.default_rng(self.seed)
        self.x_mu = X.mean(axis=0)
        self.x_sigma = X.std(axis=0)
        self.x_sigma[self.x_sigma == 0] = 1.0
        self.y_mu = y.mean()
        self.y_sigma = y.std()
        Xs = (X - self.x_mu) / self.x_sigma
        ys = (y - self.y_mu) / self.y_sigma
        n, f = Xs.shape
        self.W1 = rng.normal(0.0, 1.0 / np.sqrt(f), (f, self.hidden))
        self.b1 = np.zeros(self.hidden)
        self.w2 = rng.normal(0.0, 1.0 / np.sqrt(self.hidden), self.hidden)
        self.b2 = 0.0
        for _ in range(self.epochs):
            H = np.tanh(Xs @ self.W1 + self.b1)
            out = H @ self.w2 + self.b2
            err = (out - ys) / n
            grad_w2 = H.T @ err
            grad_b2 = err.sum()
            back = np.outer(err, self.w2) * (1.0 - H * H)
            grad_W1 = Xs.T @ back
            grad_b1 = back.sum(axis=0)
            self.w2 -= self.lr * grad_w2
            self.b2 -= self.lr * grad_b2
            self.W1 -= self.lr * grad_W1
            self.b1 -= self.lr * grad_b1
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self._fitted:
            raise UnfittedModel("perceptron not fitted")
        X = np.atleast_2d(X)
        if self._constant is not None:
            return np.full(len(X), self._constant)
        Xs = (X - self.x_mu) / self.x_sigma
        out = np.tanh(Xs @ self.W1 + self.b1) @ self.w2 + self.b2
        return out * self.y_sigma + self.y_mu


def make_family(name: str, seed: int):
    if name == "linear":
        return LinearModel(seed=seed)
    if name == "random_forest":
        return RandomForestModel(seed=seed)
    if name == "gradient_boosted":
        return GradientBoostedModel(seed=seed)
    if name == "perceptron":
        return PerceptronModel(seed=seed)
    raise ValueError(f"unknown family {name!r}")
