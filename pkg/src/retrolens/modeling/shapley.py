"""Shapley attributions against a single background reference point (the
training-row feature means).

For trees the attribution is exact and polynomial-time: every coalition's
value is the tree evaluated on a composite point (present features from
the instance x, absent ones from the reference z), so each leaf's
contribution depends only on how many path features require x (a) and how
many require z (b). The per-leaf coefficients are Shapley-kernel sums
computed exactly with rational arithmetic.

Linear models use the closed form phi_f = w_f (x_f - z_f). The perceptron
uses permutation sampling (seeded), whose telescoping sums already satisfy
local accuracy up to float error; the tiny residual is still redistributed
proportionally to |phi| so the invariant holds bit-for-bit and the raw
residual is kept for audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from ..errors import UnfittedModel
from .models import GradientBoostedModel, LinearModel, PerceptronModel, RandomForestModel, RegressionTree

N_PERMUTATIONS = 200


@dataclass
class ShapResult:
    values: np.ndarray        # (rows, features)
    base_value: float         # model prediction at the reference point
    method: str               # closed_form | tree_exact | permutation_sampling
    standard_errors: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)


@lru_cache(maxsize=32)
def _coefficient_table(n_features: int) -> tuple[tuple[float, ...], ...]:
    """G[q][m] = sum_t C(m, t) * w(q + t) with w(s) = s!(F-s-1)!/F!,
    exact via fractions then rounded once to float."""
    f_total = factorial(n_features)
    w = [Fraction(factorial(s) * factorial(n_features - s - 1), f_total) for s in range(n_features)]
    table = []
    for q in range(n_features):
        row = [
            float(sum(Fraction(comb(m, t)) * w[q + t] for t in range(m + 1)))
            for m in range(n_features - q)
        ]
        table.append(tuple(row))
    return tuple(table)


def _tree_shap_single_reference(
    tree: RegressionTree, x: np.ndarray, z: np.ndarray, phi: np.ndarray, scale: float
) -> None:
    n_features = len(x)
    G = _coefficient_table(n_features)

    def recurse(node: int, state: dict[int, tuple[bool, bool]]) -> None:
        f = tree.feature[node]
        if f < 0:
            u = [feat for feat, (x_ok, z_ok) in state.items() if x_ok and not z_ok]
            v = [feat for feat, (x_ok, z_ok) in state.items() if z_ok and not x_ok]
            a, b = len(u), len(v)
            m = n_features - a - b
            leaf = tree.value[node] * scale
            if u:
                coef = G[a - 1][m]
                for feat in u:
                    phi[feat] += leaf * coef
            if v:
                coef = G[a][m]
                for feat in v:
                    phi[feat] -= leaf * coef
            return
        t = tree.threshold[node]
        x_left = x[f] <= t
        z_left = z[f] <= t
        prev = state.get(f, (True, True))
        for child, x_ok, z_ok in (
            (tree.left[node], x_left, z_left),
            (tree.right[node], not x_left, not z_left),
        ):
            nxt = (prev[0] and x_ok, prev[1] and z_ok)
            if not nxt[0] and not nxt[1]:
                continue  # blocked for x and z alike: no coalition reaches it
            child_state = dict(state)
            child_state[f] = nxt
            recurse(child, child_state)

    recurse(0, {})


def _attribute_trees(model, X: np.ndarray, z: np.ndarray) -> ShapResult:
    values = np.zeros_like(X, dtype=float)
    scaled = model.scaled_trees()
    for i, x in enumerate(X):
        for tree, scale in scaled:
            _tree_shap_single_reference(tree, x, z, values[i], scale)
    return ShapResult(values=values, base_value=float(model.predict(z[None, :])[0]), method="tree_exact")


def _attribute_linear(model: LinearModel, X: np.ndarray, z: np.ndarray) -> ShapResult:
    if model.coef_ is None:
        raise UnfittedModel("linear model not fitted")
    values = (X - z) * model.coef_
    return ShapResult(values=values, base_value=float(model.predict(z[None, :])[0]), method="closed_form")


def _attribute_sampling(model, X: np.ndarray, z: np.ndarray, seed: int) -> ShapResult:
    rng = np.random.default_rng(seed)
    rows, n_features = X.shape
    contrib = np.zeros((N_PERMUTATIONS, rows, n_features))
    base = float(model.predict(z[None, :])[0])
    for p in range(N_PERMUTATIONS):
        perm = rng.permutation(n_features)
        cur = np.tile(z, (rows, 1))
        prev = np.full(rows, base)
        for j in perm:
            cur[:, j] = X[:, j]
            val = model.predict(cur)
            contrib[p, :, j] = val - prev
            prev = val
    values = contrib.mean(axis=0)
    se = contrib.std(axis=0, ddof=1) / np.sqrt(N_PERMUTATIONS)

    # telescoping already gives base + sum(phi) = f(x) up to float error;
    # spread that residual so local accuracy is exact, keep it for audit
    target = model.predict(X) - base
    residual = target - values.sum(axis=1)
    for i in range(rows):
        weights = np.abs(values[i])
        total = weights.sum()
        if total > 0:
            values[i] += residual[i] * weights / total
        else:
            values[i] += residual[i] / n_features
    return ShapResult(
        values=values, base_value=base, method="permutation_sampling",
        standard_errors=se,
        metadata={"raw_residual_max_abs": float(np.max(np.abs(residual))), "n_permutations": N_PERMUTATIONS},
    )


def shapley_attribution(model, X: np.ndarray, background: np.ndarray, seed: int = 0) -> ShapResult:
    """Attribute every row of X against the background reference."""
    z = np.asarray(background, dtype=float)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(model, LinearModel):
        return _attribute_linear(model, X, z)
    if isinstance(model, (RandomForestModel, GradientBoostedModel)):
        if not model.trees:
            raise UnfittedModel(f"{model.kind} not fitted")
        return _attribute_trees(model, X, z)
    if isinstance(model, PerceptronModel):
        if not model._fitted:
            raise UnfittedModel("perceptron not fitted")
        return _attribute_sampling(model, X, z, seed)
    raise ValueError(f"no attribution strategy for {type(model).__name__}")
