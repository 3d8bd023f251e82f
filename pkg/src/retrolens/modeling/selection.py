"""Chronological 7:3 evaluation of the four families, composite scoring,
and winner selection.

The composite score is the mean of min-max-normalized MAE and MAPE across
the four families (normalization reconciles an absolute metric with a
relative one); ties resolve in family order. MAPE excludes test points
with |y| < 1e-9 and reports how many were excluded; if every point is
excluded the composite falls back to MAE alone and the run is flagged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TooFewRows, UnsortedStream
from ..fusion.vectors import ModelMatrix
from .models import FAMILY_ORDER, make_family

MAPE_EXCLUSION_EPS = 1e-9


@dataclass
class FamilyReport:
    model: str
    mae: float
    mape: float | None          # percent; None when undefined
    composite: float = 0.0
    mape_excluded_points: int = 0
    test_predictions: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model": self.model, "mae": self.mae, "mape": self.mape,
            "composite": self.composite, "mape_excluded_points": self.mape_excluded_points,
            "test_predictions": self.test_predictions,
        }


def mae_mape(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[float, float | None, int]:
    """(MAE, MAPE percent or None, number of points excluded from MAPE)."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    mae = float(np.mean(np.abs(y_pred - y_true)))
    keep = np.abs(y_true) >= MAPE_EXCLUSION_EPS
    excluded = int(np.sum(~keep))
    if not np.any(keep):
        return mae, None, excluded
    mape = float(100.0 * np.mean(np.abs(y_pred[keep] - y_true[keep]) / np.abs(y_true[keep])))
    return mae, mape, excluded


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def score_reports(reports: list[FamilyReport]) -> tuple[str, bool]:
    """Fill composites in place; returns (winner family, mape_undefined)."""
    mae = np.array([r.mae for r in reports])
    norm_mae = _minmax(mae)
    mape_undefined = any(r.mape is None for r in reports)
    if mape_undefined:
        composites = norm_mae
    else:
        composites = (norm_mae + _minmax(np.array([r.mape for r in reports]))) / 2.0
    for r, c in zip(reports, composites):
        r.composite = float(c)
    winner_idx = min(range(len(reports)), key=lambda i: (reports[i].composite, i))
    return reports[winner_idx].model, mape_undefined


@dataclass
class FitResult:
    reports: list[FamilyReport]
    winner: str
    winner_model: object               # refit on all rows
    predictions: np.ndarray            # winner predictions, all rows
    background: np.ndarray             # training-row feature means
    train_rows: int
    mape_undefined: bool
    family_seeds: dict[str, int] = field(default_factory=dict)


def fit_and_select(matrix: ModelMatrix, seed: int) -> FitResult:
    """Chronological 70/30 split, per-family metrics, composite winner,
    and a winner refit on all rows for attribution."""
    n = len(matrix.y)
    if n < 10:
        raise TooFewRows(f"need >= 10 rows, got {n}")
    if np.any(np.diff(matrix.minute_ts) <= 0):
        raise UnsortedStream("model matrix rows must be time-sorted")

    k = int(n * 0.7)
    X_train, y_train = matrix.X[:k], matrix.y[:k]
    X_test, y_test = matrix.X[k:], matrix.y[k:]

    seeds = np.random.SeedSequence(seed).spawn(len(FAMILY_ORDER))
    family_seeds = {
        name: int(s.generate_state(1)[0]) for name, s in zip(FAMILY_ORDER, seeds)
    }

    reports = []
    for name in FAMILY_ORDER:
        model = make_family(name, family_seeds[name]).fit(X_train, y_train)
        test_pred = model.predict(X_test)
        mae, mape, excluded = mae_mape(y_test, test_pred)
        reports.append(FamilyReport(
            model=name, mae=mae, mape=mape, mape_excluded_points=excluded,
            test_predictions=[float(v) for v in test_pred],
        ))

    winner, mape_undefined = score_reports(reports)
    winner_model = make_family(winner, family_seeds[winner]).fit(matrix.X, matrix.y)
    return FitResult(
        reports=reports,
        winner=winner,
        winner_model=winner_model,
        predictions=winner_model.predict(matrix.X),
        background=X_train.mean(axis=0),
        train_rows=k,
        mape_undefined=mape_undefined,
        family_seeds=family_seeds,
    )
