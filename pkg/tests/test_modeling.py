import numpy as np
import pytest

from retrolens.corpus.synth import NOISE_SIGMA, TARGET
from retrolens.errors import TooFewRows, UnsortedStream
from retrolens.fusion import build_grid, build_model_matrix
from retrolens.fusion.vectors import ModelMatrix
from retrolens.modeling import (
    FAMILY_ORDER,
    FamilyReport,
    execute_model_run,
    fit_and_select,
    mae_mape,
    make_family,
    score_reports,
)


def make_matrix(X, y, clip_id="unit:b0", target="gpm"):
    n, f = X.shape
    names = [f"f{i}" for i in range(f)]
    return ModelMatrix(
        clip_id=clip_id, target=target, feature_names=names,
        X=np.asarray(X, dtype=float), y=np.asarray(y, dtype=float),
        minute_ts=np.arange(n) * 60 + 1_000_000_800,
        channel_by_feature={name: "feedback" for name in names},
    )


# -- metrics -----------------------------------------------------------------


def test_mae_mape_hand_example():
    mae, mape, excluded = mae_mape(np.array([1.0, 2.0, 5.0]), np.array([1.0, 2.0, 3.0]))
    assert mae == (0 + 0 + 2) / 3
    assert mape == 100 * np.mean([0.0, 0.0, 2 / 5])
    assert mape == pytest.approx(40 / 3, rel=1e-12)
    assert excluded == 0


def test_mape_excludes_near_zero_targets():
    mae, mape, excluded = mae_mape(np.array([0.0, 2.0]), np.array([1.0, 2.2]))
    assert excluded == 1
    assert mape == pytest.approx(10.0)


def test_mape_undefined_when_all_zero():
    mae, mape, excluded = mae_mape(np.zeros(3), np.ones(3))
    assert mape is None
    assert excluded == 3
    assert mae == 1.0


# -- composite selection ----------------------------------------------------------


def _reports(maes, mapes):
    return [
        FamilyReport(model=name, mae=m, mape=p)
        for name, m, p in zip(FAMILY_ORDER, maes, mapes)
    ]


def test_score_minimal_composite_wins():
    reports = _reports([1.0, 2.0, 3.0, 4.0], [10.0, 20.0, 30.0, 40.0])
    winner, undefined = score_reports(reports)
    assert winner == "linear"
    assert not undefined
    assert reports[0].composite == 0.0
    assert reports[3].composite == 1.0


def test_score_tie_breaks_in_family_order():
    # normalized mae [0, 1/3, 2/3, 1], normalized mape reversed -> all 0.5
    reports = _reports([1.0, 2.0, 3.0, 4.0], [40.0, 30.0, 20.0, 10.0])
    winner, _ = score_reports(reports)
    assert all(r.composite == pytest.approx(0.5) for r in reports)
    assert winner == "linear"


def test_score_mixed_metrics():
    reports = _reports([4.0, 1.0, 2.0, 3.0], [10.0, 40.0, 20.0, 5.0])
    winner, _ = score_reports(reports)
    composites = [r.composite for r in reports]
    assert winner == reports[int(np.argmin(composites))].model


def test_score_with_undefined_mape_uses_mae():
    reports = _reports([2.0, 1.0, 3.0, 4.0], [None, None, None, None])
    winner, undefined = score_reports(reports)
    assert undefined
    assert winner == "random_forest"


# -- fit_and_select ----------------------------------------------------------------


def test_too_few_rows():
    X = np.zeros((5, 3))
    with pytest.raises(TooFewRows):
        fit_and_select(make_matrix(X, np.zeros(5)), seed=0)


def test_shuffled_rows_rejected():
    rng = np.random.default_rng(0)
    matrix = make_matrix(rng.normal(size=(20, 3)), rng.normal(size=20))
    matrix.minute_ts = matrix.minute_ts[::-1].copy()
    with pytest.raises(UnsortedStream):
        fit_and_select(matrix, seed=0)


def test_constant_target_predicted_exactly():
    rng = np.random.default_rng(1)
    matrix = make_matrix(rng.normal(size=(20, 4)), np.full(20, 7.5))
    fit = fit_and_select(matrix, seed=3)
    for name in FAMILY_ORDER:
        model = make_family(name, 0).fit(matrix.X[:14], matrix.y[:14])
        assert np.allclose(model.predict(matrix.X[14:]), 7.5, atol=1e-6), name
    assert all(r.mae <= 1e-6 for r in fit.reports)


def test_fit_is_deterministic():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(30, 5))
    y = X @ np.array([1.0, -2.0, 0.5, 0.0, 3.0]) + rng.normal(0, 0.1, 30)
    a = fit_and_select(make_matrix(X, y), seed=11)
    b = fit_and_select(make_matrix(X, y), seed=11)
    assert [r.composite for r in a.reports] == [r.composite for r in b.reports]
    assert np.array_equal(a.predictions, b.predictions)
    assert a.winner == b.winner


def test_chronological_split_is_70_30():
    rng = np.random.default_rng(3)
    matrix = make_matrix(rng.normal(size=(30, 3)), rng.normal(size=30))
    fit = fit_and_select(matrix, seed=0)
    assert fit.train_rows == 21


def test_linear_ground_truth_recovery(long_features, classifier):
    """Known linear generator: the linear family wins and its test error
    stays within the generator's noise level."""
    grid = build_grid(long_features.clip, 1)
    matrix = build_model_matrix(long_features, grid, TARGET)
    fit = fit_and_select(matrix, seed=7)
    assert fit.winner == "linear"
    linear_report = next(r for r in fit.reports if r.model == "linear")
    assert linear_report.mae <= NOISE_SIGMA


def test_model_run_serialization_round_trip(features):
    from retrolens.modeling import ModelRun

    grid = build_grid(features.clip, 1)
    matrix = build_model_matrix(features, grid, "likes")
    run = execute_model_run(matrix, seed=5)
    doc = run.to_dict()
    again = ModelRun.from_dict(doc)
    assert again.run_id == run.run_id
    assert np.array_equal(again.shap, run.shap)
    assert np.array_equal(again.predictions, run.predictions)
    assert again.reports == run.reports


def test_metrics_recompute_from_stored_predictions(features):
    """Stored reports reproduce exactly from their stored test predictions."""
    grid = build_grid(features.clip, 1)
    matrix = build_model_matrix(features, grid, "likes")
    run = execute_model_run(matrix, seed=5)
    k = run.metadata["train_rows"]
    y_test = run.y[k:]
    for report in run.reports:
        mae, mape, excluded = mae_mape(y_test, np.array(report["test_predictions"]))
        assert mae == report["mae"]
        assert mape == report["mape"]
        assert excluded == report["mape_excluded_points"]
