from .models import (
    FAMILY_ORDER,
    GradientBoostedModel,
    LinearModel,
    PerceptronModel,
    RandomForestModel,
    RegressionTree,
    make_family,
)
from .run import ModelRun, execute_model_run, run_identifier
from .selection import FamilyReport, FitResult, fit_and_select, mae_mape, score_reports
from .shapley import ShapResult, shapley_attribution
from .summaries import (
    CHANNELS,
    streamer_summary,
    summarize_channels,
    summarize_features,
    summarize_merchandise,
)

__all__ = [
    "CHANNELS", "FAMILY_ORDER",
    "FamilyReport", "FitResult", "GradientBoostedModel", "LinearModel",
    "ModelRun", "PerceptronModel", "RandomForestModel", "RegressionTree", "ShapResult",
    "execute_model_run", "fit_and_select", "mae_mape", "make_family",
    "run_identifier", "score_reports", "shapley_attribution",
    "streamer_summary", "summarize_channels", "summarize_features", "summarize_merchandise",
]
