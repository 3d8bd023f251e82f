"""A complete model run: fitted family reports, the selected winner, its
per-minute predictions, and the segment-by-feature Shapley matrix. Runs
serialize to versioned JSON so the UI and tests never recompute."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..fusion.vectors import ModelMatrix
from .selection import fit_and_select
from .shapley import shapley_attribution

RUN_VERSION = 1


@dataclass
class ModelRun:
    run_id: str
    clip_id: str
    target: str
    seed: int
    reports: list[dict]
    winner: str
    predictions: np.ndarray
    base_value: float
    shap: np.ndarray                # (segments, features)
    feature_names: list[str]
    channel_by_feature: dict[str, str]
    minute_ts: np.ndarray
    y: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": RUN_VERSION,
            "run_id": self.run_id,
            "clip_id": self.clip_id,
            "target": self.target,
            "seed": self.seed,
            "reports": self.reports,
            "winner": self.winner,
            "predictions": self.predictions.tolist(),
            "base_value": self.base_value,
            "shap": self.shap.tolist(),
            "feature_names": self.feature_names,
            "channel_by_feature": self.channel_by_feature,
            "minute_ts": self.minute_ts.tolist(),
            "y": self.y.tolist(),
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelRun":
        if doc.get("version") != RUN_VERSION:
            raise ValueError(f"unsupported run version {doc.get('version')}")
        return cls(
            run_id=doc["run_id"], clip_id=doc["clip_id"], target=doc["target"], seed=doc["seed"],
            reports=doc["reports"], winner=doc["winner"],
            predictions=np.array(doc["predictions"]), base_value=doc["base_value"],
            shap=np.array(doc["shap"]), feature_names=doc["feature_names"],
            channel_by_feature=doc["channel_by_feature"],
            minute_ts=np.array(doc["minute_ts"]), y=np.array(doc["y"]),
            metadata=doc["metadata"],
        )


def run_identifier(clip_id: str, target: str, seed: int, content_hash: str = "") -> str:
    digest = hashlib.sha256(f"{clip_id}|{target}|{seed}|{content_hash}".encode()).hexdigest()
    return digest[:16]


def execute_model_run(matrix: ModelMatrix, seed: int, run_id: str | None = None) -> ModelRun:
    fit = fit_and_select(matrix, seed)
    shap = shapley_attribution(fit.winner_model, matrix.X, fit.background, seed=seed)
    metadata = {
        "winner_family_seed": fit.family_seeds[fit.winner],
        "train_rows": fit.train_rows,
        "background": fit.background.tolist(),
        "mape_undefined": fit.mape_undefined,
        "shap_method": shap.method,
        "flagged_minutes": matrix.flagged_minutes,
        "lagged": matrix.lagged,
        **shap.metadata,
    }
    return ModelRun(
        run_id=run_id or run_identifier(matrix.clip_id, matrix.target, seed),
        clip_id=matrix.clip_id,
        target=matrix.target,
        seed=seed,
        reports=[r.to_dict() for r in fit.reports],
        winner=fit.winner,
        predictions=np.asarray(fit.predictions, dtype=float),
        base_value=shap.base_value,
        shap=shap.values,
        feature_names=list(matrix.feature_names),
        channel_by_feature=dict(matrix.channel_by_feature),
        minute_ts=matrix.minute_ts.copy(),
        y=matrix.y.copy(),
        metadata=metadata,
    )
