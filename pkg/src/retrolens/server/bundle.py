"""Offline report bundle: one JSON document equivalent to every GET
endpoint for a clip, validated against the published schema."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema

from ..errors import TooFewPoints
from .state import (
    API_VERSION,
    AppState,
    attributions_payload,
    clips_payload,
    comments_summary_payload,
    features_payload,
    projection_payload,
    segments_payload,
    session_summary,
)

_SCHEMA_RESOURCE = "report_bundle.schema.json"


def bundle_schema() -> dict:
    text = resources.files("retrolens.server.schemas").joinpath(_SCHEMA_RESOURCE).read_text("utf-8")
    return json.loads(text)


def validate_bundle(doc: dict) -> None:
    jsonschema.validate(doc, bundle_schema())


def build_report_bundle(state: AppState, clip_id: str, seed: int = 0) -> dict:
    corpus, clip = state.clip(clip_id)
    runs = state.cache.runs_for_clip(clip_id)
    bundle = {
        "version": API_VERSION,
        "clip_id": clip_id,
        "session_id": corpus.session_id,
        "sessions": [session_summary(state, c) for c in state.sessions.values()],
        "session": session_summary(state, corpus),
        "clips": clips_payload(corpus),
        "segments": {
            str(g): segments_payload(state, clip_id, g) for g in (1, 5)
        },
        "features": features_payload(state, clip_id, channel=None),
        "comments_summary": comments_summary_payload(state, clip_id, seed=seed),
        "projection": {
            str(g): _projection_or_error(state, clip_id, g, seed) for g in (1, 5)
        },
        "modelruns": [run.to_dict() for run in runs],
        "attributions": {
            run.run_id: {
                level: attributions_payload(state, run, level, channel=None)
                for level in ("channel", "merchandise", "feature", "segment")
            }
            for run in runs
        },
        "records": state.records.export(),
    }
    return bundle


def _projection_or_error(state: AppState, clip_id: str, granularity: int, seed: int) -> dict:
    try:
        return projection_payload(state, clip_id, granularity, seed=seed)
    except TooFewPoints:
        return {"clip_id": clip_id, "granularity": granularity, "error": "too_few_points"}


def write_report_bundle(state: AppState, clip_id: str, out_path: str | Path, seed: int = 0) -> dict:
    doc = build_report_bundle(state, clip_id, seed=seed)
    validate_bundle(doc)
    Path(out_path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")
    return doc
