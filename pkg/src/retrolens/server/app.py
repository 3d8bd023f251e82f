"""HTTP service over a corpus root.

Every GET is read-only and deterministic given the corpus and cached
runs; responses carry a content-hash ETag. Model runs execute on a
bounded worker pool and are polled via GET /modelruns/{id}.
"""

from __future__ import annotations

import hashlib
import json

from fastapi import FastAPI, Request, Response
from pydantic import BaseModel, Field

from ..errors import (
    RetroLensError,
    UnknownClip,
    UnknownRecord,
    UnknownRun,
    UnknownSession,
    UnknownTarget,
)
from .bundle import build_report_bundle
from .jobs import JobQueue
from .state import (
    API_VERSION,
    AppState,
    attributions_payload,
    clips_payload,
    comments_summary_payload,
    features_payload,
    projection_payload,
    record_glyph,
    run_payload,
    segments_payload,
    session_summary,
    valid_target,
)

_NOT_FOUND = (UnknownClip, UnknownSession, UnknownRun, UnknownRecord, UnknownTarget)


class RunRequest(BaseModel):
    target: str
    seed: int = 0


class RecordRequest(BaseModel):
    category: str
    target: str
    clip_id: str
    granularity: int = 1
    segments: list[int] = Field(default_factory=list)


def _etag_json(payload: dict) -> Response:
    body = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    etag = hashlib.sha256(body.encode()).hexdigest()[:32]
    return Response(content=body, media_type="application/json", headers={"ETag": etag})


def _versioned(payload) -> dict:
    if isinstance(payload, dict):
        return {"version": API_VERSION, **payload}
    return {"version": API_VERSION, "items": payload}


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="retrolens", version="0.1.0")
    # the frontend may be served as static files from another origin
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    jobs = JobQueue(workers=2)

    @app.exception_handler(RetroLensError)
    async def _handle(request: Request, exc: RetroLensError):
        status = 404 if isinstance(exc, _NOT_FOUND) else 400
        return Response(
            content=json.dumps({"error": {"code": exc.code, "message": str(exc)}}),
            status_code=status, media_type="application/json",
        )

    @app.exception_handler(ValueError)
    async def _handle_value(request: Request, exc: ValueError):
        return Response(
            content=json.dumps({"error": {"code": "invalid_request", "message": str(exc)}}),
            status_code=400, media_type="application/json",
        )

    @app.get("/sessions")
    def list_sessions():
        summaries = sorted(
            (session_summary(state, c) for c in state.sessions.values()),
            key=lambda s: s["start_ts"],
        )
        return _etag_json(_versioned(summaries))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _etag_json(_versioned(session_summary(state, state.session(session_id))))

    @app.get("/sessions/{session_id}/clips")
    def get_clips(session_id: str):
        return _etag_json(_versioned(clips_payload(state.session(session_id))))

    @app.get("/clips/{clip_id}/segments")
    def get_segments(clip_id: str, granularity: int = 1):
        return _etag_json(_versioned(segments_payload(state, clip_id, granularity)))

    @app.get("/clips/{clip_id}/features")
    def get_features(clip_id: str, channel: str | None = None):
        return _etag_json(_versioned(features_payload(state, clip_id, channel)))

    @app.get("/clips/{clip_id}/comments/summary")
    def get_comments_summary(clip_id: str, seed: int = 0):
        return _etag_json(_versioned(comments_summary_payload(state, clip_id, seed)))

    @app.get("/clips/{clip_id}/projection")
    def get_projection(clip_id: str, granularity: int = 1, seed: int = 0):
        return _etag_json(_versioned(projection_payload(state, clip_id, granularity, seed)))

    @app.post("/clips/{clip_id}/modelruns", status_code=202)
    def post_model_run(clip_id: str, req: RunRequest):
        state.clip(clip_id)  # 404 on unknown clip
        if not valid_target(req.target):
            raise UnknownTarget(req.target)
        run_id = state.run_id_for(clip_id, req.target, req.seed)
        if state.cache.load_run(run_id) is not None:
            jobs.mark_done(run_id)
            return _versioned({"run_id": run_id, "status": "done"})
        status = jobs.submit(run_id, lambda: state.execute_run(clip_id, req.target, req.seed))
        return _versioned({"run_id": run_id, **status})

    @app.get("/modelruns/{run_id}")
    def get_model_run(run_id: str):
        run = state.cache.load_run(run_id)
        if run is not None:
            return _etag_json(_versioned({"run_id": run_id, "status": "done", "run": run_payload(run)}))
        status = jobs.status(run_id)
        if status is None:
            raise UnknownRun(run_id)
        return _etag_json(_versioned({"run_id": run_id, **status}))

    @app.get("/modelruns/{run_id}/attributions")
    def get_attributions(run_id: str, level: str = "channel", channel: str | None = None):
        run = state.cache.load_run(run_id)
        if run is None:
            raise UnknownRun(run_id)
        return _etag_json(_versioned(attributions_payload(state, run, level, channel)))

    @app.post("/records", status_code=201)
    def create_record(req: RecordRequest):
        state.clip(req.clip_id)
        if not valid_target(req.target):
            raise UnknownTarget(req.target)
        glyph = record_glyph(state, req.clip_id, req.granularity, req.segments)
        rec = state.records.create(
            category=req.category, target=req.target, clip_id=req.clip_id,
            granularity=req.granularity, segments=req.segments, glyph=glyph,
        )
        return _versioned({"record": state.records._to_dict(rec)})

    @app.get("/records")
    def list_records():
        return _etag_json(_versioned([state.records._to_dict(r) for r in state.records.list()]))

    @app.delete("/records/{record_id}")
    def delete_record(record_id: str):
        state.records.delete(record_id)
        return _versioned({"deleted": record_id})

    @app.get("/records/export")
    def export_records():
        return _etag_json(_versioned(state.records.export()))

    @app.get("/clips/{clip_id}/report")
    def get_report(clip_id: str, seed: int = 0):
        return _etag_json(build_report_bundle(state, clip_id, seed=seed))

    return app
