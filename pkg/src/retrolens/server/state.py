"""Corpus-backed application state and the payload builders shared by the
HTTP endpoints and the offline report bundle."""

from __future__ import annotations

import threading
from pathlib import Path

import numpy as np

from ..audiodsp import boxstats_per_minute
from ..config import Config
from ..corpus.clips import segment_clips
from ..corpus.io import load_session
from ..corpus.types import Clip, SessionCorpus
from ..errors import CorpusLoadError, RetroLensError, UnknownClip, UnknownSession
from ..features import ClipFeatures
from ..fusion.grid import GRANULARITIES, build_grid
from ..fusion.keywords import segment_keywords
from ..fusion.projection import comment_colors, tsne
from ..fusion.vectors import (
    TARGET_TO_COLUMN,
    build_model_matrix,
    segment_vectors,
    span_blocks,
)
from ..modeling.run import ModelRun, execute_model_run, run_identifier
from ..modeling.summaries import (
    CHANNELS,
    streamer_summary,
    summarize_channels,
    summarize_features,
    summarize_merchandise,
)
from ..textpitch import CATEGORIES
from .cache import FeatureCache, session_content_hash
from .records import RecordStore

API_VERSION = 1


class AppState:
    """Immutable corpora plus caches; safe for concurrent readers."""

    def __init__(self, corpus_root: str | Path, cfg: Config = Config(), cache_root: str | Path | None = None):
        self.cfg = cfg
        self.corpus_root = Path(corpus_root)
        if not self.corpus_root.is_dir():
            raise CorpusLoadError(f"corpus root {self.corpus_root} does not exist")
        cache_root = Path(cache_root) if cache_root else self.corpus_root / ".retrolens-cache"
        self.cache = FeatureCache(cache_root, cfg)
        self.records = RecordStore(cache_root / "records.jsonl")
        self._features_lock = threading.Lock()
        self._features: dict[str, ClipFeatures] = {}

        self.sessions: dict[str, SessionCorpus] = {}
        self.session_dirs: dict[str, Path] = {}
        self.clips: dict[str, tuple[str, Clip]] = {}
        for manifest in sorted(self.corpus_root.glob("*/manifest.json")):
            try:
                corpus = load_session(manifest)
            except RetroLensError as exc:
                raise CorpusLoadError(f"{manifest.parent.name}: {exc}") from exc
            self.sessions[corpus.session_id] = corpus
            self.session_dirs[corpus.session_id] = manifest.parent
            for clip in segment_clips(corpus):
                self.clips[clip.clip_id] = (corpus.session_id, clip)
        if not self.sessions:
            raise CorpusLoadError(f"no sessions under {self.corpus_root}")

    # -- lookups -------------------------------------------------------------

    def session(self, session_id: str) -> SessionCorpus:
        if session_id not in self.sessions:
            raise UnknownSession(session_id)
        return self.sessions[session_id]

    def clip(self, clip_id: str) -> tuple[SessionCorpus, Clip]:
        if clip_id not in self.clips:
            raise UnknownClip(clip_id)
        session_id, clip = self.clips[clip_id]
        return self.sessions[session_id], clip

    def clip_features(self, clip_id: str) -> ClipFeatures:
        with self._features_lock:
            if clip_id in self._features:
                return self._features[clip_id]
        corpus, clip = self.clip(clip_id)
        feats, _ = self.cache.clip_features(corpus, clip, self.session_dirs[corpus.session_id])
        with self._features_lock:
            self._features[clip_id] = feats
        return feats

    # -- model runs ------------------------------------------------------------

    def run_id_for(self, clip_id: str, target: str, seed: int) -> str:
        corpus, _ = self.clip(clip_id)
        content = session_content_hash(self.session_dirs[corpus.session_id])
        return run_identifier(clip_id, target, seed, content)

    def execute_run(self, clip_id: str, target: str, seed: int) -> ModelRun:
        run_id = self.run_id_for(clip_id, target, seed)
        cached = self.cache.load_run(run_id)
        if cached is not None:
            return cached
        _, clip = self.clip(clip_id)
        feats = self.clip_features(clip_id)
        matrix = build_model_matrix(feats, build_grid(clip, 1), target, lag_target=self.cfg.model.lag_target)
        run = execute_model_run(matrix, seed, run_id=run_id)
        self.cache.store_run(run)
        return run


# -- payload builders ---------------------------------------------------------

def session_summary(state: AppState, corpus: SessionCorpus) -> dict:
    m = corpus.manifest
    minutes = list(corpus.stats)
    launches = [e.launch_ts for e in m.merchandise]
    ends = launches[1:] + [m.end_ts]

    merch = []
    gmv = 0.0
    for entry, lo, hi in zip(m.merchandise, launches, ends):
        rows = [r for r in minutes if lo <= r.minute_ts < hi]
        sales = float(sum(r.sales_amount for r in rows))
        gmv += sales
        merch.append({
            "merchandise_id": entry.merchandise_id,
            "title": entry.title,
            "price": entry.price,
            "launch_ts": entry.launch_ts,
            "batch_id": entry.batch_id,
            "thumbnail_path": entry.thumbnail_path,
            "sales": sales,
            "volume": int(sum(r.sales_volume for r in rows)),
            "exposure_click_ratio": float(np.mean([r.exposure_click_ratio for r in rows])) if rows else 0.0,
            "click_turnover_ratio": float(np.mean([r.click_turnover_ratio for r in rows])) if rows else 0.0,
        })
    return {
        "session_id": m.session_id,
        "start_ts": m.start_ts,
        "duration_s": m.duration_s,
        "gpm": float(np.mean([r.gpm for r in minutes])) if minutes else 0.0,
        "gmv": gmv,
        "streamers": [
            {"streamer_id": s.streamer_id, "display_name": s.display_name,
             "shifts": [list(sh) for sh in s.shifts]}
            for s in m.streamers
        ],
        "merchandise": merch,
        "ratio_distributions": {
            "exposure_click_ratio": [r.exposure_click_ratio for r in minutes],
            "click_turnover_ratio": [r.click_turnover_ratio for r in minutes],
        },
    }


def clips_payload(corpus: SessionCorpus) -> list[dict]:
    return [
        {
            "clip_id": c.clip_id, "session_id": c.session_id,
            "span": list(c.span), "batch_id": c.batch_id,
            "merchandise_ids": list(c.merchandise_ids),
        }
        for c in segment_clips(corpus)
    ]


def segments_payload(state: AppState, clip_id: str, granularity: int) -> dict:
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    _, clip = state.clip(clip_id)
    feats = state.clip_features(clip_id)
    grid = build_grid(clip, granularity)
    vectors, blocks = segment_vectors(feats, grid)
    segments = []
    for (a, b), vec, block in zip(grid.segments, vectors, blocks):
        segments.append({
            "start_ts": a, "end_ts": b,
            "vector": [float(v) for v in vec],
            "blocks": {
                "audio": {k: list(v) for k, v in block["audio"].items()},
                "text": block["text"],
                "face": block["face"],
            },
            "pause_ms": block["pause_ms"],
            "closeup_seconds": block["closeup_seconds"],
            "word_total": block["word_total"],
            "gpm_mean": block["gpm_mean"],
        })
    return {"clip_id": clip_id, "granularity": granularity, "segments": segments}


def features_payload(state: AppState, clip_id: str, channel: str | None) -> dict:
    corpus, clip = state.clip(clip_id)
    feats = state.clip_features(clip_id)
    grid = build_grid(clip, 1)
    out: dict = {"clip_id": clip_id}

    def audio_payload() -> dict:
        occ = feats.audio.pause_occupancy()
        per_segment_pauses = []
        for a, b in grid.segments:
            lo, hi = (a - clip.span[0]) * 1000, (b - clip.span[0]) * 1000
            inside = [p for p in feats.audio.pauses if p.start_ms < hi and p.end_ms > lo]
            per_segment_pauses.append({
                "count": len(inside),
                "max_ms": max((p.duration_ms for p in inside), default=0),
            })
        return {
            "volume_box": boxstats_per_minute(feats.audio.volume_db),
            "pitch_box": boxstats_per_minute(feats.audio.pitch_hz, exclude_zeros=True),
            "speech_rate_box": boxstats_per_minute(feats.audio.speech_rate),
            "pause_occupancy": occ.tolist(),
            "pauses": [{"start_ms": p.start_ms, "end_ms": p.end_ms} for p in feats.audio.pauses],
            "per_segment_pauses": per_segment_pauses,
        }

    def text_payload() -> dict:
        from ..textpitch import pitch_counts_per_segment
        counts = pitch_counts_per_segment(feats.sentences, feats.labels, grid, feats.session_start_ts)
        return {
            "categories": list(CATEGORIES),
            "per_segment_counts": counts.tolist(),
            "sentences": [
                {"start_ms": s.start_ms, "end_ms": s.end_ms, "label": lab, "words": wc}
                for s, lab, wc in zip(feats.sentences, feats.labels, feats.word_counts)
            ],
        }

    def frame_payload() -> dict:
        from ..corpus.types import EXPRESSIONS
        from ..framefeat import CLOSE_UP, expression_summary
        per_segment = []
        for a, b in grid.segments:
            i0, i1 = a - clip.span[0], b - clip.span[0]
            expr = feats.frames.expression[i0:i1]
            cam = feats.frames.camera[i0:i1]
            summary = expression_summary(expr)
            per_segment.append({
                "primary": summary["primary"],
                "frequency": summary["frequency"],
                "histogram": summary["histogram"].tolist(),
                "closeup_seconds": sum(1 for c in cam if c == CLOSE_UP),
            })
        return {
            "expressions": list(EXPRESSIONS),
            "camera_per_second": list(feats.frames.camera),
            "per_segment": per_segment,
        }

    def feedback_payload() -> dict:
        from ..corpus.types import STAT_COLUMNS
        return {
            "columns": ["minute_ts", *STAT_COLUMNS],
            "rows": [[r.minute_ts, *(getattr(r, c) for c in STAT_COLUMNS)] for r in feats.stats],
        }

    builders = {
        "audio": audio_payload, "text": text_payload,
        "frame": frame_payload, "feedback": feedback_payload,
    }
    if channel is not None:
        if channel not in builders:
            raise ValueError(f"channel must be one of {tuple(builders)}")
        out[channel] = builders[channel]()
    else:
        for name, build in builders.items():
            out[name] = build()
        out["streamers"] = streamer_summary(feats, corpus.manifest.streamers)
    return out


def comments_summary_payload(state: AppState, clip_id: str, seed: int) -> dict:
    _, clip = state.clip(clip_id)
    feats = state.clip_features(clip_id)
    grid = build_grid(clip, 1)
    volume = [0] * len(grid.segments)
    for c in feats.comments:
        idx = grid.index_of(feats.session_start_ts + c.ts_ms / 1000.0)
        if idx is not None:
            volume[idx] += 1
    colors = comment_colors([c.text for c in feats.comments], seed=seed, perplexity=state.cfg.tsne.perplexity)
    keywords = [
        segment_keywords(list(feats.comments), grid, i, k=5, session_start_ts=feats.session_start_ts)
        for i in range(len(grid.segments))
    ]
    return {
        "clip_id": clip_id,
        "volume_per_segment": volume,
        "dots": [
            {"ts_ms": c.ts_ms, "user_id": c.user_id, "text": c.text, **col}
            for c, col in zip(feats.comments, colors)
        ],
        "keywords_per_segment": keywords,
        "seed": seed,
    }


def projection_payload(state: AppState, clip_id: str, granularity: int, seed: int) -> dict:
    _, clip = state.clip(clip_id)
    feats = state.clip_features(clip_id)
    grid = build_grid(clip, granularity)
    vectors, _ = segment_vectors(feats, grid)
    result = tsne(
        vectors, out_dim=2,
        perplexity=min(state.cfg.tsne.perplexity, (len(vectors) - 1) / 3 * 0.99),
        seed=seed, iters=state.cfg.tsne.iters,
    )
    return {
        "clip_id": clip_id,
        "granularity": granularity,
        "coordinates": result.coordinates.tolist(),
        "seed": result.seed,
        "perplexity": result.perplexity,
        "final_kl": result.final_kl,
        "initial_kl": result.initial_kl,
        "iterations": result.iterations,
    }


def run_payload(run: ModelRun) -> dict:
    return run.to_dict()


def attributions_payload(state: AppState, run: ModelRun, level: str, channel: str | None) -> dict:
    corpus, clip = state.clip(run.clip_id)
    base = {"run_id": run.run_id, "level": level, "target": run.target}
    if level == "channel":
        base["segments"] = summarize_channels(run.shap, run.feature_names, run.channel_by_feature)
        base["minute_ts"] = run.minute_ts.tolist()
        base["base_value"] = run.base_value
    elif level == "merchandise":
        base["merchandise"] = summarize_merchandise(
            run.shap, run.feature_names, run.channel_by_feature,
            list(corpus.manifest.merchandise[i] for i in _clip_merch_indices(corpus, clip)),
            clip.span, run.minute_ts, run.y,
        )
    elif level in ("feature", "segment"):
        channels = [channel] if channel else list(CHANNELS)
        detail = {}
        for ch in channels:
            rows = summarize_features(run.shap, run.feature_names, run.channel_by_feature, ch)
            if level == "feature":
                rows = [{k: v for k, v in r.items() if k != "per_segment"} for r in rows]
            detail[ch] = rows
        base["channels"] = detail
        base["minute_ts"] = run.minute_ts.tolist()
    else:
        raise ValueError("level must be channel|merchandise|feature|segment")
    return base


def _clip_merch_indices(corpus: SessionCorpus, clip: Clip) -> list[int]:
    ids = set(clip.merchandise_ids)
    return [i for i, e in enumerate(corpus.manifest.merchandise) if e.merchandise_id in ids]


def record_glyph(state: AppState, clip_id: str, granularity: int, segments: list[int]) -> dict:
    _, clip = state.clip(clip_id)
    feats = state.clip_features(clip_id)
    grid = build_grid(clip, granularity)
    for idx in segments:
        if not 0 <= idx < len(grid.segments):
            raise ValueError(f"segment index {idx} outside grid of {len(grid.segments)}")
    spans = [grid.segments[i] for i in sorted(set(segments))]
    return span_blocks(feats, spans)


def valid_target(target: str) -> bool:
    return target in TARGET_TO_COLUMN
