"""Segment feature blocks, the 25-dimensional segment vectors, and the
per-minute model input matrix.

A segment vector concatenates three blocks computed over one segment:

* audio (12): min/median/max of volume, pitch (voiced seconds only),
  speech rate, and per-second pause occupancy;
* text (6): words per sales-pitch category (midpoint rule);
* face (7): expression histogram fractions.

Each block is min-max normalized over the whole clip's segments before
concatenation; a wholly constant block maps to 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus.types import EXPRESSIONS, STAT_COLUMNS
from ..errors import SchemaViolation, UnknownTarget
from ..features import ClipFeatures
from ..framefeat import CLOSE_UP
from ..textpitch import CATEGORIES, pitch_counts_per_segment
from .grid import SegmentGrid

AUDIO_FEATURES = ("volume", "pitch", "speech_rate", "pause")

# analyst-selectable targets -> stats column
TARGET_TO_COLUMN = {
    "sales_amount": "sales_amount",
    "sales_volume": "sales_volume",
    "uv_value": "uv_value",
    "gpm": "gpm",
    "entries": "entries",
    "departures": "departures",
    "likes": "likes",
    "comments": "comments",
    "avg_stay": "avg_stay_seconds",
}
TARGET_OPTIONS = tuple(TARGET_TO_COLUMN)

CHANNEL_FEATURES = (
    "volume_median", "pitch_median", "speech_rate_median", "pause_seconds",
    "pitch_words", "closeup_fraction",
)
_CHANNEL_OF_AGGREGATE = {
    "volume_median": "audio", "pitch_median": "audio",
    "speech_rate_median": "audio", "pause_seconds": "audio",
    "pitch_words": "text", "closeup_fraction": "frame",
}


def pause_ms_in_span(pauses, lo_ms: int, hi_ms: int) -> int:
    """Integer milliseconds of pause overlapping [lo_ms, hi_ms)."""
    total = 0
    for p in pauses:
        total += max(0, min(p.end_ms, hi_ms) - max(p.start_ms, lo_ms))
    return total


def _triple(values: np.ndarray) -> tuple[float, float, float]:
    if values.size == 0:
        return (0.0, 0.0, 0.0)
    return (float(values.min()), float(np.median(values)), float(values.max()))


def segment_blocks(features: ClipFeatures, grid: SegmentGrid) -> list[dict]:
    """Raw (unnormalized) per-segment blocks plus the integer aggregates
    used for exact cross-granularity folding."""
    clip_start = features.start_ts
    audio = features.audio
    occupancy = audio.pause_occupancy()
    text_counts = pitch_counts_per_segment(
        features.sentences, features.labels, grid, features.session_start_ts
    )
    stats_by_minute = {r.minute_ts: r for r in features.stats}

    blocks = []
    for si, (a, b) in enumerate(grid.segments):
        i0, i1 = a - clip_start, b - clip_start
        vol = audio.volume_db[i0:i1]
        pit = audio.pitch_hz[i0:i1]
        rate = audio.speech_rate[i0:i1]
        occ = occupancy[i0:i1]
        cam = features.frames.camera[i0:i1]
        expr = features.frames.expression[i0:i1]

        hist = np.zeros(len(EXPRESSIONS))
        for e in expr:
            if e is not None:
                hist[e] += 1
        seg_seconds = b - a
        hist = hist / seg_seconds if seg_seconds else hist

        gpm_vals = [
            stats_by_minute[m].gpm
            for m in range(a - a % 60, b, 60) if m in stats_by_minute
        ]
        blocks.append({
            "span": (a, b),
            "audio": {
                "volume": _triple(vol),
                "pitch": _triple(pit[pit > 0]),
                "speech_rate": _triple(rate),
                "pause": _triple(occ),
            },
            "text": {cat: int(text_counts[si, ci]) for ci, cat in enumerate(CATEGORIES)},
            "face": {e: float(hist[ei]) for ei, e in enumerate(EXPRESSIONS)},
            "pause_ms": pause_ms_in_span(audio.pauses, i0 * 1000, i1 * 1000),
            "closeup_seconds": sum(1 for c in cam if c == CLOSE_UP),
            "word_total": int(text_counts[si].sum()),
            "gpm_mean": float(np.mean(gpm_vals)) if gpm_vals else 0.0,
        })
    return blocks


def _raw_vector(block: dict) -> np.ndarray:
    audio = [v for feat in AUDIO_FEATURES for v in block["audio"][feat]]
    text = [block["text"][cat] for cat in CATEGORIES]
    face = [block["face"][e] for e in EXPRESSIONS]
    return np.array(audio + text + face, dtype=float)


def _normalize_block(matrix: np.ndarray) -> np.ndarray:
    lo, hi = matrix.min(), matrix.max()
    if hi == lo:
        return np.full(matrix.shape, 0.5)
    return (matrix - lo) / (hi - lo)


def segment_vectors(features: ClipFeatures, grid: SegmentGrid) -> tuple[np.ndarray, list[dict]]:
    """(S, 25) normalized vectors plus the raw blocks they came from."""
    blocks = segment_blocks(features, grid)
    raw = np.vstack([_raw_vector(b) for b in blocks])
    vectors = np.hstack([
        _normalize_block(raw[:, :12]),
        _normalize_block(raw[:, 12:18]),
        _normalize_block(raw[:, 18:25]),
    ])
    return vectors, blocks


def span_blocks(features: ClipFeatures, spans: list[tuple[int, int]]) -> dict:
    """Raw glyph blocks aggregated over an arbitrary union of spans inside
    the clip (used for streamer shifts and saved selections)."""
    clip_start = features.start_ts
    audio = features.audio
    occupancy = audio.pause_occupancy()
    indices = np.concatenate([
        np.arange(a - clip_start, b - clip_start) for a, b in spans
    ]) if spans else np.array([], dtype=int)
    indices = indices[(indices >= 0)]

    def pick(arr):
        sel = indices[indices < len(arr)]
        return np.asarray(arr, dtype=float)[sel] if sel.size else np.zeros(0)

    vol, pit, rate, occ = pick(audio.volume_db), pick(audio.pitch_hz), pick(audio.speech_rate), pick(occupancy)

    text = {cat: 0 for cat in CATEGORIES}
    for sent, label, words in zip(features.sentences, features.labels, features.word_counts):
        mid = features.session_start_ts + (sent.start_ms + sent.end_ms) / 2000.0
        if any(a <= mid < b for a, b in spans):
            text[label] += words

    hist = np.zeros(len(EXPRESSIONS))
    closeup = 0
    total_seconds = int(indices.size)
    cam_idx = indices[indices < len(features.frames.camera)]
    for i in cam_idx:
        if features.frames.camera[i] == CLOSE_UP:
            closeup += 1
        e = features.frames.expression[i]
        if e is not None:
            hist[e] += 1
    if total_seconds:
        hist = hist / total_seconds

    pause_ms = sum(
        pause_ms_in_span(audio.pauses, (a - clip_start) * 1000, (b - clip_start) * 1000)
        for a, b in spans
    )
    return {
        "audio": {
            "volume": _triple(vol),
            "pitch": _triple(pit[pit > 0]),
            "speech_rate": _triple(rate),
            "pause": _triple(occ),
        },
        "text": text,
        "face": {e: float(hist[ei]) for ei, e in enumerate(EXPRESSIONS)},
        "pause_ms": int(pause_ms),
        "closeup_seconds": closeup,
        "word_total": int(sum(text.values())),
        "seconds": total_seconds,
    }


# -- model matrix ---------------------------------------------------------------

@dataclass
class ModelMatrix:
    clip_id: str
    target: str
    feature_names: list[str]
    X: np.ndarray                    # (minutes, features), chronological
    y: np.ndarray
    minute_ts: np.ndarray
    channel_by_feature: dict[str, str]
    flagged_minutes: list[int] = field(default_factory=list)
    lagged: bool = False

    def to_dict(self) -> dict:
        return {
            "clip_id": self.clip_id, "target": self.target,
            "feature_names": self.feature_names,
            "X": self.X.tolist(), "y": self.y.tolist(),
            "minute_ts": self.minute_ts.tolist(),
            "channel_by_feature": self.channel_by_feature,
            "flagged_minutes": self.flagged_minutes, "lagged": self.lagged,
        }


def build_model_matrix(
    features: ClipFeatures,
    grid: SegmentGrid,
    target: str,
    lag_target: bool = True,
) -> ModelMatrix:
    """Join statistics and per-minute channel aggregates on the 1-minute
    grid. Minutes without audio coverage get zero audio aggregates and are
    flagged. With ``lag_target`` the previous minute's target value joins
    the inputs (first row zero-filled)."""
    if target not in TARGET_TO_COLUMN:
        raise UnknownTarget(f"target must be one of {TARGET_OPTIONS}, got {target!r}")
    if grid.granularity != 1:
        raise ValueError("model matrix requires the 1-minute grid")

    target_col = TARGET_TO_COLUMN[target]
    stat_inputs = [c for c in STAT_COLUMNS if c != target_col]
    blocks = segment_blocks(features, grid)
    stats_by_minute = {r.minute_ts: r for r in features.stats}
    audio_seconds = features.audio.seconds
    clip_start = features.start_ts

    rows, targets, minute_ts, flagged = [], [], [], []
    for i, block in enumerate(blocks):
        a, b = block["span"]
        minute = a - a % 60
        row_stats = stats_by_minute.get(minute)
        if row_stats is None:
            raise SchemaViolation("stats", f"no stats row covering minute {a}")
        seg_seconds = b - a
        covered = (a - clip_start) < audio_seconds
        if not covered:
            flagged.append(i)
        audio_feats = [
            block["audio"]["volume"][1] if covered else 0.0,
            block["audio"]["pitch"][1] if covered else 0.0,
            block["audio"]["speech_rate"][1] if covered else 0.0,
            block["pause_ms"] / 1000.0 if covered else 0.0,
        ]
        row = [getattr(row_stats, c) for c in stat_inputs] + audio_feats + [
            float(block["word_total"]),
            block["closeup_seconds"] / seg_seconds if seg_seconds else 0.0,
        ]
        rows.append(row)
        targets.append(getattr(row_stats, target_col))
        minute_ts.append(minute)

    names = stat_inputs + list(CHANNEL_FEATURES)
    X = np.array(rows, dtype=float)
    y = np.array(targets, dtype=float)
    channels = {c: "feedback" for c in stat_inputs}
    channels.update(_CHANNEL_OF_AGGREGATE)

    if lag_target:
        lag = np.concatenate([[0.0], y[:-1]])
        X = np.hstack([X, lag[:, None]])
        lag_name = f"lag_{target}"
        names = names + [lag_name]
        channels[lag_name] = "feedback"

    assert target_col not in names  # leakage guard
    return ModelMatrix(
        clip_id=features.clip.clip_id, target=target, feature_names=names,
        X=X, y=y, minute_ts=np.array(minute_ts), channel_by_feature=channels,
        flagged_minutes=flagged, lagged=lag_target,
    )
