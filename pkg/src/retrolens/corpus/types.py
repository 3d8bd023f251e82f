"""Domain types for an on-disk session corpus.

All statistics timestamps are epoch seconds UTC; intra-media timestamps
(transcript, frames, comments) are milliseconds from session start.
Corpus objects are immutable after load and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# The 14 platform statistics, in CSV column order (after minute_ts).
STAT_COLUMNS = (
    "sales_amount", "sales_volume", "gpm", "uv_value",
    "entries", "departures", "likes", "comments", "subscribes",
    "conversion_rate", "avg_stay_seconds",
    "cancels", "exposure_click_ratio", "click_turnover_ratio",
)

COUNT_COLUMNS = frozenset(
    {"sales_volume", "entries", "departures", "likes", "comments", "subscribes", "cancels"}
)
RATIO_COLUMNS = frozenset({"conversion_rate", "exposure_click_ratio", "click_turnover_ratio"})

EXPRESSIONS = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")


@dataclass(frozen=True)
class MerchandiseEntry:
    merchandise_id: str
    title: str
    price: float
    launch_ts: int
    batch_id: int
    thumbnail_path: str | None = None


@dataclass(frozen=True)
class StreamerInfo:
    streamer_id: str
    display_name: str
    shifts: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SessionManifest:
    session_id: str
    start_ts: int
    end_ts: int
    streamers: tuple[StreamerInfo, ...]
    merchandise: tuple[MerchandiseEntry, ...]
    files: dict[str, str] = field(default_factory=dict)

    @property
    def duration_s(self) -> int:
        return self.end_ts - self.start_ts

    def ms_to_epoch(self, ms: int) -> float:
        """The one conversion owning media-ms -> epoch-seconds mapping."""
        return self.start_ts + ms / 1000.0

    def epoch_to_ms(self, ts: float) -> int:
        return int(round((ts - self.start_ts) * 1000))


@dataclass(frozen=True)
class StatsRow:
    minute_ts: int
    sales_amount: float
    sales_volume: int
    gpm: float
    uv_value: float
    entries: int
    departures: int
    likes: int
    comments: int
    subscribes: int
    conversion_rate: float
    avg_stay_seconds: float
    cancels: int
    exposure_click_ratio: float
    click_turnover_ratio: float


@dataclass(frozen=True)
class TranscriptSentence:
    start_ms: int
    end_ms: int
    text: str
    streamer_id: str


@dataclass(frozen=True)
class Face:
    bbox: tuple[float, float, float, float]  # x, y, w, h in pixels
    expr_probs: tuple[float, ...]            # 7 probs, EXPRESSIONS order

    @property
    def area(self) -> float:
        return self.bbox[2] * self.bbox[3]


@dataclass(frozen=True)
class FrameAnnotation:
    ts_ms: int
    frame_w: int
    frame_h: int
    faces: tuple[Face, ...]


@dataclass(frozen=True)
class CommentEvent:
    ts_ms: int
    user_id: str
    text: str


@dataclass(frozen=True)
class Clip:
    clip_id: str
    session_id: str
    span: tuple[int, int]  # [start_ts, end_ts) epoch seconds
    batch_id: int
    merchandise_ids: tuple[str, ...]

    @property
    def duration_s(self) -> int:
        return self.span[1] - self.span[0]


@dataclass(frozen=True)
class SessionCorpus:
    """A fully loaded and validated session; every stream is sorted."""

    manifest: SessionManifest
    stats: tuple[StatsRow, ...]
    transcript: tuple[TranscriptSentence, ...]
    frames: tuple[FrameAnnotation, ...]
    comments: tuple[CommentEvent, ...]
    audio: np.ndarray        # mono float64 in [-1, 1], read-only
    sample_rate: int

    @property
    def session_id(self) -> str:
        return self.manifest.session_id

    def stat_series(self, column: str) -> np.ndarray:
        return np.array([getattr(row, column) for row in self.stats], dtype=float)
