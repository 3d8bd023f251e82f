"""Segment grids over clips at 1- or 5-minute granularity."""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus.types import Clip
from ..errors import ClipTooShort

GRANULARITIES = (1, 5)


@dataclass(frozen=True)
class SegmentGrid:
    clip_id: str
    granularity: int                       # minutes
    segments: tuple[tuple[int, int], ...]  # [start_ts, end_ts), contiguous

    def __len__(self) -> int:
        return len(self.segments)

    def index_of(self, ts: float) -> int | None:
        for i, (a, b) in enumerate(self.segments):
            if a <= ts < b:
                return i
        return None


def build_grid(clip: Clip, granularity: int) -> SegmentGrid:
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}, got {granularity}")
    start, end = clip.span
    if end - start < 1:
        raise ClipTooShort(f"clip {clip.clip_id} spans {end - start} s")
    step = granularity * 60
    segments = tuple((t, min(t + step, end)) for t in range(start, end, step))
    return SegmentGrid(clip_id=clip.clip_id, granularity=granularity, segments=segments)
