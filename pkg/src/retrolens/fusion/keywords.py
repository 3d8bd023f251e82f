"""Per-segment comment keywords, weighted by term frequency times inverse
segment frequency over the clip's segments."""

from __future__ import annotations

from collections import Counter

from ..corpus.types import CommentEvent
from ..tokens import tokenize
from .grid import SegmentGrid

import numpy as np


def _segment_term_counts(comments, grid: SegmentGrid, session_start_ts: int) -> list[Counter]:
    counts = [Counter() for _ in grid.segments]
    for c in comments:
        ts = session_start_ts + c.ts_ms / 1000.0
        idx = grid.index_of(ts)
        if idx is not None:
            counts[idx].update(tokenize(c.text))
    return counts


def segment_keywords(
    comments: list[CommentEvent],
    grid: SegmentGrid,
    segment_index: int,
    k: int,
    session_start_ts: int,
) -> list[dict]:
    """Top-k terms of one segment, descending by weight; ties break
    lexicographically. Returns fewer than k when the vocabulary is small."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = _segment_term_counts(comments, grid, session_start_ts)
    segment_count = counts[segment_index]
    if not segment_count:
        return []
    n_segments = len(grid.segments)
    weighted = []
    for term, tf in segment_count.items():
        sf = sum(1 for c in counts if term in c)
        isf = np.log((1.0 + n_segments) / (1.0 + sf)) + 1.0
        weighted.append({"term": term, "weight": float(tf * isf)})
    weighted.sort(key=lambda d: (-d["weight"], d["term"]))
    return weighted[:k]
