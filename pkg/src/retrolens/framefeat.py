"""Facial-expression and camera-position features from per-frame face
annotations.

Detection itself happens upstream; this module consumes the frames.jsonl
stream, which keeps everything deterministic. When several faces appear,
the largest one wins: the on-camera salesperson dominates the frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import FrameConfig
from .corpus.types import EXPRESSIONS, FrameAnnotation

CLOSE_UP = "closeup"
LONG_RANGE = "longrange"
NO_FACE = "noface"
# precedence for per-second majority ties
CAMERA_POSITIONS = (CLOSE_UP, LONG_RANGE, NO_FACE)


@dataclass(frozen=True)
class FrameFeatureSeries:
    """Per-second camera positions and dominant expressions (None = no face)."""

    camera: tuple[str, ...]
    expression: tuple[int | None, ...]

    @property
    def seconds(self) -> int:
        return len(self.camera)


def camera_position(frame: FrameAnnotation, cfg: FrameConfig = FrameConfig()) -> str:
    """Close-up iff the largest face covers at least the configured share
    of the frame area; invariant to uniform scaling."""
    if not frame.faces:
        return NO_FACE
    frame_area = frame.frame_w * frame.frame_h
    largest = max(f.area for f in frame.faces)
    return CLOSE_UP if largest / frame_area >= cfg.closeup_area_frac else LONG_RANGE


def dominant_expression(frames: list[FrameAnnotation]) -> int | None:
    """Average the largest face's probabilities across one second's frames;
    ties resolve to the first expression in enum order."""
    probs = [
        max(f.faces, key=lambda face: face.area).expr_probs
        for f in frames if f.faces
    ]
    if not probs:
        return None
    return int(np.argmax(np.mean(np.array(probs), axis=0)))


def compute_frame_features(
    frames: tuple[FrameAnnotation, ...],
    n_seconds: int,
    offset_ms: int = 0,
    cfg: FrameConfig = FrameConfig(),
) -> FrameFeatureSeries:
    """Bucket frames into seconds (relative to ``offset_ms``) and reduce."""
    buckets: list[list[FrameAnnotation]] = [[] for _ in range(n_seconds)]
    for frame in frames:
        s = (frame.ts_ms - offset_ms) // 1000
        if 0 <= s < n_seconds:
            buckets[s].append(frame)
    camera = []
    expression = []
    for bucket in buckets:
        camera.append(_second_camera(bucket, cfg))
        expression.append(dominant_expression(bucket))
    return FrameFeatureSeries(camera=tuple(camera), expression=tuple(expression))


def _second_camera(bucket: list[FrameAnnotation], cfg: FrameConfig) -> str:
    if not bucket:
        return NO_FACE
    votes = {pos: 0 for pos in CAMERA_POSITIONS}
    for frame in bucket:
        votes[camera_position(frame, cfg)] += 1
    return max(CAMERA_POSITIONS, key=lambda pos: (votes[pos], -CAMERA_POSITIONS.index(pos)))


def expression_summary(expression_seconds) -> dict:
    """Modal per-second expression among face-bearing seconds, its share of
    all segment seconds, and the full 7-bin histogram of fractions."""
    seconds = list(expression_seconds)
    total = len(seconds)
    hist = np.zeros(len(EXPRESSIONS))
    if total == 0:
        return {"primary": None, "frequency": 0.0, "histogram": hist}
    for e in seconds:
        if e is not None:
            hist[e] += 1
    if hist.sum() == 0:
        return {"primary": None, "frequency": 0.0, "histogram": hist}
    primary = int(np.argmax(hist))
    hist = hist / total
    return {"primary": EXPRESSIONS[primary], "frequency": float(hist[primary]), "histogram": hist}


def close_up_count(camera_seconds) -> int:
    return sum(1 for c in camera_seconds if c == CLOSE_UP)
