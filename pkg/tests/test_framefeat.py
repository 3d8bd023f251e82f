import pytest

from retrolens.corpus.types import EXPRESSIONS, Face, FrameAnnotation
from retrolens.framefeat import (
    CLOSE_UP,
    LONG_RANGE,
    NO_FACE,
    camera_position,
    close_up_count,
    compute_frame_features,
    dominant_expression,
    expression_summary,
)


def face(w, h, probs=None, x=0, y=0):
    if probs is None:
        probs = [1 / 7] * 7
    return Face(bbox=(x, y, w, h), expr_probs=tuple(probs))


def frame(ts_ms, faces, w=1920, h=1080):
    return FrameAnnotation(ts_ms=ts_ms, frame_w=w, frame_h=h, faces=tuple(faces))


def test_no_face():
    assert camera_position(frame(0, [])) == NO_FACE


def test_long_range_below_threshold():
    # 400x400 in 1920x1080 is ~7.7% of the frame
    assert camera_position(frame(0, [face(400, 400)])) == LONG_RANGE


def test_close_up_above_threshold():
    # 500x500 is ~12.1%
    assert camera_position(frame(0, [face(500, 500)])) == CLOSE_UP


def test_camera_scale_invariance():
    small = frame(0, [face(200, 200)], w=960, h=540)
    large = frame(0, [face(400, 400)], w=1920, h=1080)
    assert camera_position(small) == camera_position(large)


def test_largest_face_wins():
    probs_happy = [0, 0, 0, 1, 0, 0, 0]
    probs_sad = [0, 0, 0, 0, 1, 0, 0]
    f = frame(0, [face(100, 100, probs_sad), face(600, 600, probs_happy)])
    assert dominant_expression([f]) == EXPRESSIONS.index("happy")


def test_dominant_expression_average():
    probs = [0.0, 0.0, 0.0, 0.9, 0.1, 0.0, 0.0]
    frames = [frame(i * 250, [face(300, 300, probs)]) for i in range(4)]
    assert dominant_expression(frames) == EXPRESSIONS.index("happy")


def test_dominant_expression_none():
    assert dominant_expression([frame(0, [])]) is None


def test_tie_breaks_by_enum_order():
    probs = [0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0]  # happy == sad
    assert dominant_expression([frame(0, [face(300, 300, probs)])]) == EXPRESSIONS.index("happy")


def test_expression_summary_all_neutral():
    summary = expression_summary([EXPRESSIONS.index("neutral")] * 60)
    assert summary["primary"] == "neutral"
    assert summary["frequency"] == 1.0


def test_expression_summary_half_no_face():
    seconds = [EXPRESSIONS.index("happy")] * 30 + [None] * 30
    summary = expression_summary(seconds)
    assert summary["primary"] == "happy"
    assert summary["frequency"] == 0.5


def test_expression_summary_empty():
    summary = expression_summary([])
    assert summary["primary"] is None
    assert summary["frequency"] == 0.0


def test_histogram_plus_no_face_is_one():
    seconds = [EXPRESSIONS.index("happy")] * 20 + [None] * 15 + [EXPRESSIONS.index("sad")] * 25
    summary = expression_summary(seconds)
    no_face = 15 / 60
    assert summary["histogram"].sum() + no_face == pytest.approx(1.0, abs=1e-9)


def test_per_second_series_and_closeup_counts():
    frames = []
    for s in range(3):
        for k in range(2):
            size = 500 if s == 1 else 200
            frames.append(frame(s * 1000 + k * 500, [face(size, size)]))
    series = compute_frame_features(tuple(frames), n_seconds=4)
    assert series.camera == (LONG_RANGE, CLOSE_UP, LONG_RANGE, NO_FACE)
    assert close_up_count(series.camera) == 1
    assert series.expression[3] is None


def test_closeup_counts_fold(features):
    camera = features.frames.camera
    one_minute = [close_up_count(camera[i * 60:(i + 1) * 60]) for i in range(30)]
    five_minute = [close_up_count(camera[i * 300:(i + 1) * 300]) for i in range(6)]
    for i in range(6):
        assert five_minute[i] == sum(one_minute[i * 5:(i + 1) * 5])
