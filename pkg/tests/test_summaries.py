import numpy as np
import pytest

from retrolens.corpus.types import MerchandiseEntry, StreamerInfo
from retrolens.errors import NoShiftInClip, UnmappedFeature
from retrolens.modeling import (
    CHANNELS,
    streamer_summary,
    summarize_channels,
    summarize_features,
    summarize_merchandise,
)

NAMES = ["a1", "a2", "t1", "f1", "s1"]
CHANNEL_MAP = {"a1": "audio", "a2": "audio", "t1": "text", "f1": "frame", "s1": "feedback"}


def test_channel_signed_parts():
    shap = np.array([[2.0, -0.5, 1.0, 0.0, -2.0]])
    out = summarize_channels(shap, NAMES, CHANNEL_MAP)
    audio = out[0]["audio"]
    assert audio == {"sum": 1.5, "pos": 2.0, "neg": -0.5}
    assert out[0]["text"] == {"sum": 1.0, "pos": 1.0, "neg": 0.0}
    assert out[0]["frame"] == {"sum": 0.0, "pos": 0.0, "neg": 0.0}
    assert out[0]["feedback"]["sum"] == -2.0


def test_channel_all_zero_row():
    out = summarize_channels(np.zeros((1, 5)), NAMES, CHANNEL_MAP)
    for channel in CHANNELS:
        assert out[0][channel] == {"sum": 0.0, "pos": 0.0, "neg": 0.0}


def test_unmapped_feature_rejected():
    with pytest.raises(UnmappedFeature):
        summarize_channels(np.zeros((1, 5)), NAMES, {"a1": "audio"})


def test_channel_sums_reconstruct_prediction(features):
    from retrolens.fusion import build_grid, build_model_matrix
    from retrolens.modeling import execute_model_run

    matrix = build_model_matrix(features, build_grid(features.clip, 1), "entries")
    run = execute_model_run(matrix, seed=2)
    out = summarize_channels(run.shap, run.feature_names, run.channel_by_feature)
    for t, per_channel in enumerate(out):
        total = sum(per_channel[c]["sum"] for c in CHANNELS)
        assert run.base_value + total == pytest.approx(run.predictions[t], abs=1e-6)


def test_channel_summary_recomputes_bit_identically():
    rng = np.random.default_rng(0)
    shap = rng.normal(size=(7, 5))
    a = summarize_channels(shap, NAMES, CHANNEL_MAP)
    b = summarize_channels(shap.copy(), NAMES, CHANNEL_MAP)
    assert a == b


# -- merchandise ------------------------------------------------------------------


def _merch(launches, prices=None):
    prices = prices or [10.0] * len(launches)
    return [
        MerchandiseEntry(f"m{i}", f"item {i}", prices[i], launch, 0, None)
        for i, launch in enumerate(launches)
    ]


def test_single_merchandise_covers_clip():
    shap = np.array([[1.0, 2.0, -1.0, 0.5, 0.0]] * 4)
    minute_ts = np.arange(4) * 60 + 1000 - 1000 % 60
    clip_span = (int(minute_ts[0]), int(minute_ts[-1]) + 60)
    out = summarize_merchandise(
        shap, NAMES, CHANNEL_MAP, _merch([clip_span[0]]), clip_span, minute_ts, np.array([1.0, 2.0, 3.0, 4.0])
    )
    assert len(out) == 1
    assert out[0]["segments"] == [0, 1, 2, 3]
    assert out[0]["channel_sums"]["audio"]["sum"] == pytest.approx(12.0)
    assert out[0]["avg_target"] == pytest.approx(2.5)


def test_merchandise_proportions_and_polarity():
    # one segment; channel sums audio 3, text -1, frame 0, feedback 0
    shap = np.array([[3.0, 0.0, -1.0, 0.0, 0.0]])
    minute_ts = np.array([1200])
    out = summarize_merchandise(
        shap, NAMES, CHANNEL_MAP, _merch([1200]), (1200, 1260), minute_ts, np.array([5.0])
    )
    props = out[0]["proportions"]
    assert props["audio"] == pytest.approx(0.75)
    assert props["text"] == pytest.approx(0.25)
    assert props["frame"] == 0.0 and props["feedback"] == 0.0
    pol = out[0]["polarities"]
    assert pol == {"audio": 1, "text": -1, "frame": 0, "feedback": 0}


def test_merchandise_zero_sums_equal_shares():
    shap = np.zeros((1, 5))
    out = summarize_merchandise(
        shap, NAMES, CHANNEL_MAP, _merch([1200]), (1200, 1260), np.array([1200]), np.array([5.0])
    )
    assert all(p == pytest.approx(0.25) for p in out[0]["proportions"].values())


def test_merchandise_average_target():
    shap = np.zeros((2, 5))
    minute_ts = np.array([1200, 1260])
    out = summarize_merchandise(
        shap, NAMES, CHANNEL_MAP, _merch([1200]), (1200, 1320), minute_ts, np.array([10.0, 20.0])
    )
    assert out[0]["avg_target"] == pytest.approx(15.0)


def test_merchandise_intervals_partition_rows():
    shap = np.ones((6, 5))
    minute_ts = np.arange(6) * 60 + 1200
    merch = _merch([1200, 1380])  # second launches at minute 3
    out = summarize_merchandise(
        shap, NAMES, CHANNEL_MAP, merch, (1200, 1560), minute_ts, np.arange(6.0)
    )
    assert out[0]["segments"] == [0, 1, 2]
    assert out[1]["segments"] == [3, 4, 5]


# -- feature level ------------------------------------------------------------------


def test_feature_positive_negative_split():
    shap = np.array([[1.0, 0, 0, 0, 0], [-2.0, 0, 0, 0, 0], [3.0, 0, 0, 0, 0]])
    out = summarize_features(shap, NAMES, CHANNEL_MAP, "audio")
    row = next(r for r in out if r["feature"] == "a1")
    assert row["positives"] == 4.0
    assert row["negatives"] == -2.0
    assert row["per_segment"] == [1.0, -2.0, 3.0]


def test_zero_feature_ranked_last():
    shap = np.array([[1.0, 0.0, 0, 0, 0], [2.0, 0.0, 0, 0, 0]])
    out = summarize_features(shap, NAMES, CHANNEL_MAP, "audio")
    assert out[0]["feature"] == "a1"
    assert out[-1]["feature"] == "a2"
    assert out[-1]["positives"] == 0.0 and out[-1]["negatives"] == 0.0


def test_feature_totals_fold_into_channel_totals():
    rng = np.random.default_rng(1)
    shap = rng.normal(size=(5, 5))
    channel_rows = summarize_channels(shap, NAMES, CHANNEL_MAP)
    features = summarize_features(shap, NAMES, CHANNEL_MAP, "audio")
    total = sum(r["positives"] + r["negatives"] for r in features)
    channel_total = sum(row["audio"]["sum"] for row in channel_rows)
    assert total == pytest.approx(channel_total, abs=1e-12)


def test_unknown_channel_rejected():
    with pytest.raises(UnmappedFeature):
        summarize_features(np.zeros((1, 5)), NAMES, CHANNEL_MAP, "video")


# -- streamer radar ----------------------------------------------------------------


def test_single_streamer_views_equal_clip_entries(features, corpus):
    out = streamer_summary(features, corpus.manifest.streamers)
    total_entries = sum(r.entries for r in features.stats)
    assert sum(s["radar"]["views"] for s in out) == total_entries


def test_two_streamers_disjoint_shifts(features, corpus):
    out = streamer_summary(features, corpus.manifest.streamers)
    assert len(out) == 2
    spans = [tuple(map(tuple, s["shift_spans"])) for s in out]
    assert spans[0][0][1] <= spans[1][0][0]


def test_no_shift_in_clip(features):
    outsider = StreamerInfo("sx", "X", ((0, 10),))
    with pytest.raises(NoShiftInClip):
        streamer_summary(features, [outsider])


def test_zero_entries_guarded(features, corpus):
    import dataclasses

    zeroed = tuple(
        dataclasses.replace(r, entries=0, departures=0) for r in features.stats
    )
    quiet = dataclasses.replace(features, stats=zeroed)
    out = streamer_summary(quiet, corpus.manifest.streamers)
    for s in out:
        assert s["radar"]["attractiveness"] == 0
        assert s["radar"]["views"] == 0


def test_streamer_glyph_blocks_present(features, corpus):
    out = streamer_summary(features, corpus.manifest.streamers)
    for s in out:
        assert set(s["glyph"]["audio"]) == {"volume", "pitch", "speech_rate", "pause"}
        assert len(s["glyph"]["face"]) == 7
        assert s["glyph"]["seconds"] > 0
