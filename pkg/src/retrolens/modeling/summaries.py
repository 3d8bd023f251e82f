"""Contribution summaries at channel, merchandise, feature, and segment
level, plus the per-streamer radar metrics. All summaries are exact linear
functionals of the Shapley matrix: positive and negative parts are summed
separately and the signed total is defined as their sum."""

from __future__ import annotations

import numpy as np

from ..corpus.types import MerchandiseEntry
from ..errors import NoShiftInClip, UnmappedFeature
from ..features import ClipFeatures
from ..fusion.vectors import span_blocks

CHANNELS = ("audio", "text", "frame", "feedback")


def _signed_parts(values: np.ndarray) -> dict:
    pos = float(values[values > 0].sum())
    neg = float(values[values < 0].sum())
    return {"sum": pos + neg, "pos": pos, "neg": neg}


def _channel_columns(feature_names, channel_by_feature) -> dict[str, list[int]]:
    columns: dict[str, list[int]] = {c: [] for c in CHANNELS}
    for i, name in enumerate(feature_names):
        channel = channel_by_feature.get(name)
        if channel not in CHANNELS:
            raise UnmappedFeature(f"feature {name!r} maps to {channel!r}")
        columns[channel].append(i)
    return columns


def summarize_channels(shap: np.ndarray, feature_names, channel_by_feature) -> list[dict]:
    """Per segment, per channel: signed sum plus its positive and negative
    parts (sum == pos + neg by construction)."""
    columns = _channel_columns(feature_names, channel_by_feature)
    out = []
    for row in np.atleast_2d(shap):
        out.append({c: _signed_parts(row[cols]) for c, cols in columns.items()})
    return out


def summarize_merchandise(
    shap: np.ndarray,
    feature_names,
    channel_by_feature,
    merchandise: list[MerchandiseEntry],
    clip_span: tuple[int, int],
    minute_ts: np.ndarray,
    target_values: np.ndarray,
) -> list[dict]:
    """Per merchandise interval [launch, next launch) clipped to the clip:
    per-channel signed sums over member segments, contribution proportions,
    the averaged target, and the price."""
    columns = _channel_columns(feature_names, channel_by_feature)
    clip_start, clip_end = clip_span
    launches = [max(m.launch_ts, clip_start) for m in merchandise]
    ends = [min(e, clip_end) for e in launches[1:] + [clip_end]]

    member_lists: list[list[int]] = [[] for _ in merchandise]
    for i, ts in enumerate(minute_ts):
        mid = ts + 30
        owner = 0  # minutes before the first launch accrue to the first item
        for j, (lo, hi) in enumerate(zip(launches, ends)):
            if lo <= mid < hi:
                owner = j
                break
        else:
            if mid >= ends[-1]:
                owner = len(merchandise) - 1
        member_lists[owner].append(i)

    out = []
    for m, lo, hi, members in zip(merchandise, launches, ends, member_lists):
        sums = {}
        for c, cols in columns.items():
            block = np.atleast_2d(shap)[np.ix_(members, cols)] if members else np.zeros((0, len(cols)))
            sums[c] = _signed_parts(block.ravel())
        magnitudes = {c: abs(sums[c]["sum"]) for c in CHANNELS}
        total = sum(magnitudes.values())
        if total > 0:
            proportions = {c: magnitudes[c] / total for c in CHANNELS}
        else:
            proportions = {c: 1.0 / len(CHANNELS) for c in CHANNELS}
        avg_target = float(np.mean(target_values[members])) if members else 0.0
        out.append({
            "merchandise_id": m.merchandise_id,
            "title": m.title,
            "price": m.price,
            "interval": [lo, hi],
            "segments": members,
            "channel_sums": sums,
            "proportions": proportions,
            "polarities": {c: (1 if sums[c]["sum"] > 0 else -1 if sums[c]["sum"] < 0 else 0) for c in CHANNELS},
            "avg_target": avg_target,
        })
    return out


def summarize_features(shap: np.ndarray, feature_names, channel_by_feature, channel: str) -> list[dict]:
    """Feature-level positive/negative totals over all segments plus the
    raw per-segment signed rows, ordered by |pos| + |neg| descending."""
    if channel not in CHANNELS:
        raise UnmappedFeature(f"unknown channel {channel!r}")
    columns = _channel_columns(feature_names, channel_by_feature)
    shap = np.atleast_2d(shap)
    out = []
    for col in columns[channel]:
        series = shap[:, col]
        pos = float(series[series > 0].sum())
        neg = float(series[series < 0].sum())
        out.append({
            "feature": feature_names[col],
            "positives": pos,
            "negatives": neg,
            "per_segment": series.tolist(),
        })
    out.sort(key=lambda d: (-(abs(d["positives"]) + abs(d["negatives"])), d["feature"]))
    return out


def streamer_summary(features: ClipFeatures, streamers) -> list[dict]:
    """Radar metrics and glyph blocks per streamer over their shift minutes
    inside the clip."""
    stats = features.stats
    if not stats:
        raise NoShiftInClip("clip has no statistics rows")
    entries = np.array([r.entries for r in stats], dtype=float)
    departures = np.array([r.departures for r in stats], dtype=float)
    online = np.cumsum(entries - departures)
    peak = online.max()
    online_rate = online / peak if peak > 0 else np.zeros_like(online)

    clip_start, clip_end = features.clip.span
    out = []
    for streamer in streamers:
        spans = [
            (max(a, clip_start), min(b, clip_end))
            for a, b in streamer.shifts if min(b, clip_end) > max(a, clip_start)
        ]
        if not spans:
            continue
        minutes = [
            i for i, r in enumerate(stats)
            if any(a <= r.minute_ts < b for a, b in spans)
        ]
        total_entries = sum(stats[i].entries for i in minutes)
        total_likes = sum(stats[i].likes for i in minutes)
        total_comments = sum(stats[i].comments for i in minutes)
        out.append({
            "streamer_id": streamer.streamer_id,
            "display_name": streamer.display_name,
            "shift_spans": [list(s) for s in spans],
            "minutes": len(minutes),
            "radar": {
                "avg_online_rate": float(np.mean(online_rate[minutes])) if minutes else 0.0,
                "views": int(total_entries),
                "attractiveness": (total_likes + total_comments) / total_entries if total_entries else 0.0,
                "avg_stay": float(np.mean([stats[i].avg_stay_seconds for i in minutes])) if minutes else 0.0,
                "conversion_rate": float(np.mean([stats[i].conversion_rate for i in minutes])) if minutes else 0.0,
            },
            "glyph": span_blocks(features, spans),
        })
    if not out:
        raise NoShiftInClip(f"no streamer shift overlaps clip {features.clip.clip_id}")
    return out
