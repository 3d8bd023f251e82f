"""Deterministic synthetic session generator.

Writes a complete session directory in every on-disk format, plus a
``ground_truth.json`` with the generating parameters (per-minute audio
schedule, sentence labels, comment topics, and the linear model behind the
target statistic) so tests can assert against known values.

The whole session is one merchandise batch, so the session yields a single
clip spanning every stats minute.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..errors import IoError
from ..textpitch import CATEGORIES, make_sentence
from .io import save_corpus
from .types import (
    EXPRESSIONS,
    CommentEvent,
    Face,
    FrameAnnotation,
    MerchandiseEntry,
    SessionCorpus,
    SessionManifest,
    StatsRow,
    StreamerInfo,
    TranscriptSentence,
)

START_TS = 1_673_740_800  # 2023-01-15 00:00:00 UTC
SAMPLE_RATE = 16000

# Known linear ground truth for the target statistic.
TARGET = "gpm"
TARGET_WEIGHTS = {"entries": 0.15, "likes": 0.08, "sales_volume": 0.9, "conversion_rate": 25.0}
TARGET_INTERCEPT = 5.0
NOISE_SIGMA = 2.0

# two comment topics with dense within-topic vocabulary overlap
_PRAISE = (
    "love it so pretty", "so pretty love the color",
    "love this pretty color", "pretty and cute love it",
    "love love so pretty", "the color is pretty love it",
    "so cute so pretty love", "pretty color love this so much",
)
_LOGISTICS = (
    "when is my order shipping", "shipping time for my order",
    "is shipping free on this order", "how long is shipping",
    "any update on my order shipping", "shipping to my city when",
    "track my order shipping please", "free shipping on this order",
)


def synth_corpus(seed: int, minutes: int, root: str | Path) -> Path:
    """Generate a session under ``root``; returns the session directory."""
    if minutes < 5:
        raise ValueError(f"minutes must be >= 5, got {minutes}")
    rng = np.random.default_rng(seed)
    session_id = f"synth-s{seed}-m{minutes}"
    start, end = START_TS, START_TS + minutes * 60

    manifest = _make_manifest(session_id, start, end, minutes, rng)
    audio, audio_schedule = _make_audio(minutes, rng)
    transcript, sentence_labels = _make_transcript(manifest, minutes, rng)
    frames, frame_modes = _make_frames(minutes, rng)
    comments, comment_topics = _make_comments(minutes, rng)
    stats = _make_stats(start, minutes, comments, rng)

    corpus = SessionCorpus(
        manifest=manifest, stats=stats, transcript=transcript,
        frames=frames, comments=comments, audio=audio, sample_rate=SAMPLE_RATE,
    )
    session_dir = save_corpus(corpus, root)
    truth = {
        "target": TARGET,
        "weights": TARGET_WEIGHTS,
        "intercept": TARGET_INTERCEPT,
        "noise_sigma": NOISE_SIGMA,
        "audio_schedule": audio_schedule,
        "sentence_labels": sentence_labels,
        "comment_topics": comment_topics,
        "frame_modes": frame_modes,
    }
    try:
        (session_dir / "ground_truth.json").write_text(
            json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return session_dir


def _make_manifest(session_id, start, end, minutes, rng) -> SessionManifest:
    mid = start + (minutes // 2) * 60
    streamers = (
        StreamerInfo("st-ava", "Ava", ((start, mid),)),
        StreamerInfo("st-ben", "Ben", ((mid, end),)),
    )
    n_items = 3 if minutes < 40 else 4
    launch_step = (minutes // n_items) * 60
    merchandise = tuple(
        MerchandiseEntry(
            merchandise_id=f"m{i + 1:03d}",
            title=f"Sample item {i + 1}",
            price=round(float(rng.uniform(5.0, 50.0)), 2),
            launch_ts=start + i * launch_step,
            batch_id=0,
            thumbnail_path=None,
        )
        for i in range(n_items)
    )
    return SessionManifest(
        session_id=session_id, start_ts=start, end_ts=end,
        streamers=streamers, merchandise=merchandise,
    )


def _make_audio(minutes: int, rng) -> tuple[np.ndarray, list[dict]]:
    sr = SAMPLE_RATE
    samples = np.zeros(minutes * 60 * sr)
    schedule = []
    t_minute = np.arange(60 * sr) / sr
    for m in range(minutes):
        pitch = float(rng.choice([160.0, 200.0, 240.0, 300.0]))
        amp = float(rng.choice([0.3, 0.5]))
        syl_rate = int(rng.choice([2, 3, 4, 5]))
        pause_ms = int(rng.choice([400, 500, 600]))
        pause_start_s = float(rng.integers(15, 45))
        envelope = np.sin(np.pi * syl_rate * t_minute) ** 2
        chunk = amp * np.sin(2 * np.pi * pitch * t_minute) * envelope
        i0 = int(pause_start_s * sr)
        i1 = i0 + int(pause_ms / 1000 * sr)
        chunk[i0:i1] = 0.0
        samples[m * 60 * sr:(m + 1) * 60 * sr] = chunk
        schedule.append({
            "minute": m, "pitch_hz": pitch, "amplitude": amp,
            "syllables_per_s": syl_rate, "pause_ms": pause_ms,
            "pause_start_ms": int(pause_start_s * 1000) + m * 60000,
        })
    samples.setflags(write=False)
    return samples, schedule


def _make_transcript(manifest, minutes, rng) -> tuple[tuple[TranscriptSentence, ...], list[str]]:
    sentences = []
    labels = []
    for m in range(minutes):
        dominant = CATEGORIES[m % len(CATEGORIES)]
        n_sent = int(rng.integers(3, 6))
        starts = np.sort(rng.integers(0, 56000, size=n_sent))
        for s_off in starts:
            category = dominant if rng.random() < 0.6 else str(rng.choice(CATEGORIES))
            text = make_sentence(category, rng)
            start_ms = m * 60000 + int(s_off)
            end_ms = start_ms + int(rng.integers(1800, 4200))
            epoch = manifest.start_ts + start_ms // 1000
            streamer = next(
                (s.streamer_id for s in manifest.streamers
                 if any(a <= epoch < b for a, b in s.shifts)),
                manifest.streamers[0].streamer_id,
            )
            sentences.append(TranscriptSentence(start_ms, end_ms, text, streamer))
            labels.append(category)
    return tuple(sentences), labels


def _make_frames(minutes, rng) -> tuple[tuple[FrameAnnotation, ...], list[str]]:
    frame_w, frame_h = 1280, 720
    frames = []
    modes = []
    for m in range(minutes):
        mode = str(rng.choice(["closeup", "longrange", "noface"], p=[0.4, 0.4, 0.2]))
        modes.append(mode)
        dominant = int(rng.integers(0, len(EXPRESSIONS)))
        if mode == "closeup":
            frac = float(rng.uniform(0.10, 0.20))
        else:
            frac = float(rng.uniform(0.02, 0.05))
        side = math.sqrt(frac * frame_w * frame_h)
        w = h = round(side, 1)
        for half_sec in range(120):
            ts_ms = m * 60000 + half_sec * 500
            if mode == "noface":
                frames.append(FrameAnnotation(ts_ms, frame_w, frame_h, ()))
                continue
            probs = [0.2 / 6.0] * 7
            probs[dominant] = 0.8
            x = round(float(rng.uniform(0, frame_w - w)), 1)
            y = round(float(rng.uniform(0, frame_h - h)), 1)
            face = Face(bbox=(x, y, w, h), expr_probs=tuple(probs))
            frames.append(FrameAnnotation(ts_ms, frame_w, frame_h, (face,)))
    return tuple(frames), modes


def _make_comments(minutes, rng) -> tuple[tuple[CommentEvent, ...], list[str]]:
    comments = []
    topics = []
    for m in range(minutes):
        n = int(rng.poisson(3.0))
        offsets = np.sort(rng.integers(0, 60000, size=n))
        for off in offsets:
            topic = "praise" if rng.random() < 0.5 else "logistics"
            pool = _PRAISE if topic == "praise" else _LOGISTICS
            text = str(pool[int(rng.integers(0, len(pool)))])
            comments.append(CommentEvent(m * 60000 + int(off), f"u{int(rng.integers(1, 200)):04d}", text))
            topics.append(topic)
    return tuple(comments), topics


def _make_stats(start, minutes, comments, rng) -> tuple[StatsRow, ...]:
    per_minute_comments = [0] * minutes
    for c in comments:
        per_minute_comments[c.ts_ms // 60000] += 1
    rows = []
    for m in range(minutes):
        entries = int(rng.poisson(50 + 20 * math.sin(2 * math.pi * m / 15)))
        departures = int(rng.poisson(40 + 15 * math.sin(2 * math.pi * m / 15 + 1.0)))
        likes = int(rng.poisson(80 + 40 * math.sin(2 * math.pi * m / 10 + 2.0)))
        subscribes = int(rng.poisson(2.0))
        cancels = int(rng.poisson(1.0))
        conversion = float(np.clip(0.05 + 0.03 * math.sin(2 * math.pi * m / 13) + rng.normal(0, 0.01), 0.0, 1.0))
        avg_stay = float(120 + 60 * math.sin(2 * math.pi * m / 20) + rng.normal(0, 5.0))
        exposure_click = float(np.clip(0.20 + 0.10 * math.sin(2 * math.pi * m / 7) + rng.normal(0, 0.02), 0.0, 1.0))
        click_turnover = float(np.clip(0.15 + 0.08 * math.sin(2 * math.pi * m / 9 + 1.0) + rng.normal(0, 0.02), 0.0, 1.0))
        sales_volume = int(rng.poisson(20 + 10 * math.sin(2 * math.pi * m / 12)))
        sales_amount = float(sales_volume * 9.9)  # exact multiple keeps collinearity stable
        uv_value = float(sales_amount / max(entries, 1))
        gpm = (
            TARGET_WEIGHTS["entries"] * entries
            + TARGET_WEIGHTS["likes"] * likes
            + TARGET_WEIGHTS["sales_volume"] * sales_volume
            + TARGET_WEIGHTS["conversion_rate"] * conversion
            + TARGET_INTERCEPT
            + float(rng.normal(0, NOISE_SIGMA))
        )
        rows.append(StatsRow(
            minute_ts=start + m * 60,
            sales_amount=sales_amount, sales_volume=sales_volume, gpm=gpm, uv_value=uv_value,
            entries=entries, departures=departures, likes=likes,
            comments=per_minute_comments[m], subscribes=subscribes,
            conversion_rate=conversion, avg_stay_seconds=avg_stay,
            cancels=cancels, exposure_click_ratio=exposure_click, click_turnover_ratio=click_turnover,
        ))
    return tuple(rows)
