"""Per-clip feature extraction: runs the audio, text, and frame channels
over one clip and bundles the results for the fusion and modeling layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audiodsp import AudioFeatureSeries, Pause, compute_audio_features
from .config import Config
from .corpus.types import Clip, CommentEvent, SessionCorpus, StatsRow, TranscriptSentence
from .framefeat import FrameFeatureSeries, compute_frame_features
from .textpitch import PitchClassifier, classify
from .tokens import tokenize


@dataclass(frozen=True)
class ClipFeatures:
    clip: Clip
    seconds: int
    audio: AudioFeatureSeries
    frames: FrameFeatureSeries
    sentences: tuple[TranscriptSentence, ...]   # midpoint inside the clip
    labels: tuple[str, ...]                     # classifier output per sentence
    word_counts: tuple[int, ...]
    comments: tuple[CommentEvent, ...]
    stats: tuple[StatsRow, ...]                 # minutes inside the clip span
    session_start_ts: int

    @property
    def start_ts(self) -> int:
        return self.clip.span[0]


def extract_clip_features(
    corpus: SessionCorpus,
    clip: Clip,
    classifier: PitchClassifier,
    cfg: Config = Config(),
) -> ClipFeatures:
    start_ts, end_ts = clip.span
    session_start = corpus.manifest.start_ts
    start_ms = (start_ts - session_start) * 1000
    end_ms = (end_ts - session_start) * 1000
    seconds = end_ts - start_ts

    sr = corpus.sample_rate
    lo = (start_ts - session_start) * sr
    hi = min((end_ts - session_start) * sr, len(corpus.audio))
    chunk = corpus.audio[lo:hi]
    if chunk.size:
        audio = compute_audio_features(chunk, sr, cfg.audio)
    else:
        audio = AudioFeatureSeries(
            volume_db=np.zeros(0), pitch_hz=np.zeros(0), speech_rate=np.zeros(0), pauses=(),
        )

    frames = compute_frame_features(
        tuple(f for f in corpus.frames if start_ms <= f.ts_ms < end_ms),
        n_seconds=seconds, offset_ms=start_ms, cfg=cfg.frame,
    )

    sentences = tuple(
        s for s in corpus.transcript
        if start_ms <= (s.start_ms + s.end_ms) / 2 < end_ms
    )
    labels = tuple(classify(classifier, s.text)[0] for s in sentences)
    word_counts = tuple(len(tokenize(s.text)) for s in sentences)

    comments = tuple(c for c in corpus.comments if start_ms <= c.ts_ms < end_ms)
    stats = tuple(r for r in corpus.stats if start_ts <= r.minute_ts < end_ts)

    return ClipFeatures(
        clip=clip, seconds=seconds, audio=audio, frames=frames,
        sentences=sentences, labels=labels, word_counts=word_counts,
        comments=comments, stats=stats, session_start_ts=session_start,
    )


# -- cache serialization -------------------------------------------------------

def features_to_dict(f: ClipFeatures) -> dict:
    return {
        "version": 1,
        "clip": {
            "clip_id": f.clip.clip_id, "session_id": f.clip.session_id,
            "span": list(f.clip.span), "batch_id": f.clip.batch_id,
            "merchandise_ids": list(f.clip.merchandise_ids),
        },
        "seconds": f.seconds,
        "session_start_ts": f.session_start_ts,
        "audio": {
            "volume_db": f.audio.volume_db.tolist(),
            "pitch_hz": f.audio.pitch_hz.tolist(),
            "speech_rate": f.audio.speech_rate.tolist(),
            "pauses": [[p.start_ms, p.end_ms] for p in f.audio.pauses],
        },
        "frames": {
            "camera": list(f.frames.camera),
            "expression": list(f.frames.expression),
        },
        "sentences": [
            {"start_ms": s.start_ms, "end_ms": s.end_ms, "text": s.text,
             "streamer_id": s.streamer_id, "label": lab, "words": wc}
            for s, lab, wc in zip(f.sentences, f.labels, f.word_counts)
        ],
        "comments": [{"ts_ms": c.ts_ms, "user_id": c.user_id, "text": c.text} for c in f.comments],
        "stats_minutes": [r.minute_ts for r in f.stats],
    }


def features_from_dict(doc: dict, corpus: SessionCorpus) -> ClipFeatures:
    clip = Clip(
        clip_id=doc["clip"]["clip_id"], session_id=doc["clip"]["session_id"],
        span=tuple(doc["clip"]["span"]), batch_id=doc["clip"]["batch_id"],
        merchandise_ids=tuple(doc["clip"]["merchandise_ids"]),
    )
    audio = AudioFeatureSeries(
        volume_db=np.array(doc["audio"]["volume_db"]),
        pitch_hz=np.array(doc["audio"]["pitch_hz"]),
        speech_rate=np.array(doc["audio"]["speech_rate"]),
        pauses=tuple(Pause(a, b) for a, b in doc["audio"]["pauses"]),
    )
    frames = FrameFeatureSeries(
        camera=tuple(doc["frames"]["camera"]),
        expression=tuple(doc["frames"]["expression"]),
    )
    sentences = tuple(
        TranscriptSentence(s["start_ms"], s["end_ms"], s["text"], s["streamer_id"])
        for s in doc["sentences"]
    )
    minute_set = set(doc["stats_minutes"])
    return ClipFeatures(
        clip=clip, seconds=doc["seconds"], audio=audio, frames=frames,
        sentences=sentences,
        labels=tuple(s["label"] for s in doc["sentences"]),
        word_counts=tuple(s["words"] for s in doc["sentences"]),
        comments=tuple(CommentEvent(c["ts_ms"], c["user_id"], c["text"]) for c in doc["comments"]),
        stats=tuple(r for r in corpus.stats if r.minute_ts in minute_set),
        session_start_ts=doc["session_start_ts"],
    )
