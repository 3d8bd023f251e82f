"""Loading, validation, and saving of session corpora.

Directory layout per session::

    <session_id>/manifest.json
                 stats.csv          # minute_ts + the 14 platform statistics
                 transcript.jsonl
                 frames.jsonl
                 comments.jsonl
                 audio.wav          # PCM mono 16-bit, >= 16 kHz

CSV uses '.' decimals and no thousands grouping; everything is UTF-8.
"""

from __future__ import annotations

import csv
import json
import wave
from pathlib import Path

import numpy as np

from ..errors import IoError, MissingFile, RatioOutOfRange, SchemaViolation, UnsortedStream
from ..tokens import tokenize
from .types import (
    COUNT_COLUMNS,
    RATIO_COLUMNS,
    STAT_COLUMNS,
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

DEFAULT_FILES = {
    "stats": "stats.csv",
    "transcript": "transcript.jsonl",
    "frames": "frames.jsonl",
    "comments": "comments.jsonl",
    "audio": "audio.wav",
}

MIN_SENTENCE_TOKENS = 2  # incomplete sentences are dropped at ingestion


def _require(path: Path) -> Path:
    if not path.is_file():
        raise MissingFile(str(path))
    return path


def _fmt(value) -> str:
    # repr round-trips floats exactly; ints stay plain
    if isinstance(value, bool):
        raise TypeError("bool is not a stats value")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


# -- manifest ----------------------------------------------------------------

def _parse_manifest(path: Path) -> SessionManifest:
    raw = json.loads(_require(path).read_text(encoding="utf-8"))
    try:
        streamers = tuple(
            StreamerInfo(
                streamer_id=s["streamer_id"],
                display_name=s["display_name"],
                shifts=tuple((int(a), int(b)) for a, b in s["shifts"]),
            )
            for s in raw["streamers"]
        )
        merchandise = tuple(
            MerchandiseEntry(
                merchandise_id=m["merchandise_id"],
                title=m["title"],
                price=float(m["price"]),
                launch_ts=int(m["launch_ts"]),
                batch_id=int(m["batch_id"]),
                thumbnail_path=m.get("thumbnail_path"),
            )
            for m in raw["merchandise"]
        )
        manifest = SessionManifest(
            session_id=raw["session_id"],
            start_ts=int(raw["start_ts"]),
            end_ts=int(raw["end_ts"]),
            streamers=streamers,
            merchandise=merchandise,
            files=dict(raw.get("files", DEFAULT_FILES)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation("manifest", str(exc)) from exc
    _validate_manifest(manifest)
    return manifest


def _validate_manifest(m: SessionManifest) -> None:
    if not m.start_ts < m.end_ts:
        raise SchemaViolation("start_ts", f"start_ts {m.start_ts} must precede end_ts {m.end_ts}")
    for s in m.streamers:
        shifts = sorted(s.shifts)
        for a, b in shifts:
            if not (m.start_ts <= a < b <= m.end_ts):
                raise SchemaViolation("shifts", f"shift [{a}, {b}] of {s.streamer_id} outside session")
        for (_, b0), (a1, _) in zip(shifts, shifts[1:]):
            if a1 < b0:
                raise SchemaViolation("shifts", f"overlapping shifts for {s.streamer_id}")
    last_launch = None
    for entry in m.merchandise:
        if entry.price <= 0:
            raise SchemaViolation("price", f"{entry.merchandise_id}: price {entry.price} must be > 0")
        if entry.batch_id < 0:
            raise SchemaViolation("batch_id", f"{entry.merchandise_id}: batch_id must be >= 0")
        if not m.start_ts <= entry.launch_ts < m.end_ts:
            raise SchemaViolation("launch_ts", f"{entry.merchandise_id}: launch outside session")
        if last_launch is not None and entry.launch_ts <= last_launch:
            raise SchemaViolation("launch_ts", f"{entry.merchandise_id}: launch times must strictly increase")
        last_launch = entry.launch_ts
    seen: list[int] = []
    for entry in m.merchandise:
        if seen and entry.batch_id != seen[-1] and entry.batch_id in seen:
            raise SchemaViolation("batch_id", f"batch {entry.batch_id} is not time-contiguous")
        if not seen or entry.batch_id != seen[-1]:
            seen.append(entry.batch_id)


# -- stats -------------------------------------------------------------------

def _parse_stats(path: Path) -> tuple[StatsRow, ...]:
    rows: list[StatsRow] = []
    with _require(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["minute_ts", *STAT_COLUMNS]
        if header != expected:
            raise SchemaViolation("header", f"stats header must be {expected}", line=1)
        prev_ts = None
        for lineno, cells in enumerate(reader, start=2):
            if len(cells) != len(expected):
                raise SchemaViolation("row", f"expected {len(expected)} cells, got {len(cells)}", line=lineno)
            values = {}
            for name, cell in zip(expected, cells):
                try:
                    if name == "minute_ts" or name in COUNT_COLUMNS:
                        values[name] = int(cell)
                    else:
                        values[name] = float(cell)
                except ValueError as exc:
                    raise SchemaViolation(name, f"unparseable value {cell!r}", line=lineno) from exc
            if values["minute_ts"] % 60 != 0:
                raise SchemaViolation("minute_ts", "must align to :00", line=lineno)
            if prev_ts is not None and values["minute_ts"] - prev_ts != 60:
                raise SchemaViolation("stride", f"minute_ts must advance by 60 s, got {values['minute_ts'] - prev_ts}", line=lineno)
            prev_ts = values["minute_ts"]
            for name in COUNT_COLUMNS:
                if values[name] < 0:
                    raise SchemaViolation(name, f"count {values[name]} must be >= 0", line=lineno)
            for name in RATIO_COLUMNS:
                if not 0.0 <= values[name] <= 1.0:
                    raise RatioOutOfRange(f"{name} = {values[name]} outside [0, 1] (line {lineno})")
            rows.append(StatsRow(**values))
    return tuple(rows)


# -- jsonl streams -------------------------------------------------------------

def _iter_jsonl(path: Path):
    with _require(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation("json", str(exc), line=lineno) from exc


def _parse_transcript(path: Path) -> tuple[TranscriptSentence, ...]:
    sentences: list[TranscriptSentence] = []
    prev = None
    for lineno, obj in _iter_jsonl(path):
        try:
            sent = TranscriptSentence(
                start_ms=int(obj["start_ms"]),
                end_ms=int(obj["end_ms"]),
                text=str(obj["text"]),
                streamer_id=str(obj["streamer_id"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation("sentence", str(exc), line=lineno) from exc
        if sent.start_ms >= sent.end_ms:
            raise SchemaViolation("start_ms", "start_ms must precede end_ms", line=lineno)
        if not sent.text.strip():
            raise SchemaViolation("text", "sentence text is empty", line=lineno)
        if prev is not None and sent.start_ms < prev:
            raise UnsortedStream(f"transcript out of order at line {lineno}")
        prev = sent.start_ms
        if len(tokenize(sent.text)) >= MIN_SENTENCE_TOKENS:
            sentences.append(sent)
    return tuple(sentences)


def _parse_frames(path: Path) -> tuple[FrameAnnotation, ...]:
    frames: list[FrameAnnotation] = []
    prev = None
    for lineno, obj in _iter_jsonl(path):
        try:
            faces = tuple(
                Face(bbox=tuple(float(v) for v in f["bbox"]), expr_probs=tuple(float(p) for p in f["expr_probs"]))
                for f in obj["faces"]
            )
            frame = FrameAnnotation(
                ts_ms=int(obj["ts_ms"]),
                frame_w=int(obj["frame_w"]),
                frame_h=int(obj["frame_h"]),
                faces=faces,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation("frame", str(exc), line=lineno) from exc
        if prev is not None and frame.ts_ms < prev:
            raise UnsortedStream(f"frames out of order at line {lineno}")
        prev = frame.ts_ms
        for face in frame.faces:
            if len(face.expr_probs) != 7:
                raise SchemaViolation("expr_probs", "need exactly 7 probabilities", line=lineno)
            if abs(sum(face.expr_probs) - 1.0) > 1e-6:
                raise SchemaViolation("expr_probs", f"sum {sum(face.expr_probs)} != 1", line=lineno)
            x, y, w, h = face.bbox
            if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > frame.frame_w or y + h > frame.frame_h:
                raise SchemaViolation("bbox", f"bbox {face.bbox} outside {frame.frame_w}x{frame.frame_h} frame", line=lineno)
        frames.append(frame)
    return tuple(frames)


def _parse_comments(path: Path) -> tuple[CommentEvent, ...]:
    comments: list[CommentEvent] = []
    prev = None
    for lineno, obj in _iter_jsonl(path):
        try:
            ev = CommentEvent(ts_ms=int(obj["ts_ms"]), user_id=str(obj["user_id"]), text=str(obj["text"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation("comment", str(exc), line=lineno) from exc
        if not ev.text.strip():
            raise SchemaViolation("text", "comment text is empty", line=lineno)
        if prev is not None and ev.ts_ms < prev:
            raise UnsortedStream(f"comments out of order at line {lineno}")
        prev = ev.ts_ms
        comments.append(ev)
    return tuple(comments)


# -- audio -------------------------------------------------------------------

def _read_wav(path: Path) -> tuple[np.ndarray, int]:
    with wave.open(str(_require(path)), "rb") as wav:
        if wav.getnchannels() != 1:
            raise SchemaViolation("audio.channels", f"need mono, got {wav.getnchannels()}")
        if wav.getsampwidth() != 2:
            raise SchemaViolation("audio.sample_width", f"need 16-bit PCM, got {8 * wav.getsampwidth()}-bit")
        rate = wav.getframerate()
        if rate < 16000:
            raise SchemaViolation("audio.sample_rate", f"need >= 16000 Hz, got {rate}")
        data = wav.readframes(wav.getnframes())
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    samples.setflags(write=False)
    return samples, rate


def write_wav(path: Path, samples: np.ndarray, sample_rate: int) -> None:
    pcm = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    pcm = np.round(pcm * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(sample_rate)
        wav.writeframes(pcm.tobytes())


# -- public API ----------------------------------------------------------------

def load_session(manifest_path: str | Path) -> SessionCorpus:
    """Load and validate one session; raises on the first violation."""
    manifest_path = Path(manifest_path)
    manifest = _parse_manifest(manifest_path)
    root = manifest_path.parent
    files = {**DEFAULT_FILES, **manifest.files}
    audio, rate = _read_wav(root / files["audio"])
    return SessionCorpus(
        manifest=manifest,
        stats=_parse_stats(root / files["stats"]),
        transcript=_parse_transcript(root / files["transcript"]),
        frames=_parse_frames(root / files["frames"]),
        comments=_parse_comments(root / files["comments"]),
        audio=audio,
        sample_rate=rate,
    )


def save_corpus(corpus: SessionCorpus, root: str | Path) -> Path:
    """Write a corpus to ``<root>/<session_id>/``; returns the session dir."""
    m = corpus.manifest
    session_dir = Path(root) / m.session_id
    try:
        session_dir.mkdir(parents=True, exist_ok=True)
        _write_manifest(session_dir / "manifest.json", m)
        _write_stats(session_dir / DEFAULT_FILES["stats"], corpus.stats)
        _write_jsonl(
            session_dir / DEFAULT_FILES["transcript"],
            ({"start_ms": s.start_ms, "end_ms": s.end_ms, "text": s.text, "streamer_id": s.streamer_id}
             for s in corpus.transcript),
        )
        _write_jsonl(
            session_dir / DEFAULT_FILES["frames"],
            ({"ts_ms": f.ts_ms, "frame_w": f.frame_w, "frame_h": f.frame_h,
              "faces": [{"bbox": list(face.bbox), "expr_probs": list(face.expr_probs)} for face in f.faces]}
             for f in corpus.frames),
        )
        _write_jsonl(
            session_dir / DEFAULT_FILES["comments"],
            ({"ts_ms": c.ts_ms, "user_id": c.user_id, "text": c.text} for c in corpus.comments),
        )
        write_wav(session_dir / DEFAULT_FILES["audio"], corpus.audio, corpus.sample_rate)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return session_dir


def _write_manifest(path: Path, m: SessionManifest) -> None:
    doc = {
        "session_id": m.session_id,
        "start_ts": m.start_ts,
        "end_ts": m.end_ts,
        "streamers": [
            {"streamer_id": s.streamer_id, "display_name": s.display_name,
             "shifts": [list(sh) for sh in s.shifts]}
            for s in m.streamers
        ],
        "merchandise": [
            {"merchandise_id": e.merchandise_id, "title": e.title, "price": e.price,
             "launch_ts": e.launch_ts, "batch_id": e.batch_id, "thumbnail_path": e.thumbnail_path}
            for e in m.merchandise
        ],
        "files": dict(DEFAULT_FILES),
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def _write_stats(path: Path, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["minute_ts", *STAT_COLUMNS])
        for row in rows:
            writer.writerow([row.minute_ts, *(_fmt(getattr(row, c)) for c in STAT_COLUMNS)])


def _write_jsonl(path: Path, objects) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for obj in objects:
            fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n")
