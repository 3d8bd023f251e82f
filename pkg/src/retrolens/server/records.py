"""File-backed record store: an append-only JSON-lines log with compaction.

A record preserves an analyst selection (target, clip, segments, glyph
summary) under a Highlight or Drawback tag. The log replays on open, so
the store survives restarts; deletes append tombstones and compaction
rewrites the live set.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import UnknownRecord

CATEGORIES = ("Highlight", "Drawback")


@dataclass(frozen=True)
class Record:
    record_id: str
    category: str
    target: str
    clip_id: str
    granularity: int
    segments: tuple[int, ...]
    glyph: dict = field(default_factory=dict)
    created_ts: int = 0


class RecordStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, Record] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                op = json.loads(line)
                if op["op"] == "create":
                    rec = Record(
                        record_id=op["record"]["record_id"],
                        category=op["record"]["category"],
                        target=op["record"]["target"],
                        clip_id=op["record"]["clip_id"],
                        granularity=op["record"]["granularity"],
                        segments=tuple(op["record"]["segments"]),
                        glyph=op["record"]["glyph"],
                        created_ts=op["record"]["created_ts"],
                    )
                    self._records[rec.record_id] = rec
                elif op["op"] == "delete":
                    self._records.pop(op["record_id"], None)

    def _append(self, op: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(op, sort_keys=True, ensure_ascii=False) + "\n")

    def create(self, category: str, target: str, clip_id: str, granularity: int,
               segments: list[int], glyph: dict) -> Record:
        if category not in CATEGORIES:
            raise ValueError(f"category must be one of {CATEGORIES}, got {category!r}")
        rec = Record(
            record_id=uuid.uuid4().hex[:12],
            category=category, target=target, clip_id=clip_id,
            granularity=granularity, segments=tuple(segments),
            glyph=glyph, created_ts=int(time.time()),
        )
        with self._lock:
            self._records[rec.record_id] = rec
            self._append({"op": "create", "record": self._to_dict(rec)})
        return rec

    def delete(self, record_id: str) -> None:
        with self._lock:
            if record_id not in self._records:
                raise UnknownRecord(record_id)
            del self._records[record_id]
            self._append({"op": "delete", "record_id": record_id})

    def list(self) -> list[Record]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: (r.created_ts, r.record_id))

    def export(self) -> dict:
        return {"version": 1, "records": [self._to_dict(r) for r in self.list()]}

    def compact(self) -> None:
        """Rewrite the log with only live records."""
        with self._lock:
            tmp = self.path.with_suffix(".tmp")
            with tmp.open("w", encoding="utf-8") as fh:
                for rec in sorted(self._records.values(), key=lambda r: (r.created_ts, r.record_id)):
                    fh.write(json.dumps({"op": "create", "record": self._to_dict(rec)},
                                        sort_keys=True, ensure_ascii=False) + "\n")
            tmp.replace(self.path)

    @staticmethod
    def _to_dict(rec: Record) -> dict:
        doc = asdict(rec)
        doc["segments"] = list(rec.segments)
        return doc
