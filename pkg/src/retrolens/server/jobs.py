"""Bounded-pool job queue for model runs. Fitting takes seconds, so the
UI polls: POST enqueues (idempotent per run_id), GET reports status."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor


class JobQueue:
    def __init__(self, workers: int = 2):
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._lock = threading.Lock()
        self._status: dict[str, dict] = {}

    def submit(self, job_id: str, fn) -> dict:
        """Enqueue fn under job_id; repeated submissions return the
        existing status."""
        with self._lock:
            if job_id in self._status:
                return dict(self._status[job_id])
            self._status[job_id] = {"status": "queued"}

        def wrapped():
            with self._lock:
                self._status[job_id] = {"status": "running"}
            try:
                fn()
            except Exception as exc:  # surfaced via polling
                with self._lock:
                    self._status[job_id] = {"status": "error", "error": str(exc)}
            else:
                with self._lock:
                    self._status[job_id] = {"status": "done"}

        self._pool.submit(wrapped)
        return {"status": "queued"}

    def status(self, job_id: str) -> dict | None:
        with self._lock:
            st = self._status.get(job_id)
            return dict(st) if st else None

    def mark_done(self, job_id: str) -> None:
        with self._lock:
            self._status[job_id] = {"status": "done"}
