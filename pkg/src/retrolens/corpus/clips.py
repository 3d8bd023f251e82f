"""Session-to-clip segmentation.

A clip covers one merchandise batch: it starts at the batch's first launch
and runs until the next batch's first launch (the last clip runs to session
end). Batch membership is explicit in the manifest, never inferred.
"""

from __future__ import annotations

from .types import Clip, SessionCorpus


def segment_clips(corpus: SessionCorpus) -> list[Clip]:
    """One clip per distinct batch_id, in chronological order."""
    m = corpus.manifest
    if not m.merchandise:
        return []
    batches: list[tuple[int, int, list[str]]] = []  # (batch_id, first_launch, ids)
    for entry in m.merchandise:
        if batches and batches[-1][0] == entry.batch_id:
            batches[-1][2].append(entry.merchandise_id)
        else:
            batches.append((entry.batch_id, entry.launch_ts, [entry.merchandise_id]))
    clips = []
    for i, (batch_id, first_launch, ids) in enumerate(batches):
        end = batches[i + 1][1] if i + 1 < len(batches) else m.end_ts
        clips.append(
            Clip(
                clip_id=f"{m.session_id}:b{batch_id}",
                session_id=m.session_id,
                span=(first_launch, end),
                batch_id=batch_id,
                merchandise_ids=tuple(ids),
            )
        )
    return clips


def find_clip(corpus: SessionCorpus, clip_id: str) -> Clip | None:
    for clip in segment_clips(corpus):
        if clip.clip_id == clip_id:
            return clip
    return None
