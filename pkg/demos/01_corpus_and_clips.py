"""Generate a synthetic session, validate it, and segment it into clips.

A session directory bundles six files: the manifest (span, streamers and
their shifts, merchandise launches with batch ids), per-minute platform
statistics, and the media streams. Loading validates every invariant up
front, so everything downstream can assume clean data.
"""

import tempfile
from pathlib import Path

from retrolens.corpus import load_session, segment_clips, synth_corpus

root = Path(tempfile.mkdtemp(prefix="retrolens-demo-"))
session_dir = synth_corpus(seed=7, minutes=12, root=root)
print(f"wrote {session_dir}")
for path in sorted(session_dir.iterdir()):
    print(f"  {path.name:18} {path.stat().st_size:>10,} bytes")

corpus = load_session(session_dir / "manifest.json")
m = corpus.manifest
print(f"\nsession {m.session_id}: {m.duration_s // 60} minutes, "
      f"{len(m.streamers)} streamers, {len(m.merchandise)} merchandise")
print(f"stats rows: {len(corpus.stats)} (one per minute, 14 metrics each)")
print(f"transcript: {len(corpus.transcript)} sentences | "
      f"frames: {len(corpus.frames)} | comments: {len(corpus.comments)}")
print(f"audio: {len(corpus.audio) / corpus.sample_rate:.0f} s @ {corpus.sample_rate} Hz")

# one clip per merchandise batch, spanning launch to next launch
for clip in segment_clips(corpus):
    start = clip.span[0] - m.start_ts
    end = clip.span[1] - m.start_ts
    print(f"\nclip {clip.clip_id}: minutes {start // 60}..{end // 60}, "
          f"items {', '.join(clip.merchandise_ids)}")

# the generator records its own parameters for oracle-style checks
import json

truth = json.loads((session_dir / "ground_truth.json").read_text())
print(f"\nground truth: {truth['target']} = linear({', '.join(truth['weights'])}) "
      f"+ noise(sigma={truth['noise_sigma']})")
