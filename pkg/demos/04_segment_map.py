"""Build 25-dimensional segment vectors for a clip and project them to the
2-D segment map with the exact t-SNE implementation.

Vector layout: 12 audio values (min/median/max of volume, pitch, speech
rate, pause occupancy), 6 sales-pitch word counts, 7 expression-histogram
fractions; each block min-max normalized over the clip before
concatenation. The projection is content-hash seeded, so permuting the
input rows permutes the outputs and reruns are byte-stable.
"""

import tempfile
from pathlib import Path

import numpy as np

from retrolens.corpus import load_session, segment_clips, synth_corpus
from retrolens.features import extract_clip_features
from retrolens.fusion import build_grid, segment_vectors, tsne
from retrolens.textpitch import synth_labeled_corpus, train_classifier

root = Path(tempfile.mkdtemp(prefix="retrolens-demo-"))
session_dir = synth_corpus(seed=7, minutes=20, root=root)
corpus = load_session(session_dir / "manifest.json")
clip = segment_clips(corpus)[0]
classifier, _ = train_classifier(synth_labeled_corpus(7), seed=7)
features = extract_clip_features(corpus, clip, classifier)

grid = build_grid(clip, granularity=1)
vectors, blocks = segment_vectors(features, grid)
print(f"{len(grid.segments)} segments x {vectors.shape[1]} dims, all in [0, 1]")

result = tsne(vectors, out_dim=2, perplexity=5, seed=3)
print(f"t-SNE: KL {result.initial_kl:.3f} -> {result.final_kl:.3f} "
      f"after {result.iterations} iterations\n")

# a terminal scatter: chronological indices placed on a 48x16 canvas
coords = result.coordinates
span = coords.max(axis=0) - coords.min(axis=0)
norm = (coords - coords.min(axis=0)) / np.where(span > 0, span, 1)
canvas = [[" "] * 49 for _ in range(17)]
for i, (x, y) in enumerate(norm):
    canvas[int(y * 16)][int(x * 48)] = "abcdefghijklmnopqrstuvwxyz"[i % 26]
print("\n".join("".join(row) for row in canvas))
print("\n(letters are minutes in chronological order; nearby letters = similar delivery)")
