"""Model a target statistic and unpack the attribution summaries.

The matrix joins 13 non-target statistics with 6 per-minute channel
aggregates (plus a lagged target). Four families fit on the first 70% of
minutes and are scored on the rest; the composite blends min-max
normalized MAE and MAPE. The winner refits on all rows and is explained
with exact (trees/linear) or permutation-sampled (perceptron) Shapley
values against the training-mean reference.
"""

import tempfile
from pathlib import Path

import numpy as np

from retrolens.corpus import load_session, segment_clips, synth_corpus
from retrolens.features import extract_clip_features
from retrolens.fusion import build_grid, build_model_matrix
from retrolens.modeling import (
    execute_model_run,
    summarize_channels,
    summarize_features,
    summarize_merchandise,
)
from retrolens.textpitch import synth_labeled_corpus, train_classifier

root = Path(tempfile.mkdtemp(prefix="retrolens-demo-"))
session_dir = synth_corpus(seed=7, minutes=30, root=root)
corpus = load_session(session_dir / "manifest.json")
clip = segment_clips(corpus)[0]
classifier, _ = train_classifier(synth_labeled_corpus(7), seed=7)
features = extract_clip_features(corpus, clip, classifier)

matrix = build_model_matrix(features, build_grid(clip, 1), target="gpm")
print(f"matrix: {matrix.X.shape[0]} minutes x {matrix.X.shape[1]} inputs "
      f"(target {matrix.target!r} excluded)")

run = execute_model_run(matrix, seed=7)
print(f"\n{'family':<18}{'MAE':>10}{'MAPE %':>10}{'composite':>11}")
for r in run.reports:
    mark = "  <- winner" if r["model"] == run.winner else ""
    print(f"{r['model']:<18}{r['mae']:>10.3f}{r['mape']:>10.2f}{r['composite']:>11.3f}{mark}")

# local accuracy: base + sum(phi) reconstructs every prediction
gap = np.abs(run.base_value + run.shap.sum(axis=1) - run.predictions).max()
print(f"\nlocal accuracy: max |base + sum(phi) - prediction| = {gap:.2e}")

channels = summarize_channels(run.shap, run.feature_names, run.channel_by_feature)
t = int(np.argmax(run.y))
print(f"\nchannel pushes at the peak minute (t={t}):")
for name, parts in channels[t].items():
    print(f"  {name:<9} sum {parts['sum']:+8.3f}  (pos {parts['pos']:+.3f}, neg {parts['neg']:+.3f})")

merch = summarize_merchandise(
    run.shap, run.feature_names, run.channel_by_feature,
    list(corpus.manifest.merchandise), clip.span, run.minute_ts, run.y,
)
print("\nper-merchandise summary:")
for m in merch:
    shares = ", ".join(f"{c} {p:.0%}" for c, p in m["proportions"].items())
    print(f"  {m['merchandise_id']} (${m['price']}): avg {run.target} {m['avg_target']:.2f}; {shares}")

print("\ntop feedback features by total contribution magnitude:")
for row in summarize_features(run.shap, run.feature_names, run.channel_by_feature, "feedback")[:5]:
    print(f"  {row['feature']:<22} positives {row['positives']:+9.3f}  negatives {row['negatives']:+9.3f}")
