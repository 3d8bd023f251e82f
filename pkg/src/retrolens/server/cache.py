"""On-disk caches for clip features, model runs, and the bootstrap
classifier. Cache keys include a content hash over the session's source
files, so editing any source file invalidates the cached features."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..config import Config
from ..corpus.io import DEFAULT_FILES
from ..corpus.types import Clip, SessionCorpus
from ..features import ClipFeatures, extract_clip_features, features_from_dict, features_to_dict
from ..modeling.run import ModelRun
from ..textpitch import PitchClassifier, synth_labeled_corpus, train_classifier


def session_content_hash(session_dir: str | Path) -> str:
    """Hash over manifest + every referenced stream file."""
    session_dir = Path(session_dir)
    digest = hashlib.sha256()
    for name in ["manifest.json", *sorted(DEFAULT_FILES.values())]:
        path = session_dir / name
        if path.exists():
            digest.update(name.encode())
            digest.update(path.read_bytes())
    return digest.hexdigest()[:16]


class FeatureCache:
    def __init__(self, root: str | Path, cfg: Config = Config()):
        self.root = Path(root)
        self.cfg = cfg
        self._classifier: PitchClassifier | None = None

    # -- classifier bootstrap --------------------------------------------

    def classifier(self) -> PitchClassifier:
        """Load the configured checkpoint, or train a deterministic
        bootstrap model on the bundled synthetic corpus and cache it."""
        if self._classifier is not None:
            return self._classifier
        if self.cfg.text.classifier_path:
            self._classifier = PitchClassifier.load(self.cfg.text.classifier_path)
            return self._classifier
        path = self.root / f"classifier-s{self.cfg.text.seed}.json"
        if path.exists():
            self._classifier = PitchClassifier.load(path)
        else:
            clf, _ = train_classifier(synth_labeled_corpus(self.cfg.text.seed), seed=self.cfg.text.seed)
            self.root.mkdir(parents=True, exist_ok=True)
            clf.save(path)
            self._classifier = clf
        return self._classifier

    # -- clip features ------------------------------------------------------

    def _features_path(self, corpus: SessionCorpus, clip: Clip, content_hash: str) -> Path:
        return self.root / corpus.session_id / content_hash / f"{clip.clip_id.replace(':', '_')}.json"

    def clip_features(
        self, corpus: SessionCorpus, clip: Clip, session_dir: str | Path
    ) -> tuple[ClipFeatures, bool]:
        """Returns (features, cache_hit)."""
        content_hash = session_content_hash(session_dir)
        path = self._features_path(corpus, clip, content_hash)
        if path.exists():
            doc = json.loads(path.read_text(encoding="utf-8"))
            return features_from_dict(doc, corpus), True
        feats = extract_clip_features(corpus, clip, self.classifier(), self.cfg)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(features_to_dict(feats), sort_keys=True), encoding="utf-8")
        return feats, False

    # -- model runs -----------------------------------------------------------

    def run_path(self, run_id: str) -> Path:
        return self.root / "runs" / f"{run_id}.json"

    def load_run(self, run_id: str) -> ModelRun | None:
        path = self.run_path(run_id)
        if not path.exists():
            return None
        return ModelRun.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def store_run(self, run: ModelRun) -> None:
        path = self.run_path(run.run_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(run.to_dict(), sort_keys=True), encoding="utf-8")

    def runs_for_clip(self, clip_id: str) -> list[ModelRun]:
        runs_dir = self.root / "runs"
        if not runs_dir.is_dir():
            return []
        out = []
        for path in sorted(runs_dir.glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            if doc.get("clip_id") == clip_id:
                out.append(ModelRun.from_dict(doc))
        return out
