import json

import pytest

from retrolens.corpus import load_session, segment_clips, synth_corpus
from retrolens.features import extract_clip_features
from retrolens.textpitch import synth_labeled_corpus, train_classifier

SEED = 7


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Bundled 30-minute synthetic session."""
    root = tmp_path_factory.mktemp("corpus")
    synth_corpus(SEED, 30, root)
    return root


@pytest.fixture(scope="session")
def session_dir(corpus_dir):
    return corpus_dir / f"synth-s{SEED}-m30"


@pytest.fixture(scope="session")
def corpus(session_dir):
    return load_session(session_dir / "manifest.json")


@pytest.fixture(scope="session")
def ground_truth(session_dir):
    return json.loads((session_dir / "ground_truth.json").read_text())


@pytest.fixture(scope="session")
def clip(corpus):
    return segment_clips(corpus)[0]


@pytest.fixture(scope="session")
def classifier():
    clf, report = train_classifier(synth_labeled_corpus(SEED), seed=SEED)
    return clf


@pytest.fixture(scope="session")
def features(corpus, clip, classifier):
    return extract_clip_features(corpus, clip, classifier)


@pytest.fixture(scope="session")
def long_corpus_dir(tmp_path_factory):
    """120-minute session: enough rows for the linear-recovery check."""
    root = tmp_path_factory.mktemp("corpus-long")
    synth_corpus(SEED, 120, root)
    return root / f"synth-s{SEED}-m120"


@pytest.fixture(scope="session")
def long_features(long_corpus_dir, classifier):
    corpus = load_session(long_corpus_dir / "manifest.json")
    clip = segment_clips(corpus)[0]
    return extract_clip_features(corpus, clip, classifier)
