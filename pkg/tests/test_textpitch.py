import numpy as np
import pytest

from retrolens.corpus.types import TranscriptSentence
from retrolens.errors import CategoryUnderfilled, EmptySentence
from retrolens.fusion.grid import SegmentGrid
from retrolens.textpitch import (
    CATEGORIES,
    PitchClassifier,
    _stratified_folds,
    classify,
    pitch_counts_per_segment,
    synth_labeled_corpus,
    train_classifier,
)
from retrolens.tokens import tokenize


@pytest.fixture(scope="module")
def trained():
    corpus = synth_labeled_corpus(7)
    clf, report = train_classifier(corpus, seed=7)
    return corpus, clf, report


def test_six_categories():
    assert len(CATEGORIES) == 6
    assert CATEGORIES == ("Traffic", "Interaction", "Selling", "Order", "Urge", "Atmosphere")


def test_corpus_size():
    corpus = synth_labeled_corpus(7)
    assert len(corpus) == 600
    for cat in CATEGORIES:
        assert sum(1 for s in corpus if s.label == cat) == 100


def test_cv_accuracy_at_least_80_percent(trained):
    _, _, report = trained
    assert report.mean_accuracy >= 0.80
    assert len(report.fold_accuracies) == 5


def test_underfilled_category_rejected():
    corpus = synth_labeled_corpus(7)
    thin = [s for s in corpus if s.label != "Urge"] + [s for s in corpus if s.label == "Urge"][:2]
    with pytest.raises(CategoryUnderfilled):
        train_classifier(thin, seed=7)


def test_training_is_deterministic():
    corpus = synth_labeled_corpus(7)
    a, _ = train_classifier(corpus, seed=7)
    b, _ = train_classifier(corpus, seed=7)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.bias, b.bias)
    assert a.vocabulary == b.vocabulary


def test_training_sentence_memorized(trained):
    corpus, clf, _ = trained
    sample = next(s for s in corpus if s.label == "Urge")
    label, probs = classify(clf, sample.text)
    assert label == "Urge"
    assert probs[CATEGORIES.index("Urge")] == probs.max()


def test_empty_sentence_rejected(trained):
    _, clf, _ = trained
    with pytest.raises(EmptySentence):
        classify(clf, "   ")


def test_out_of_vocabulary_uniform_fallback(trained):
    _, clf, _ = trained
    label, probs = classify(clf, "zzzqqq xxxyyy")
    assert probs == pytest.approx(np.full(6, 1 / 6))
    assert label == CATEGORIES[0]


def test_probabilities_sum_to_one(trained):
    corpus, clf, _ = trained
    for s in corpus[::53]:
        _, probs = classify(clf, s.text)
        assert abs(probs.sum() - 1.0) <= 1e-9


def test_whitespace_invariance(trained):
    corpus, clf, _ = trained
    text = corpus[5].text
    a = classify(clf, text)
    b = classify(clf, f"   {text}  \n")
    assert a[0] == b[0]
    assert np.array_equal(a[1], b[1])


def test_checkpoint_round_trip(trained, tmp_path):
    corpus, clf, _ = trained
    path = tmp_path / "clf.json"
    clf.save(path)
    again = PitchClassifier.load(path)
    for s in corpus[::29]:
        la, pa = classify(clf, s.text)
        lb, pb = classify(again, s.text)
        assert la == lb
        assert np.array_equal(pa, pb)


def test_fold_partition_depends_on_seed_only():
    corpus = synth_labeled_corpus(7)
    labels = [s.label for s in corpus]
    assert [f.tolist() for f in _stratified_folds(labels, 1)] == [f.tolist() for f in _stratified_folds(labels, 1)]
    assert [f.tolist() for f in _stratified_folds(labels, 1)] != [f.tolist() for f in _stratified_folds(labels, 2)]
    # stratification: each fold has 20 per category
    for fold in _stratified_folds(labels, 1):
        for cat in CATEGORIES:
            assert sum(1 for i in fold if labels[i] == cat) == 20


# -- per-segment counts ----------------------------------------------------------


def _grid(start=1000, n=5, step=60):
    return SegmentGrid(
        clip_id="c", granularity=1,
        segments=tuple((start + i * step, start + (i + 1) * step) for i in range(n)),
    )


def test_counts_midpoint_assignment():
    grid = _grid()
    text = "one two three four five six seven eight nine ten"
    assert len(tokenize(text)) == 10
    # session starts at epoch 1000; midpoint at 1000 + three minutes + a bit
    sent = TranscriptSentence(start_ms=185_000, end_ms=195_000, text=text, streamer_id="s")
    counts = pitch_counts_per_segment([sent], ["Selling"], grid, session_start_ts=1000)
    assert counts[3].tolist() == [0, 0, 10, 0, 0, 0]
    assert counts.sum() == 10


def test_counts_straddling_sentence_counts_once():
    grid = _grid()
    sent = TranscriptSentence(start_ms=55_000, end_ms=70_000, text="a b c", streamer_id="s")
    counts = pitch_counts_per_segment([sent], ["Order"], grid, session_start_ts=1000)
    # midpoint 62.5 s -> segment 1, wholly
    assert counts[1][CATEGORIES.index("Order")] == 3
    assert counts.sum() == 3


def test_counts_empty_segment_zero():
    grid = _grid()
    counts = pitch_counts_per_segment([], [], grid, session_start_ts=1000)
    assert counts.shape == (5, 6)
    assert counts.sum() == 0


def test_counts_total_matches_word_totals(features):
    from retrolens.fusion import build_grid

    grid = build_grid(features.clip, 1)
    counts = pitch_counts_per_segment(features.sentences, features.labels, grid, features.session_start_ts)
    for ci, cat in enumerate(CATEGORIES):
        total = sum(
            wc for lab, wc in zip(features.labels, features.word_counts) if lab == cat
        )
        assert counts[:, ci].sum() == total
