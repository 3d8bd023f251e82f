import json

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from retrolens.errors import PerplexityTooLarge, TooFewPoints
from retrolens.fusion import comment_colors, palette_color, tsne


def two_clusters(seed=0, n_per=10, dims=25, gap=3.0):
    rng = np.random.default_rng(seed)
    return np.vstack([
        rng.normal(0, 0.05, (n_per, dims)),
        rng.normal(gap, 0.05, (n_per, dims)),
    ])


def test_two_cluster_separation():
    pts = two_clusters()
    Y = tsne(pts, out_dim=2, perplexity=5, seed=1).coordinates
    intra = max(cdist(Y[:10], Y[:10]).max(), cdist(Y[10:], Y[10:]).max())
    inter = cdist(Y[:10], Y[10:]).min()
    assert intra < inter


def test_duplicates_coincide():
    pts = np.vstack([two_clusters(), two_clusters()[3]])
    Y = tsne(pts, out_dim=2, perplexity=5, seed=1).coordinates
    dup_dist = np.linalg.norm(Y[3] - Y[-1])
    pairwise = cdist(Y, Y)[np.triu_indices(len(Y), 1)]
    assert dup_dist <= np.percentile(pairwise, 1)


def test_deterministic_given_seed():
    pts = two_clusters(seed=2)
    a = tsne(pts, out_dim=2, perplexity=5, seed=9)
    b = tsne(pts, out_dim=2, perplexity=5, seed=9)
    assert np.array_equal(a.coordinates, b.coordinates)
    assert a.final_kl == b.final_kl


def test_seed_changes_layout():
    pts = two_clusters(seed=2)
    a = tsne(pts, out_dim=2, perplexity=5, seed=1)
    b = tsne(pts, out_dim=2, perplexity=5, seed=2)
    assert not np.array_equal(a.coordinates, b.coordinates)


def test_permutation_equivariance():
    pts = two_clusters(seed=4)
    perm = np.random.default_rng(5).permutation(len(pts))
    base = tsne(pts, out_dim=2, perplexity=5, seed=3)
    permuted = tsne(pts[perm], out_dim=2, perplexity=5, seed=3)
    assert np.array_equal(permuted.coordinates, base.coordinates[perm])


def test_kl_descends():
    for seed in range(3):
        pts = np.random.default_rng(seed).normal(size=(30, 8))
        res = tsne(pts, out_dim=2, perplexity=7, seed=seed)
        assert np.isfinite(res.final_kl)
        assert res.final_kl <= res.initial_kl


def test_kl_descends_in_1d():
    pts = two_clusters(seed=6)
    res = tsne(pts, out_dim=1, perplexity=5, seed=0)
    assert res.coordinates.shape == (20, 1)
    assert res.final_kl <= res.initial_kl


def test_too_few_points():
    with pytest.raises(TooFewPoints):
        tsne(np.zeros((3, 4)), perplexity=0.5)


def test_perplexity_bound():
    with pytest.raises(PerplexityTooLarge):
        tsne(np.random.default_rng(0).normal(size=(10, 4)), perplexity=3.0)


def test_finite_coordinates():
    pts = np.random.default_rng(1).normal(size=(40, 12))
    res = tsne(pts, out_dim=2, perplexity=10, seed=0)
    assert np.all(np.isfinite(res.coordinates))
    assert res.iterations == 1000


# -- comment colors --------------------------------------------------------------


def test_identical_comments_identical_scalars():
    texts = ["same words here", "same words here", "totally different topic", "another thing entirely",
             "same words here", "more stuff about things"]
    out = comment_colors(texts, seed=0)
    assert out[0]["scalar"] == out[1]["scalar"] == out[4]["scalar"]
    assert out[0]["color"] == out[1]["color"]


def test_few_comments_fallback():
    out = comment_colors(["a b", "c d", "e f"], seed=0)
    assert [d["scalar"] for d in out] == [0.5, 0.5, 0.5]


def test_scalars_in_unit_interval():
    texts = [f"comment number {i} about topic {i % 3}" for i in range(12)]
    out = comment_colors(texts, seed=1)
    for d in out:
        assert 0.0 <= d["scalar"] <= 1.0
        assert d["color"].startswith("#") and len(d["color"]) == 7


def test_palette_endpoints():
    assert palette_color(0.0) == "#3b4cc0"
    assert palette_color(1.0) == "#b40426"
    assert palette_color(0.5) == "#dddddd"


def test_two_topic_separation_rate(tmp_path):
    """Measured over 20 seeds before freezing: topic scalars split by one
    threshold in at least 90% of seeds."""
    from retrolens.corpus import load_session, synth_corpus

    separable = 0
    total = 0
    for seed in range(20):
        session_dir = synth_corpus(seed, 12, tmp_path / f"s{seed}")
        corpus = load_session(session_dir / "manifest.json")
        topics = json.loads((session_dir / "ground_truth.json").read_text())["comment_topics"]
        texts = [c.text for c in corpus.comments]
        total += 1
        if len(texts) < 8:
            separable += 1
            continue
        scalars = np.array([d["scalar"] for d in comment_colors(texts, seed=seed)])
        a = scalars[[i for i, t in enumerate(topics) if t == "praise"]]
        b = scalars[[i for i, t in enumerate(topics) if t == "logistics"]]
        separable += (a.max() < b.min()) or (b.max() < a.min())
    assert separable >= 0.9 * total
