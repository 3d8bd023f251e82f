import json
import time

import pytest
from fastapi.testclient import TestClient

from retrolens.server import AppState, RecordStore, create_app, session_content_hash
from retrolens.server.bundle import validate_bundle


@pytest.fixture(scope="module")
def state(corpus_dir):
    return AppState(corpus_dir)


@pytest.fixture(scope="module")
def client(state):
    return TestClient(create_app(state))


@pytest.fixture(scope="module")
def clip_id(corpus, clip):
    return clip.clip_id


def wait_for_run(client, run_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(f"/modelruns/{run_id}").json()
        if doc["status"] in ("done", "error"):
            return doc
        time.sleep(0.1)
    raise TimeoutError(run_id)


def test_sessions_sorted_by_start(client):
    doc = client.get("/sessions").json()
    starts = [s["start_ts"] for s in doc["items"]]
    assert starts == sorted(starts)


def test_session_summary_gmv_consistent(client, corpus):
    doc = client.get(f"/sessions/{corpus.session_id}").json()
    gmv = sum(m["sales"] for m in doc["merchandise"])
    assert abs(doc["gmv"] - gmv) <= 1e-6
    for m in doc["merchandise"]:
        assert 0 <= m["exposure_click_ratio"] <= 1
        assert 0 <= m["click_turnover_ratio"] <= 1


def test_clips_listing(client, corpus, clip_id):
    doc = client.get(f"/sessions/{corpus.session_id}/clips").json()
    assert [c["clip_id"] for c in doc["items"]] == [clip_id]


def test_segments_both_granularities(client, clip_id):
    one = client.get(f"/clips/{clip_id}/segments", params={"granularity": 1}).json()
    five = client.get(f"/clips/{clip_id}/segments", params={"granularity": 5}).json()
    assert len(one["segments"]) == 30
    assert len(five["segments"]) == 6
    assert all(len(s["vector"]) == 25 for s in one["segments"])


def test_unknown_clip_404_with_code(client):
    resp = client.get("/clips/nope/segments")
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "unknown_clip"


def test_features_channels(client, clip_id):
    for channel in ("audio", "text", "frame", "feedback"):
        doc = client.get(f"/clips/{clip_id}/features", params={"channel": channel}).json()
        assert channel in doc
    full = client.get(f"/clips/{clip_id}/features").json()
    assert "streamers" in full and len(full["streamers"]) == 2


def test_comments_summary(client, clip_id):
    doc = client.get(f"/clips/{clip_id}/comments/summary").json()
    assert len(doc["volume_per_segment"]) == 30
    assert sum(doc["volume_per_segment"]) == len(doc["dots"])
    assert len(doc["keywords_per_segment"]) == 30


def test_projection_deterministic_etag(client, clip_id):
    a = client.get(f"/clips/{clip_id}/projection", params={"granularity": 1, "seed": 3})
    b = client.get(f"/clips/{clip_id}/projection", params={"granularity": 1, "seed": 3})
    assert a.headers["etag"] == b.headers["etag"]
    assert a.json()["final_kl"] <= a.json()["initial_kl"]


def test_model_run_lifecycle_and_idempotency(client, clip_id):
    first = client.post(f"/clips/{clip_id}/modelruns", json={"target": "likes", "seed": 11})
    assert first.status_code == 202
    run_id = first.json()["run_id"]
    doc = wait_for_run(client, run_id)
    assert doc["status"] == "done"
    assert doc["run"]["winner"] in ("linear", "random_forest", "gradient_boosted", "perceptron")
    again = client.post(f"/clips/{clip_id}/modelruns", json={"target": "likes", "seed": 11})
    assert again.json()["run_id"] == run_id
    assert again.json()["status"] == "done"


def test_model_run_unknown_target(client, clip_id):
    resp = client.post(f"/clips/{clip_id}/modelruns", json={"target": "velocity", "seed": 1})
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "unknown_target"


def test_attribution_levels(client, clip_id):
    run_id = client.post(f"/clips/{clip_id}/modelruns", json={"target": "likes", "seed": 11}).json()["run_id"]
    wait_for_run(client, run_id)
    channel = client.get(f"/modelruns/{run_id}/attributions", params={"level": "channel"}).json()
    assert len(channel["segments"]) == 30
    for row in channel["segments"]:
        for parts in row.values():
            assert parts["sum"] == pytest.approx(parts["pos"] + parts["neg"], abs=0)
    merch = client.get(f"/modelruns/{run_id}/attributions", params={"level": "merchandise"}).json()
    assert len(merch["merchandise"]) == 3
    feature = client.get(
        f"/modelruns/{run_id}/attributions", params={"level": "feature", "channel": "audio"}
    ).json()
    assert [r["feature"] for r in feature["channels"]["audio"]]
    assert "per_segment" not in feature["channels"]["audio"][0]
    segment = client.get(
        f"/modelruns/{run_id}/attributions", params={"level": "segment", "channel": "audio"}
    ).json()
    assert len(segment["channels"]["audio"][0]["per_segment"]) == 30


def test_records_crud_and_validation(client, clip_id):
    created = client.post("/records", json={
        "category": "Drawback", "target": "gpm", "clip_id": clip_id,
        "granularity": 1, "segments": [2, 3, 4],
    })
    assert created.status_code == 201
    record_id = created.json()["record"]["record_id"]
    assert created.json()["record"]["glyph"]["seconds"] == 180

    listing = client.get("/records").json()["items"]
    assert any(r["record_id"] == record_id for r in listing)

    export = client.get("/records/export").json()
    assert any(r["record_id"] == record_id for r in export["records"])

    bad = client.post("/records", json={
        "category": "Drawback", "target": "gpm", "clip_id": clip_id,
        "granularity": 1, "segments": [999],
    })
    assert bad.status_code == 400

    deleted = client.delete(f"/records/{record_id}")
    assert deleted.status_code == 200
    assert not any(r["record_id"] == record_id for r in client.get("/records").json()["items"])
    assert client.delete(f"/records/{record_id}").status_code == 404


def test_record_store_survives_restart(tmp_path):
    path = tmp_path / "records.jsonl"
    store = RecordStore(path)
    a = store.create("Highlight", "gpm", "clip:b0", 1, [1, 2], {"seconds": 120})
    b = store.create("Drawback", "likes", "clip:b0", 5, [0], {"seconds": 300})
    store.delete(a.record_id)
    again = RecordStore(path)
    assert [r.record_id for r in again.list()] == [b.record_id]
    assert again.export() == store.export()
    again.compact()
    third = RecordStore(path)
    assert third.export() == store.export()


def test_feature_cache_invalidates_on_source_change(corpus, session_dir, tmp_path):
    from retrolens.corpus import segment_clips
    from retrolens.server.cache import FeatureCache

    cache = FeatureCache(tmp_path / "cache")
    clip = segment_clips(corpus)[0]
    _, hit0 = cache.clip_features(corpus, clip, session_dir)
    _, hit1 = cache.clip_features(corpus, clip, session_dir)
    assert not hit0 and hit1

    hash_before = session_content_hash(session_dir)
    stats = session_dir / "stats.csv"
    original = stats.read_text()
    try:
        stats.write_text(original + "\n")
        assert session_content_hash(session_dir) != hash_before
        _, hit2 = cache.clip_features(corpus, clip, session_dir)
        assert not hit2
    finally:
        stats.write_text(original)


def test_report_bundle_endpoint_validates(client, clip_id):
    doc = client.get(f"/clips/{clip_id}/report", params={"seed": 3}).json()
    validate_bundle(doc)
    assert doc["clip_id"] == clip_id
    assert set(doc["segments"]) == {"1", "5"}


def test_corpus_load_error(tmp_path):
    from retrolens.errors import CorpusLoadError

    with pytest.raises(CorpusLoadError):
        AppState(tmp_path)
