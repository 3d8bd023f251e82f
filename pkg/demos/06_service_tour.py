"""Tour the HTTP surface end to end against an in-process app instance.

The same endpoints back the browser frontend: session overviews for the
table + beeswarms, segment payloads for the glyph map, model runs for the
correlation panels, and the record store for saved selections.
"""

import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from retrolens.corpus import synth_corpus
from retrolens.server import AppState, create_app

root = Path(tempfile.mkdtemp(prefix="retrolens-demo-"))
synth_corpus(seed=7, minutes=15, root=root)
client = TestClient(create_app(AppState(root)))

sessions = client.get("/sessions").json()["items"]
session = sessions[0]
print(f"session {session['session_id']}: gpm {session['gpm']:.2f}, gmv {session['gmv']:.0f}")
for m in session["merchandise"]:
    print(f"  {m['merchandise_id']} {m['title']!r}: sales {m['sales']:.0f}, "
          f"exposure-click {m['exposure_click_ratio']:.2f}, click-turnover {m['click_turnover_ratio']:.2f}")

clip_id = client.get(f"/sessions/{session['session_id']}/clips").json()["items"][0]["clip_id"]
segments = client.get(f"/clips/{clip_id}/segments", params={"granularity": 5}).json()
print(f"\n{clip_id}: {len(segments['segments'])} five-minute segments")

run_id = client.post(f"/clips/{clip_id}/modelruns", json={"target": "likes", "seed": 7}).json()["run_id"]
print(f"queued model run {run_id}", end="", flush=True)
while True:
    doc = client.get(f"/modelruns/{run_id}").json()
    if doc["status"] in ("done", "error"):
        break
    print(".", end="", flush=True)
    time.sleep(0.2)
print(f" {doc['status']}; winner = {doc['run']['winner']}")

attributions = client.get(f"/modelruns/{run_id}/attributions", params={"level": "channel"}).json()
first = attributions["segments"][0]
print("channel sums at t=0:", {k: round(v["sum"], 3) for k, v in first.items()})

record = client.post("/records", json={
    "category": "Highlight", "target": "likes", "clip_id": clip_id,
    "granularity": 5, "segments": [0, 1],
}).json()["record"]
print(f"\nsaved record {record['record_id']} ({record['category']}, "
      f"{record['glyph']['seconds']} selected seconds)")
print("export now holds", len(client.get("/records/export").json()["records"]), "record(s)")
