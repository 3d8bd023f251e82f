import { describe, expect, it } from "vitest";

import { CLIP_ID, bundle, makeClient } from "./helpers";

describe("ApiClient", () => {
  it("lists sessions and clips", async () => {
    const { api } = makeClient();
    const sessions = await api.sessions();
    expect(sessions.length).toBe(1);
    const clips = await api.clips(sessions[0].session_id);
    expect(clips[0].clip_id).toBe(CLIP_ID);
  });

  it("fetches segments for both granularities", async () => {
    const { api } = makeClient();
    const one = await api.segments(CLIP_ID, 1);
    const five = await api.segments(CLIP_ID, 5);
    expect(one.segments.length).toBe(12);
    expect(five.segments.length).toBe(3);
    expect(one.segments[0].vector.length).toBe(25);
  });

  it("starts a run and polls to completion", async () => {
    const { api } = makeClient();
    const status = await api.awaitRun(CLIP_ID, "gpm", 7, 1);
    expect(status.status).toBe("done");
    expect(status.run?.target).toBe("gpm");
    expect(status.run?.reports.length).toBe(4);
  });

  it("rejects unknown targets with the server's message", async () => {
    const { api } = makeClient();
    await expect(api.startRun(CLIP_ID, "velocity" as never)).rejects.toThrow();
  });

  it("round-trips records", async () => {
    const { api } = makeClient();
    const before = await api.records();
    const record = await api.createRecord({
      category: "Drawback", target: "gpm", clip_id: CLIP_ID, granularity: 1, segments: [1, 2],
    });
    expect(record.category).toBe("Drawback");
    const after = await api.records();
    expect(after.length).toBe(before.length + 1);
    await api.deleteRecord(record.record_id);
    expect((await api.records()).length).toBe(before.length);
  });

  it("exposes channel attributions whose parts reconcile", async () => {
    const { api } = makeClient();
    const run = bundle.modelruns[0];
    const channels = await api.channelAttributions(run.run_id);
    for (const row of channels.segments) {
      for (const parts of Object.values(row)) {
        expect(parts.sum).toBeCloseTo(parts.pos + parts.neg, 9);
      }
    }
  });
});
