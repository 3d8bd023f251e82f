// A fetch stub backed by an offline report bundle (written by the
// backend's `report` command), so view tests exercise the real client and
// payload shapes without a live server.

import bundleJson from "./fixtures/bundle.json";

import { ApiClient } from "../src/api";
import type { RecordPayload } from "../src/types";

export const bundle = bundleJson as any;

export interface StubServer {
  fetch: typeof fetch;
  records: RecordPayload[];
  requests: string[];
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function makeStubServer(): StubServer {
  const records: RecordPayload[] = [...bundle.records.records];
  const requests: string[] = [];
  let recordCounter = 0;

  const runsById = new Map<string, any>(bundle.modelruns.map((r: any) => [r.run_id, r]));
  const runsByTarget = new Map<string, any>(bundle.modelruns.map((r: any) => [r.target, r]));

  const stubFetch: typeof fetch = async (input, init) => {
    const url = typeof input === "string" ? input : (input as Request).url;
    const method = init?.method ?? "GET";
    requests.push(`${method} ${url}`);
    const [path, query] = url.split("?");
    const params = new URLSearchParams(query ?? "");

    if (path === "/sessions") return json({ version: 1, items: bundle.sessions });
    const sessionClips = path.match(/^\/sessions\/([^/]+)\/clips$/);
    if (sessionClips) return json({ version: 1, items: bundle.clips });
    const sessionOne = path.match(/^\/sessions\/([^/]+)$/);
    if (sessionOne) return json({ version: 1, ...bundle.session });

    const segments = path.match(/^\/clips\/([^/]+)\/segments$/);
    if (segments) {
      const g = params.get("granularity") ?? "1";
      return json({ version: 1, ...bundle.segments[g] });
    }
    if (path.match(/^\/clips\/([^/]+)\/features$/)) {
      return json({ version: 1, ...bundle.features });
    }
    if (path.match(/^\/clips\/([^/]+)\/comments\/summary$/)) {
      return json({ version: 1, ...bundle.comments_summary });
    }
    if (path.match(/^\/clips\/([^/]+)\/projection$/)) {
      const g = params.get("granularity") ?? "1";
      return json({ version: 1, ...bundle.projection[g] });
    }

    if (path.match(/^\/clips\/([^/]+)\/modelruns$/) && method === "POST") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      const run = runsByTarget.get(body.target);
      if (!run) return json({ error: { code: "unknown_target", message: body.target } }, 404);
      return json({ version: 1, run_id: run.run_id, status: "done" });
    }
    const runStatus = path.match(/^\/modelruns\/([^/]+)$/);
    if (runStatus) {
      const run = runsById.get(runStatus[1]);
      if (!run) return json({ error: { code: "unknown_run", message: runStatus[1] } }, 404);
      return json({ version: 1, run_id: run.run_id, status: "done", run });
    }
    const attributions = path.match(/^\/modelruns\/([^/]+)\/attributions$/);
    if (attributions) {
      const level = params.get("level") ?? "channel";
      const channel = params.get("channel");
      const doc = bundle.attributions[attributions[1]]?.[level];
      if (!doc) return json({ error: { code: "unknown_run", message: attributions[1] } }, 404);
      if ((level === "feature" || level === "segment") && channel) {
        return json({ version: 1, ...doc, channels: { [channel]: doc.channels[channel] } });
      }
      return json({ version: 1, ...doc });
    }

    if (path === "/records" && method === "GET") return json({ version: 1, items: records });
    if (path === "/records" && method === "POST") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      const grid = bundle.segments[String(body.granularity)] ?? bundle.segments["1"];
      const bad = (body.segments as number[]).some((i) => i < 0 || i >= grid.segments.length);
      if (bad) return json({ error: { code: "invalid_request", message: "segment index outside grid" } }, 400);
      const blocks = grid.segments[body.segments[0]]?.blocks ?? {};
      const record: RecordPayload = {
        record_id: `rec-${recordCounter++}`,
        category: body.category,
        target: body.target,
        clip_id: body.clip_id,
        granularity: body.granularity,
        segments: body.segments,
        glyph: { ...blocks, seconds: body.segments.length * body.granularity * 60 },
        created_ts: 1_673_740_800 + recordCounter,
      };
      records.push(record);
      return json({ version: 1, record }, 201);
    }
    const del = path.match(/^\/records\/([^/]+)$/);
    if (del && method === "DELETE") {
      const index = records.findIndex((r) => r.record_id === del[1]);
      if (index < 0) return json({ error: { code: "unknown_record", message: del[1] } }, 404);
      records.splice(index, 1);
      return json({ version: 1, deleted: del[1] });
    }
    if (path === "/records/export") {
      return json({ version: 1, records });
    }
    return json({ error: { code: "not_found", message: url } }, 404);
  };

  return { fetch: stubFetch, records, requests };
}

export function makeClient(server: StubServer = makeStubServer()): { api: ApiClient; server: StubServer } {
  return { api: new ApiClient("", server.fetch), server };
}

export const CLIP_ID: string = bundle.clip_id;
