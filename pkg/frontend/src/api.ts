// Typed client over the analytics service endpoints. List responses are
// {version, items}; object responses carry their fields alongside version.

import type {
  ChannelAttributions,
  ChannelName,
  ClipInfo,
  CommentsSummary,
  FeatureAttribution,
  FeaturesResponse,
  MerchandiseAttribution,
  ProjectionResponse,
  RecordPayload,
  RunStatus,
  SegmentsResponse,
  SessionSummary,
  TargetName,
} from "./types";

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({}));
      throw new Error(body?.error?.message ?? `GET ${path} failed (${resp.status})`);
    }
    return resp.json() as Promise<T>;
  }

  private async send<T>(method: string, path: string, payload?: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({}));
      throw new Error(body?.error?.message ?? `${method} ${path} failed (${resp.status})`);
    }
    return resp.json() as Promise<T>;
  }

  async sessions(): Promise<SessionSummary[]> {
    const doc = await this.get<{ items: SessionSummary[] }>("/sessions");
    return doc.items;
  }

  async clips(sessionId: string): Promise<ClipInfo[]> {
    const doc = await this.get<{ items: ClipInfo[] }>(`/sessions/${encodeURIComponent(sessionId)}/clips`);
    return doc.items;
  }

  segments(clipId: string, granularity: 1 | 5): Promise<SegmentsResponse> {
    return this.get(`/clips/${encodeURIComponent(clipId)}/segments?granularity=${granularity}`);
  }

  features(clipId: string): Promise<FeaturesResponse> {
    return this.get(`/clips/${encodeURIComponent(clipId)}/features`);
  }

  commentsSummary(clipId: string): Promise<CommentsSummary> {
    return this.get(`/clips/${encodeURIComponent(clipId)}/comments/summary`);
  }

  projection(clipId: string, granularity: 1 | 5, seed = 0): Promise<ProjectionResponse> {
    return this.get(`/clips/${encodeURIComponent(clipId)}/projection?granularity=${granularity}&seed=${seed}`);
  }

  startRun(clipId: string, target: TargetName, seed = 0): Promise<RunStatus> {
    return this.send("POST", `/clips/${encodeURIComponent(clipId)}/modelruns`, { target, seed });
  }

  runStatus(runId: string): Promise<RunStatus> {
    return this.get(`/modelruns/${runId}`);
  }

  /** POST then poll until the run reaches a terminal state. */
  async awaitRun(clipId: string, target: TargetName, seed = 0, intervalMs = 400): Promise<RunStatus> {
    let status = await this.startRun(clipId, target, seed);
    while (status.status === "queued" || status.status === "running") {
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
      status = await this.runStatus(status.run_id);
    }
    if (status.status === "error") {
      throw new Error(status.error ?? `run ${status.run_id} failed`);
    }
    if (!status.run) {
      // the enqueue response reports "done" for cached runs without the payload
      status = await this.runStatus(status.run_id);
    }
    return status;
  }

  channelAttributions(runId: string): Promise<ChannelAttributions> {
    return this.get(`/modelruns/${runId}/attributions?level=channel`);
  }

  async merchandiseAttributions(runId: string): Promise<MerchandiseAttribution[]> {
    const doc = await this.get<{ merchandise: MerchandiseAttribution[] }>(
      `/modelruns/${runId}/attributions?level=merchandise`,
    );
    return doc.merchandise;
  }

  async featureAttributions(runId: string, channel: ChannelName, withSegments = false): Promise<FeatureAttribution[]> {
    const level = withSegments ? "segment" : "feature";
    const doc = await this.get<{ channels: Record<string, FeatureAttribution[]> }>(
      `/modelruns/${runId}/attributions?level=${level}&channel=${channel}`,
    );
    return doc.channels[channel] ?? [];
  }

  async records(): Promise<RecordPayload[]> {
    const doc = await this.get<{ items: RecordPayload[] }>("/records");
    return doc.items;
  }

  async createRecord(input: {
    category: "Highlight" | "Drawback";
    target: string;
    clip_id: string;
    granularity: number;
    segments: number[];
  }): Promise<RecordPayload> {
    const doc = await this.send<{ record: RecordPayload }>("POST", "/records", input);
    return doc.record;
  }

  deleteRecord(recordId: string): Promise<unknown> {
    return this.send("DELETE", `/records/${recordId}`);
  }

  exportUrl(): string {
    return `${this.baseUrl}/records/export`;
  }
}
