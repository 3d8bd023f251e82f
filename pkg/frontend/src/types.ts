// Payload types mirrored from the server's JSON responses.

export const TARGETS = [
  "sales_amount", "sales_volume", "uv_value", "gpm",
  "entries", "departures", "likes", "comments", "avg_stay",
] as const;
export type TargetName = (typeof TARGETS)[number];

export type ChannelName = "audio" | "text" | "frame" | "feedback";

export interface MerchandiseSummary {
  merchandise_id: string;
  title: string;
  price: number;
  launch_ts: number;
  sales: number;
  volume: number;
  exposure_click_ratio: number;
  click_turnover_ratio: number;
}

export interface SessionSummary {
  session_id: string;
  start_ts: number;
  duration_s: number;
  gpm: number;
  gmv: number;
  merchandise: MerchandiseSummary[];
  ratio_distributions: {
    exposure_click_ratio: number[];
    click_turnover_ratio: number[];
  };
}

export interface ClipInfo {
  clip_id: string;
  session_id: string;
  span: [number, number];
  merchandise_ids: string[];
}

export interface AudioBlocks {
  volume: [number, number, number];
  pitch: [number, number, number];
  speech_rate: [number, number, number];
  pause: [number, number, number];
}

export interface SegmentPayload {
  start_ts: number;
  end_ts: number;
  vector: number[];
  blocks: {
    audio: AudioBlocks;
    text: Record<string, number>;
    face: Record<string, number>;
  };
  pause_ms: number;
  closeup_seconds: number;
  word_total: number;
  gpm_mean: number;
}

export interface SegmentsResponse {
  clip_id: string;
  granularity: 1 | 5;
  segments: SegmentPayload[];
}

export interface ProjectionResponse {
  clip_id: string;
  granularity: number;
  coordinates?: [number, number][];
  error?: string;
  final_kl?: number;
}

export interface BoxStat {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export interface FeaturesResponse {
  clip_id: string;
  audio: {
    volume_box: BoxStat[];
    pitch_box: BoxStat[];
    speech_rate_box: BoxStat[];
    pauses: { start_ms: number; end_ms: number }[];
    per_segment_pauses: { count: number; max_ms: number }[];
  };
  text: {
    categories: string[];
    per_segment_counts: number[][];
  };
  frame: {
    expressions: string[];
    per_segment: { primary: string | null; frequency: number; histogram: number[]; closeup_seconds: number }[];
  };
  feedback: {
    columns: string[];
    rows: number[][];
  };
  streamers: {
    streamer_id: string;
    display_name: string;
    radar: {
      avg_online_rate: number;
      views: number;
      attractiveness: number;
      avg_stay: number;
      conversion_rate: number;
    };
    glyph: RecordGlyph;
  }[];
}

export interface CommentDot {
  ts_ms: number;
  text: string;
  scalar: number;
  color: string;
}

export interface CommentsSummary {
  volume_per_segment: number[];
  dots: CommentDot[];
  keywords_per_segment: { term: string; weight: number }[][];
}

export interface FamilyReport {
  model: string;
  mae: number;
  mape: number | null;
  composite: number;
}

export interface ModelRunPayload {
  run_id: string;
  clip_id: string;
  target: TargetName;
  seed: number;
  reports: FamilyReport[];
  winner: string;
  predictions: number[];
  base_value: number;
  shap: number[][];
  feature_names: string[];
  channel_by_feature: Record<string, ChannelName>;
  minute_ts: number[];
  y: number[];
}

export interface RunStatus {
  run_id: string;
  status: "queued" | "running" | "done" | "error";
  run?: ModelRunPayload;
  error?: string;
}

export interface SignedParts {
  sum: number;
  pos: number;
  neg: number;
}

export interface ChannelAttributions {
  segments: Record<ChannelName, SignedParts>[];
  minute_ts: number[];
  base_value: number;
}

export interface MerchandiseAttribution {
  merchandise_id: string;
  title: string;
  price: number;
  interval: [number, number];
  segments: number[];
  proportions: Record<ChannelName, number>;
  polarities: Record<ChannelName, number>;
  channel_sums: Record<ChannelName, SignedParts>;
  avg_target: number;
}

export interface FeatureAttribution {
  feature: string;
  positives: number;
  negatives: number;
  per_segment?: number[];
}

export interface RecordGlyph {
  audio?: AudioBlocks;
  text?: Record<string, number>;
  face?: Record<string, number>;
  seconds?: number;
}

export interface RecordPayload {
  record_id: string;
  category: "Highlight" | "Drawback";
  target: string;
  clip_id: string;
  granularity: number;
  segments: number[];
  glyph: RecordGlyph;
  created_ts: number;
}
