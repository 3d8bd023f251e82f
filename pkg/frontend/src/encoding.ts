// Shared encoding constants: one definition feeds every view so channels
// read identically across the whole interface, and all timeline panels
// share one pixels-per-minute scale.

import type { ChannelName } from "./types";

export const CHANNEL_COLORS: Record<ChannelName, string> = {
  audio: "#7d57c1",
  text: "#3fa7fa",
  frame: "#1bb2b1",
  feedback: "#8a8f98",
};

export const CHANNEL_ORDER: ChannelName[] = ["audio", "text", "frame", "feedback"];

export const EXPRESSION_COLORS: Record<string, string> = {
  angry: "#d64550",
  disgust: "#8f6b2d",
  fear: "#9467bd",
  happy: "#f2b134",
  sad: "#4c72b0",
  surprise: "#e377c2",
  neutral: "#b0b7c3",
};

export const CATEGORY_COLORS: Record<string, string> = {
  Traffic: "#62a0ea",
  Interaction: "#57c4ad",
  Selling: "#3f7bd9",
  Order: "#2c5aa8",
  Urge: "#7fd0f0",
  Atmosphere: "#9db8e8",
};

export const PIXELS_PER_MINUTE = 24;

/** One time axis per clip; every exploration panel positions by it. */
export class TimeScale {
  constructor(
    public readonly startTs: number,
    public readonly endTs: number,
    public readonly pxPerMinute: number = PIXELS_PER_MINUTE,
  ) {}

  get width(): number {
    return ((this.endTs - this.startTs) / 60) * this.pxPerMinute;
  }

  x(ts: number): number {
    return ((ts - this.startTs) / 60) * this.pxPerMinute;
  }

  minuteAt(x: number): number {
    return Math.max(0, Math.min(Math.floor(x / this.pxPerMinute), Math.floor((this.endTs - this.startTs) / 60) - 1));
  }
}
