// The linked-selection store: the single source of truth every view reads
// from and writes to. Views never talk to each other directly.

import type { TargetName } from "./types";

export type OriginView = "none" | "session" | "segment" | "exploration" | "records";

export interface LinkedSelection {
  clipId: string | null;
  /** Segment indices in the active grid, ascending. */
  segments: number[];
  /** Epoch-second spans of the selected segments (for cross-granularity mapping). */
  spans: [number, number][];
  origin: OriginView;
  target: TargetName;
}

export const EMPTY_SELECTION: LinkedSelection = {
  clipId: null,
  segments: [],
  spans: [],
  origin: "none",
  target: "gpm",
};

type Listener = (selection: LinkedSelection) => void;

export class SelectionStore {
  private selection: LinkedSelection = EMPTY_SELECTION;
  private listeners = new Set<Listener>();

  get(): LinkedSelection {
    return this.selection;
  }

  /** Replace the selection (there is exactly one) and notify every view. */
  set(next: Partial<LinkedSelection> & { origin: OriginView }): void {
    const merged: LinkedSelection = {
      ...this.selection,
      ...next,
      segments: [...(next.segments ?? this.selection.segments)].sort((a, b) => a - b),
      spans: next.spans ?? this.selection.spans,
    };
    this.selection = merged;
    for (const listener of this.listeners) {
      listener(merged);
    }
  }

  clear(origin: OriginView = "none"): void {
    this.set({ ...EMPTY_SELECTION, target: this.selection.target, clipId: this.selection.clipId, origin });
  }

  setTarget(target: TargetName, origin: OriginView): void {
    this.set({ target, origin });
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}

/** Map spans onto another grid: indices of segments overlapping any span. */
export function segmentsForSpans(
  spans: [number, number][],
  grid: { start_ts: number; end_ts: number }[],
): number[] {
  const hit: number[] = [];
  grid.forEach((segment, index) => {
    const overlaps = spans.some(([a, b]) => a < segment.end_ts && b > segment.start_ts);
    if (overlaps) {
      hit.push(index);
    }
  });
  return hit;
}
