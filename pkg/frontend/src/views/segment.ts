// Segment View: the glyph scatter. Segments project to 2-D, connect
// chronologically with hue-varying curves, support lasso selection,
// wheel-based semantic zoom, and a 1/5-minute granularity toggle.

import * as d3 from "d3";

import { renderGlyph } from "../glyph";
import { segmentsForSpans, SelectionStore } from "../state";
import type { ProjectionResponse, SegmentsResponse } from "../types";

const WIDTH = 460;
const HEIGHT = 420;

export class SegmentView {
  private positions: [number, number][] = [];
  private zoomLevel = 1;
  private lassoPath: [number, number][] = [];
  private svg!: d3.Selection<SVGSVGElement, unknown, null, undefined>;

  constructor(
    private root: HTMLElement,
    private store: SelectionStore,
    private payload: SegmentsResponse,
    private projection: ProjectionResponse,
    private onGranularity: (granularity: 1 | 5) => void,
  ) {
    store.subscribe(() => this.refreshSelection());
    this.render();
  }

  update(payload: SegmentsResponse, projection: ProjectionResponse): void {
    this.payload = payload;
    this.projection = projection;
    this.render();
  }

  /** Scatter coordinates normalized into the viewport (fallback: a time ribbon). */
  layout(): [number, number][] {
    const n = this.payload.segments.length;
    const coords = this.projection.coordinates;
    if (!coords || coords.length !== n) {
      return this.payload.segments.map((_, i) => [
        40 + ((WIDTH - 80) * i) / Math.max(1, n - 1),
        HEIGHT / 2,
      ]);
    }
    const xs = coords.map((c) => c[0]);
    const ys = coords.map((c) => c[1]);
    const x = d3.scaleLinear().domain([Math.min(...xs), Math.max(...xs)]).range([46, WIDTH - 46]);
    const y = d3.scaleLinear().domain([Math.min(...ys), Math.max(...ys)]).range([HEIGHT - 46, 46]);
    return coords.map((c) => [x(c[0]), y(c[1])]);
  }

  /** Route a lasso polygon (or programmatic index list) into the store. */
  lassoSelect(indices: number[]): void {
    const spans = indices.map((i) => {
      const s = this.payload.segments[i];
      return [s.start_ts, s.end_ts] as [number, number];
    });
    this.store.set({
      clipId: this.payload.clip_id,
      segments: indices,
      spans,
      origin: "segment",
    });
  }

  private indicesInPolygon(polygon: [number, number][]): number[] {
    return this.positions
      .map((p, i) => (d3.polygonContains(polygon, p) ? i : -1))
      .filter((i) => i >= 0);
  }

  setZoom(level: number): void {
    this.zoomLevel = Math.max(0.5, Math.min(4, level));
    const cx = WIDTH / 2;
    const cy = HEIGHT / 2;
    const w = WIDTH / this.zoomLevel;
    const h = HEIGHT / this.zoomLevel;
    this.svg.attr("viewBox", `${cx - w / 2} ${cy - h / 2} ${w} ${h}`);
    // semantic zoom: glyph detail only at readable sizes
    this.svg.classed("zoomed-in", this.zoomLevel >= 1.5);
  }

  render(): void {
    const host = d3.select(this.root);
    host.selectAll("*").remove();

    const toolbar = host.append("div").attr("class", "segment-toolbar");
    for (const granularity of [1, 5] as const) {
      toolbar.append("button")
        .attr("class", `granularity-toggle g${granularity}`)
        .classed("active", this.payload.granularity === granularity)
        .text(`${granularity} min`)
        .on("click", () => this.onGranularity(granularity));
    }
    if (this.projection.error) {
      toolbar.append("span").attr("class", "projection-note")
        .text("too few segments to project; showing chronological ribbon");
    }

    this.positions = this.layout();
    this.svg = host.append("svg")
      .attr("class", "segment-scatter")
      .attr("width", WIDTH)
      .attr("height", HEIGHT)
      .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    const svg = this.svg;

    // time curves between consecutive segments, hue encodes order
    const line = d3.line().curve(d3.curveCatmullRom.alpha(0.6));
    const n = this.positions.length;
    for (let i = 0; i + 1 < n; i++) {
      svg.append("path")
        .attr("class", "time-curve")
        .attr("fill", "none")
        .attr("stroke", d3.interpolateViridis(n > 1 ? i / (n - 1) : 0))
        .attr("stroke-width", 1.4)
        .attr("stroke-opacity", 0.7)
        .attr("d", line([this.positions[i], this.positions[i + 1]]));
    }

    const maxGpm = Math.max(1e-9, ...this.payload.segments.map((s) => s.gpm_mean));
    this.payload.segments.forEach((segment, i) => {
      const group = svg.append("g")
        .attr("class", "glyph")
        .attr("data-index", i)
        .attr("transform", `translate(${this.positions[i][0]},${this.positions[i][1]})`)
        .on("click", () => this.lassoSelect([i]));
      renderGlyph(group as d3.Selection<SVGGElement, unknown, null, undefined>, {
        blocks: segment.blocks,
        gpmShare: segment.gpm_mean / maxGpm,
      }, 16);
      group.append("title").text(
        `minute ${(segment.start_ts - this.payload.segments[0].start_ts) / 60}` +
        ` | words ${segment.word_total} | pauses ${segment.pause_ms} ms` +
        ` | close-up ${segment.closeup_seconds}s | gpm ${segment.gpm_mean.toFixed(2)}`,
      );
    });

    // pointer lasso: freehand polygon over the scatter
    svg.on("pointerdown", (event: PointerEvent) => {
      this.lassoPath = [d3.pointer(event, svg.node())] as [number, number][];
    });
    svg.on("pointermove", (event: PointerEvent) => {
      if (this.lassoPath.length) {
        this.lassoPath.push(d3.pointer(event, svg.node()) as [number, number]);
      }
    });
    svg.on("pointerup", () => {
      if (this.lassoPath.length > 2) {
        const hits = this.indicesInPolygon(this.lassoPath);
        if (hits.length) {
          this.lassoSelect(hits);
        }
      }
      this.lassoPath = [];
    });
    svg.on("wheel", (event: WheelEvent) => {
      event.preventDefault();
      this.setZoom(this.zoomLevel * (event.deltaY < 0 ? 1.2 : 1 / 1.2));
    });

    this.refreshSelection();
  }

  refreshSelection(): void {
    const selection = this.store.get();
    let selected: Set<number>;
    if (selection.clipId !== this.payload.clip_id) {
      selected = new Set();
    } else if (selection.spans.length) {
      // selections may originate on another granularity: map by time overlap
      selected = new Set(segmentsForSpans(selection.spans, this.payload.segments));
    } else {
      selected = new Set(selection.segments);
    }
    d3.select(this.root)
      .selectAll<SVGGElement, unknown>("g.glyph")
      .classed("selected", function () {
        return selected.has(Number((this as SVGGElement).dataset.index));
      });
  }
}
