// Exploration View: three vertically aligned panels (performance
// inspection, correlation modeling, comment reference) on one shared time
// scale, with a synchronized vertical cursor, drag-to-brush selection,
// and the nine-option target selector.

import * as d3 from "d3";

import { CHANNEL_COLORS, CHANNEL_ORDER, CATEGORY_COLORS, EXPRESSION_COLORS, TimeScale } from "../encoding";
import { renderGlyph } from "../glyph";
import { SelectionStore } from "../state";
import type {
  ChannelAttributions,
  ChannelName,
  CommentsSummary,
  FeatureAttribution,
  FeaturesResponse,
  MerchandiseAttribution,
  ModelRunPayload,
  SegmentsResponse,
  TargetName,
} from "../types";
import { TARGETS } from "../types";

const MARGIN_LEFT = 52;
const AUDIO_TABS = ["volume", "pitch", "speech_rate"] as const;

export interface RunBundle {
  run: ModelRunPayload;
  channels: ChannelAttributions;
  merchandise: MerchandiseAttribution[];
}

export class ExplorationView {
  readonly scale: TimeScale;
  private audioTab: (typeof AUDIO_TABS)[number] = "volume";
  private cursorMinute = 0;
  private runBundle: RunBundle | null = null;
  private pending = false;
  private detailChannel: ChannelName = "audio";
  private featureDetail: FeatureAttribution[] = [];
  private brushStart: number | null = null;

  constructor(
    private root: HTMLElement,
    private store: SelectionStore,
    private grid: SegmentsResponse,          // 1-minute grid
    private features: FeaturesResponse,
    private comments: CommentsSummary,
    private onTargetChange: (target: TargetName) => void,
    private fetchFeatureDetail: (channel: ChannelName) => Promise<FeatureAttribution[]>,
  ) {
    const first = grid.segments[0];
    const last = grid.segments[grid.segments.length - 1];
    this.scale = new TimeScale(first.start_ts, last.end_ts);
    store.subscribe((selection) => {
      if (selection.spans.length && selection.origin !== "exploration") {
        this.cursorMinute = this.scale.minuteAt(this.scale.x(selection.spans[0][0]));
      }
      this.refreshSelection();
    });
    this.render();
  }

  setRun(bundle: RunBundle | null): void {
    this.runBundle = bundle;
    this.pending = false;
    this.render();
  }

  setPending(pending: boolean): void {
    this.pending = pending;
    this.render();
  }

  setAudioTab(tab: (typeof AUDIO_TABS)[number]): void {
    this.audioTab = tab;
    this.render();
  }

  currentRun(): RunBundle | null {
    return this.runBundle;
  }

  async showFeatureDetail(channel: ChannelName): Promise<void> {
    this.detailChannel = channel;
    this.featureDetail = await this.fetchFeatureDetail(channel);
    this.render();
    try {
      this.root.querySelector(".feature-detail")?.scrollIntoView({ block: "nearest" });
    } catch {
      // headless environments may not implement scrolling
    }
  }

  /** Every panel positions by the same pixels-per-minute (asserted in tests). */
  panelScales(): number[] {
    return Array.from(this.root.querySelectorAll<SVGSVGElement>("svg.timeline-panel"))
      .map((svg) => Number(svg.dataset.pxPerMinute));
  }

  moveCursor(minute: number): void {
    this.cursorMinute = Math.max(0, Math.min(minute, this.grid.segments.length - 1));
    this.refreshCursor();
  }

  /** Brush a run of minutes into the shared selection. */
  brushSelect(minutes: number[]): void {
    const indices = [...new Set(minutes)].filter((m) => m >= 0 && m < this.grid.segments.length).sort((a, b) => a - b);
    const spans = indices.map((i) => {
      const s = this.grid.segments[i];
      return [s.start_ts, s.end_ts] as [number, number];
    });
    this.store.set({ clipId: this.grid.clip_id, segments: indices, spans, origin: "exploration" });
    if (indices.length) {
      this.cursorMinute = indices[0];
    }
    this.refreshCursor();
  }

  render(): void {
    const host = d3.select(this.root);
    host.selectAll("*").remove();
    host.classed("run-pending", this.pending);

    const toolbar = host.append("div").attr("class", "exploration-toolbar");
    toolbar.append("label").text("target ");
    const select = toolbar.append("select").attr("class", "target-select")
      .on("change", (event: Event) => {
        const value = (event.target as HTMLSelectElement).value as TargetName;
        this.onTargetChange(value);
      });
    for (const target of TARGETS) {
      select.append("option")
        .attr("value", target)
        .property("selected", target === this.store.get().target)
        .text(target);
    }
    if (this.pending) {
      toolbar.append("span").attr("class", "spinner").text(" fitting models…");
    }

    this.renderPerformance(host);
    this.renderCorrelation(host);
    this.renderComments(host);

    // one brush overlay drives selection across all panels
    const overlay = host.append("div").attr("class", "brush-overlay-host")
      .append("svg")
      .attr("class", "brush-overlay")
      .attr("width", MARGIN_LEFT + this.scale.width)
      .attr("height", 18);
    overlay.append("rect")
      .attr("x", MARGIN_LEFT).attr("width", this.scale.width).attr("height", 18)
      .attr("fill", "#eef1f5")
      .attr("cursor", "crosshair");
    overlay.append("text").attr("x", 4).attr("y", 13).attr("class", "brush-hint").text("brush");
    overlay.on("pointerdown", (event: PointerEvent) => {
      this.brushStart = this.minuteFromEvent(event, overlay.node()!);
    });
    overlay.on("pointermove", (event: PointerEvent) => {
      this.moveCursor(this.minuteFromEvent(event, overlay.node()!));
    });
    overlay.on("pointerup", (event: PointerEvent) => {
      const end = this.minuteFromEvent(event, overlay.node()!);
      if (this.brushStart !== null) {
        const [a, b] = [Math.min(this.brushStart, end), Math.max(this.brushStart, end)];
        this.brushSelect(d3.range(a, b + 1));
      }
      this.brushStart = null;
    });

    this.refreshSelection();
    this.refreshCursor();
  }

  private minuteFromEvent(event: PointerEvent, node: SVGSVGElement): number {
    const [x] = d3.pointer(event, node);
    return this.scale.minuteAt(x - MARGIN_LEFT);
  }

  private timelineSvg(
    parent: d3.Selection<HTMLDivElement, unknown, null, undefined>,
    name: string,
    height: number,
  ) {
    const svg = parent.append("svg")
      .attr("class", `timeline-panel ${name}`)
      .attr("data-px-per-minute", this.scale.pxPerMinute)
      .attr("width", MARGIN_LEFT + this.scale.width)
      .attr("height", height);
    svg.append("line")
      .attr("class", "cursor-line")
      .attr("y1", 0).attr("y2", height)
      .attr("stroke", "#e0762e").attr("stroke-width", 1.2);
    return svg;
  }

  private xOf(minute: number): number {
    return MARGIN_LEFT + minute * this.scale.pxPerMinute;
  }

  // -- performance inspection -------------------------------------------------

  private renderPerformance(host: d3.Selection<HTMLElement, unknown, null, undefined>): void {
    const panel = host.append("div").attr("class", "panel performance-panel");
    const header = panel.append("div").attr("class", "panel-header");
    header.append("span").attr("class", "panel-title").text("performance inspection");
    for (const tab of AUDIO_TABS) {
      header.append("button")
        .attr("class", `audio-tab tab-${tab}`)
        .classed("active", tab === this.audioTab)
        .text(tab.replace("_", " "))
        .on("click", () => this.setAudioTab(tab));
    }

    // streamer tree: occupied time, name, glyph branches, radar comparison
    const streamers = panel.append("div").attr("class", "streamer-row");
    for (const streamer of this.features.streamers) {
      const card = streamers.append("div").attr("class", "streamer-card").attr("data-streamer", streamer.streamer_id);
      card.append("div").attr("class", "streamer-name").text(streamer.display_name);
      const glyphSvg = card.append("svg").attr("width", 72).attr("height", 72);
      const g = glyphSvg.append("g").attr("transform", "translate(36,36)");
      renderGlyph(g as d3.Selection<SVGGElement, unknown, null, undefined>, { blocks: streamer.glyph, gpmShare: 0.5 }, 32);
      card.append("div").attr("class", "streamer-stats").text(
        `views ${streamer.radar.views} · stay ${streamer.radar.avg_stay.toFixed(0)}s`,
      );
    }
    this.renderRadar(streamers);

    // connected box chart for the active audio feature + pause bars
    const boxes = {
      volume: this.features.audio.volume_box,
      pitch: this.features.audio.pitch_box,
      speech_rate: this.features.audio.speech_rate_box,
    }[this.audioTab];
    const audioSvg = this.timelineSvg(panel, "audio-boxes", 120);
    const lo = Math.min(...boxes.map((b) => b.min));
    const hi = Math.max(...boxes.map((b) => b.max), lo + 1e-9);
    const y = d3.scaleLinear().domain([lo, hi]).range([86, 8]);
    boxes.forEach((b, i) => {
      const cx = this.xOf(i) + this.scale.pxPerMinute / 2;
      const g = audioSvg.append("g").attr("class", "box");
      g.append("line").attr("x1", cx).attr("x2", cx).attr("y1", y(b.min)).attr("y2", y(b.max))
        .attr("stroke", CHANNEL_COLORS.audio).attr("stroke-opacity", 0.6);
      g.append("rect")
        .attr("x", cx - 4).attr("width", 8)
        .attr("y", y(b.q3)).attr("height", Math.max(1, y(b.q1) - y(b.q3)))
        .attr("fill", CHANNEL_COLORS.audio).attr("fill-opacity", 0.55);
      g.append("line").attr("x1", cx - 5).attr("x2", cx + 5).attr("y1", y(b.median)).attr("y2", y(b.median))
        .attr("stroke", "#35294f").attr("stroke-width", 1.4);
    });
    boxes.slice(1).forEach((b, i) => {
      audioSvg.append("line").attr("class", "box-link")
        .attr("x1", this.xOf(i) + this.scale.pxPerMinute / 2).attr("y1", y(boxes[i].median))
        .attr("x2", this.xOf(i + 1) + this.scale.pxPerMinute / 2).attr("y2", y(b.median))
        .attr("stroke", CHANNEL_COLORS.audio).attr("stroke-width", 1);
    });
    // pause bars with a white tick at the longest pause
    const pauseMax = Math.max(1, ...this.features.audio.per_segment_pauses.map((p) => p.count));
    this.features.audio.per_segment_pauses.forEach((p, i) => {
      const h = (p.count / pauseMax) * 22;
      audioSvg.append("rect").attr("class", "pause-bar")
        .attr("x", this.xOf(i) + 3).attr("width", this.scale.pxPerMinute - 6)
        .attr("y", 118 - h).attr("height", h)
        .attr("fill", CHANNEL_COLORS.audio).attr("fill-opacity", 0.35);
      if (p.max_ms > 0) {
        audioSvg.append("line")
          .attr("x1", this.xOf(i) + 3).attr("x2", this.xOf(i) + this.scale.pxPerMinute - 3)
          .attr("y1", 118 - h).attr("y2", 118 - h)
          .attr("stroke", "#fff").attr("stroke-width", 1);
      }
    });

    // sales-pitch streamgraph (wiggle-stacked areas per category)
    const textSvg = this.timelineSvg(panel, "text-stream", 90);
    const categories = this.features.text.categories;
    const counts = this.features.text.per_segment_counts;
    const series = d3.stack<number[]>()
      .keys(d3.range(categories.length).map(String))
      .value((row, key) => row[Number(key)])
      .offset(d3.stackOffsetWiggle)(counts);
    const maxY = d3.max(series.flat(2)) ?? 1;
    const minY = d3.min(series.flat(2)) ?? 0;
    const ty = d3.scaleLinear().domain([minY, maxY]).range([84, 6]);
    const area = d3.area<d3.SeriesPoint<number[]>>()
      .x((_, i) => this.xOf(i) + this.scale.pxPerMinute / 2)
      .y0((d) => ty(d[0]))
      .y1((d) => ty(d[1]))
      .curve(d3.curveBasis);
    series.forEach((s, si) => {
      textSvg.append("path")
        .attr("class", `stream-layer layer-${categories[si]}`)
        .attr("fill", CATEGORY_COLORS[categories[si]] ?? CHANNEL_COLORS.text)
        .attr("fill-opacity", 0.85)
        .attr("d", area(s));
    });

    // expressions above, close-up counts below (opposing areas)
    const frameSvg = this.timelineSvg(panel, "frame-areas", 90);
    const perSegment = this.features.frame.per_segment;
    const exprY = d3.scaleLinear().domain([0, 1]).range([44, 6]);
    this.features.frame.expressions.forEach((expression, ei) => {
      const layer = d3.area<{ histogram: number[] }>()
        .x((_, i) => this.xOf(i) + this.scale.pxPerMinute / 2)
        .y0(exprY(0))
        .y1((d) => exprY(d.histogram[ei]))
        .curve(d3.curveMonotoneX);
      frameSvg.append("path")
        .attr("class", `expr-area expr-${expression}`)
        .attr("fill", EXPRESSION_COLORS[expression])
        .attr("fill-opacity", 0.35)
        .attr("d", layer(perSegment));
    });
    const closeMax = Math.max(1, ...perSegment.map((p) => p.closeup_seconds));
    perSegment.forEach((p, i) => {
      const h = (p.closeup_seconds / closeMax) * 36;
      frameSvg.append("rect").attr("class", "closeup-bar")
        .attr("x", this.xOf(i) + 3).attr("width", this.scale.pxPerMinute - 6)
        .attr("y", 48).attr("height", h)
        .attr("fill", CHANNEL_COLORS.frame).attr("fill-opacity", 0.5);
    });
  }

  private renderRadar(row: d3.Selection<HTMLDivElement, unknown, null, undefined>): void {
    if (this.features.streamers.length < 2) return;
    const metrics = ["avg_online_rate", "views", "attractiveness", "avg_stay", "conversion_rate"] as const;
    const size = 120;
    const svg = row.append("svg").attr("class", "streamer-radar").attr("width", size).attr("height", size);
    const center = size / 2;
    const radius = size / 2 - 14;
    const maxima = metrics.map((m) => Math.max(1e-9, ...this.features.streamers.map((s) => s.radar[m])));
    metrics.forEach((metric, i) => {
      const angle = (i / metrics.length) * 2 * Math.PI - Math.PI / 2;
      svg.append("line")
        .attr("x1", center).attr("y1", center)
        .attr("x2", center + radius * Math.cos(angle)).attr("y2", center + radius * Math.sin(angle))
        .attr("stroke", "#d9dde3");
      svg.append("text")
        .attr("x", center + (radius + 9) * Math.cos(angle)).attr("y", center + (radius + 9) * Math.sin(angle))
        .attr("class", "radar-label").attr("text-anchor", "middle").attr("font-size", 7)
        .text(metric.split("_")[0]);
    });
    this.features.streamers.forEach((streamer, si) => {
      const points = metrics.map((m, i) => {
        const angle = (i / metrics.length) * 2 * Math.PI - Math.PI / 2;
        const r = radius * (streamer.radar[m] / maxima[i]);
        return `${center + r * Math.cos(angle)},${center + r * Math.sin(angle)}`;
      });
      svg.append("polygon")
        .attr("class", `radar-shape radar-${streamer.streamer_id}`)
        .attr("points", points.join(" "))
        .attr("fill", d3.schemeTableau10[si % 10])
        .attr("fill-opacity", 0.25)
        .attr("stroke", d3.schemeTableau10[si % 10]);
    });
  }

  // -- correlation modeling -----------------------------------------------------

  private renderCorrelation(host: d3.Selection<HTMLElement, unknown, null, undefined>): void {
    const panel = host.append("div").attr("class", "panel correlation-panel");
    panel.append("div").attr("class", "panel-header")
      .append("span").attr("class", "panel-title").text("correlation modeling");

    if (!this.runBundle) {
      panel.append("div").attr("class", "no-run").text(
        this.pending ? "model run in progress…" : "no model run yet",
      );
      return;
    }
    const { run, channels, merchandise } = this.runBundle;
    const svg = this.timelineSvg(panel, "correlation-lines", 190);
    const mid = 95;
    const yMax = Math.max(...run.y, ...run.predictions, 1e-9);
    const yMin = Math.min(...run.y, ...run.predictions, 0);
    const y = d3.scaleLinear().domain([yMin, yMax]).range([mid - 6, 8]);

    const step = d3.line<number>()
      .x((_, i) => this.xOf(i) + this.scale.pxPerMinute / 2)
      .y((v) => y(v))
      .curve(d3.curveStepAfter);
    svg.append("path").attr("class", "target-line raw")
      .attr("fill", "none").attr("stroke", "#9aa1ad").attr("stroke-dasharray", "4,3")
      .attr("d", step(run.y));
    svg.append("path").attr("class", "target-line predicted")
      .attr("fill", "none").attr("stroke", "#35415c").attr("stroke-width", 1.6)
      .attr("d", step(run.predictions));

    // stacked channel bars: positives stack above the baseline, negatives
    // below; each bar splits into a solid positive and translucent negative part
    const magnitudes = channels.segments.flatMap((row) =>
      CHANNEL_ORDER.map((c) => Math.abs(row[c].pos) + Math.abs(row[c].neg)));
    const barScale = 60 / Math.max(1e-9, Math.max(...magnitudes) * CHANNEL_ORDER.length);
    channels.segments.forEach((row, i) => {
      let up = mid;
      let down = mid;
      for (const channel of CHANNEL_ORDER) {
        const parts = row[channel];
        const posH = parts.pos * barScale;
        const negH = -parts.neg * barScale;
        const x = this.xOf(i) + 2;
        const width = this.scale.pxPerMinute - 4;
        if (posH > 0.1) {
          svg.append("rect")
            .attr("class", `channel-bar pos channel-${channel}`)
            .attr("data-channel", channel)
            .attr("x", x).attr("width", width)
            .attr("y", up - posH).attr("height", posH)
            .attr("fill", CHANNEL_COLORS[channel])
            .on("click", () => void this.showFeatureDetail(channel));
          up -= posH;
        }
        if (negH > 0.1) {
          svg.append("rect")
            .attr("class", `channel-bar neg channel-${channel}`)
            .attr("data-channel", channel)
            .attr("x", x).attr("width", width)
            .attr("y", down).attr("height", negH)
            .attr("fill", CHANNEL_COLORS[channel]).attr("fill-opacity", 0.35)
            .on("click", () => void this.showFeatureDetail(channel));
          down += negH;
        }
      }
    });
    svg.append("line").attr("x1", MARGIN_LEFT).attr("x2", MARGIN_LEFT + this.scale.width)
      .attr("y1", mid).attr("y2", mid).attr("stroke", "#c6ccd4");

    // merchandise row: price bar, contribution donut, dotted connector whose
    // length encodes the averaged target over the occupied interval
    const merchRow = panel.append("div").attr("class", "merch-donut-row");
    const maxPrice = Math.max(1e-9, ...merchandise.map((m) => m.price));
    const maxAvg = Math.max(1e-9, ...merchandise.map((m) => m.avg_target));
    for (const m of merchandise) {
      const cell = merchRow.append("div").attr("class", "merch-cell").attr("data-merch-id", m.merchandise_id);
      cell.append("div").attr("class", "merch-cell-title").text(m.merchandise_id);
      const donut = cell.append("svg").attr("class", "merch-donut").attr("width", 56).attr("height", 72);
      const connectorLength = 8 + 22 * (m.avg_target / maxAvg);
      donut.append("line").attr("class", "avg-target-connector")
        .attr("x1", 28).attr("y1", 0).attr("x2", 28).attr("y2", connectorLength)
        .attr("data-length", connectorLength.toFixed(1))
        .attr("stroke", "#9aa1ad").attr("stroke-dasharray", "3,2");
      const g = donut.append("g").attr("transform", `translate(28,${connectorLength + 22})`);
      const arc = d3.arc<{ startAngle: number; endAngle: number }>().innerRadius(11).outerRadius(19);
      let angle = 0;
      for (const channel of CHANNEL_ORDER) {
        const share = m.proportions[channel];
        if (share <= 0) continue;
        const end = angle + share * 2 * Math.PI;
        g.append("path")
          .attr("class", `donut-arc donut-${channel}`)
          .attr("fill", CHANNEL_COLORS[channel])
          .attr("fill-opacity", m.polarities[channel] >= 0 ? 0.9 : 0.35)
          .attr("d", arc({ startAngle: angle, endAngle: end }));
        angle = end;
      }
      cell.append("div").attr("class", "merch-price-bar")
        .style("width", `${8 + 40 * (m.price / maxPrice)}px`)
        .attr("title", `$${m.price}`);
    }

    // feature-level + segment-level detail for the chosen channel
    const detail = panel.append("div").attr("class", "feature-detail");
    detail.append("div").attr("class", "feature-detail-title")
      .style("border-left", `4px solid ${CHANNEL_COLORS[this.detailChannel]}`)
      .text(`${this.detailChannel} features`);
    const maxMagnitude = Math.max(1e-9, ...this.featureDetail.map((f) => Math.abs(f.positives) + Math.abs(f.negatives)));
    for (const feature of this.featureDetail) {
      const row = detail.append("div").attr("class", "feature-row").attr("data-feature", feature.feature);
      row.append("span").attr("class", "feature-name").text(feature.feature);
      const bars = row.append("svg").attr("class", "feature-bars").attr("width", 130).attr("height", 14);
      bars.append("rect").attr("class", "feature-pos")
        .attr("x", 65).attr("y", 2).attr("height", 10)
        .attr("width", 62 * (feature.positives / maxMagnitude))
        .attr("fill", CHANNEL_COLORS[this.detailChannel]);
      bars.append("rect").attr("class", "feature-neg")
        .attr("x", 65 + 62 * (feature.negatives / maxMagnitude)).attr("y", 2).attr("height", 10)
        .attr("width", -62 * (feature.negatives / maxMagnitude))
        .attr("fill", CHANNEL_COLORS[this.detailChannel]).attr("fill-opacity", 0.35);
      if (feature.per_segment) {
        const strip = row.append("svg").attr("class", "segment-strip")
          .attr("width", this.scale.width).attr("height", 14);
        const magnitude = Math.max(1e-9, ...feature.per_segment.map(Math.abs));
        feature.per_segment.forEach((value, i) => {
          strip.append("rect")
            .attr("x", i * this.scale.pxPerMinute + 1)
            .attr("width", this.scale.pxPerMinute - 2)
            .attr("y", value >= 0 ? 7 - (6 * value) / magnitude : 7)
            .attr("height", Math.max(0.5, (6 * Math.abs(value)) / magnitude))
            .attr("fill", CHANNEL_COLORS[this.detailChannel])
            .attr("fill-opacity", value >= 0 ? 0.9 : 0.35);
        });
      }
    }
  }

  // -- comment reference ----------------------------------------------------------

  private renderComments(host: d3.Selection<HTMLElement, unknown, null, undefined>): void {
    const panel = host.append("div").attr("class", "panel comments-panel");
    panel.append("div").attr("class", "panel-header")
      .append("span").attr("class", "panel-title").text("comment reference");
    const svg = this.timelineSvg(panel, "comment-volume", 96);
    const volume = this.comments.volume_per_segment;
    const vMax = Math.max(1, ...volume);
    const vy = d3.scaleLinear().domain([0, vMax]).range([80, 10]);
    const area = d3.area<number>()
      .x((_, i) => this.xOf(i) + this.scale.pxPerMinute / 2)
      .y0(80)
      .y1((v) => vy(v))
      .curve(d3.curveMonotoneX);
    svg.append("path").attr("class", "comment-volume-area")
      .attr("fill", "#cfd8e6").attr("d", area(volume));

    // zig-zag dots: chronological order along x, alternating y, semantic color
    this.comments.dots.forEach((dot, i) => {
      const minute = Math.floor(dot.ts_ms / 60000);
      const within = (dot.ts_ms % 60000) / 60000;
      svg.append("circle")
        .attr("class", "comment-dot")
        .attr("cx", this.xOf(minute) + within * this.scale.pxPerMinute)
        .attr("cy", 46 + (i % 2 ? 14 : -14))
        .attr("r", 3)
        .attr("fill", dot.color)
        .append("title").text(dot.text);
    });

    panel.append("div").attr("class", "keyword-box");
  }

  // -- shared cursor + selection rendering -----------------------------------------

  refreshCursor(): void {
    const x = this.xOf(this.cursorMinute) + this.scale.pxPerMinute / 2;
    d3.select(this.root).selectAll<SVGLineElement, unknown>(".cursor-line")
      .attr("x1", x).attr("x2", x);
    const keywords = this.comments.keywords_per_segment[this.cursorMinute] ?? [];
    const box = this.root.querySelector<HTMLDivElement>(".keyword-box");
    if (box) {
      box.textContent = keywords.map((k) => k.term).join("  ");
      box.style.marginLeft = `${Math.max(0, x - 40)}px`;
      box.dataset.minute = String(this.cursorMinute);
    }
  }

  refreshSelection(): void {
    const selection = this.store.get();
    const selected = selection.clipId === this.grid.clip_id ? new Set(
      // selection may come from another granularity: map via spans
      selection.spans.length
        ? this.grid.segments.flatMap((s, i) =>
            selection.spans.some(([a, b]) => a < s.end_ts && b > s.start_ts) ? [i] : [])
        : [],
    ) : new Set<number>();

    const host = d3.select(this.root);
    host.selectAll(".brush-shade").remove();
    for (const svg of this.root.querySelectorAll<SVGSVGElement>("svg.timeline-panel")) {
      const sel = d3.select(svg);
      for (const index of selected) {
        sel.append("rect")
          .attr("class", "brush-shade")
          .attr("data-index", index)
          .attr("x", this.xOf(index)).attr("width", this.scale.pxPerMinute)
          .attr("y", 0).attr("height", Number(svg.getAttribute("height")))
          .attr("fill", "#e0762e").attr("fill-opacity", 0.12)
          .style("pointer-events", "none");
      }
    }
    this.refreshCursor();
  }

  /** Minutes currently shaded by the brush (for tests and the record bar). */
  brushedMinutes(): number[] {
    const indices = new Set<number>();
    this.root.querySelectorAll<SVGRectElement>("svg.timeline-panel .brush-shade").forEach((rect) => {
      indices.add(Number(rect.dataset.index));
    });
    return [...indices].sort((a, b) => a - b);
  }
}
