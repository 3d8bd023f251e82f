// Session View: sortable session table; expanding a row reveals the
// merchandise timeline with opposing beeswarm ratio charts. Clicking a
// merchandise box selects its time interval everywhere.

import * as d3 from "d3";

import { segmentsForSpans, SelectionStore } from "../state";
import type { SegmentsResponse, SessionSummary } from "../types";

type SortKey = "start_ts" | "duration_s" | "gpm" | "gmv";

export class SessionView {
  private sortKey: SortKey = "start_ts";
  private descending = false;
  private expanded = new Set<string>();

  constructor(
    private root: HTMLElement,
    private store: SelectionStore,
    private sessions: SessionSummary[],
    private activeGrid: () => SegmentsResponse,
  ) {
    this.render();
  }

  setSort(key: SortKey, descending: boolean): void {
    this.sortKey = key;
    this.descending = descending;
    this.render();
  }

  sortedSessions(): SessionSummary[] {
    const sign = this.descending ? -1 : 1;
    return [...this.sessions].sort((a, b) => sign * (a[this.sortKey] - b[this.sortKey]));
  }

  /** Select the [launch, next launch) interval of one merchandise. */
  selectMerchandise(sessionId: string, merchandiseId: string): void {
    const session = this.sessions.find((s) => s.session_id === sessionId);
    if (!session) return;
    const index = session.merchandise.findIndex((m) => m.merchandise_id === merchandiseId);
    if (index < 0) return;
    const launch = session.merchandise[index].launch_ts;
    const next = index + 1 < session.merchandise.length
      ? session.merchandise[index + 1].launch_ts
      : session.start_ts + session.duration_s;
    const grid = this.activeGrid();
    const span: [number, number] = [launch, next];
    this.store.set({
      clipId: grid.clip_id,
      segments: segmentsForSpans([span], grid.segments),
      spans: [span],
      origin: "session",
    });
  }

  render(): void {
    const host = d3.select(this.root);
    host.selectAll("*").remove();
    const table = host.append("table").attr("class", "session-table");
    const header = table.append("thead").append("tr");
    const columns: [SortKey, string][] = [
      ["start_ts", "time"], ["duration_s", "duration"], ["gpm", "GPM"], ["gmv", "GMV"],
    ];
    header.append("th").text("");
    for (const [key, label] of columns) {
      header.append("th")
        .attr("class", "sortable")
        .attr("data-key", key)
        .text(label + (this.sortKey === key ? (this.descending ? " ▾" : " ▴") : ""))
        .on("click", () => this.setSort(key, this.sortKey === key ? !this.descending : true));
    }

    const body = table.append("tbody");
    for (const session of this.sortedSessions()) {
      const row = body.append("tr")
        .attr("class", "session-row")
        .attr("data-session-id", session.session_id);
      row.append("td")
        .attr("class", "expander")
        .text(this.expanded.has(session.session_id) ? "▾" : "▸")
        .on("click", () => {
          if (!this.expanded.delete(session.session_id)) {
            this.expanded.add(session.session_id);
          }
          this.render();
        });
      row.append("td").text(new Date(session.start_ts * 1000).toISOString().slice(0, 16).replace("T", " "));
      row.append("td").text(`${Math.round(session.duration_s / 60)} min`);
      row.append("td").attr("class", "gpm-cell").text(session.gpm.toFixed(2));
      row.append("td").text(session.gmv.toFixed(0));

      if (this.expanded.has(session.session_id)) {
        const detail = body.append("tr").attr("class", "session-detail");
        const cell = detail.append("td").attr("colspan", 5);
        this.renderMerchandise(cell, session);
      }
    }
  }

  private renderMerchandise(cell: d3.Selection<HTMLTableCellElement, unknown, null, undefined>, session: SessionSummary): void {
    const timeline = cell.append("div").attr("class", "merch-timeline");
    const maxSales = Math.max(1, ...session.merchandise.map((m) => m.sales));
    for (const merch of session.merchandise) {
      const box = timeline.append("div")
        .attr("class", "merch-box")
        .attr("data-merch-id", merch.merchandise_id)
        .on("click", () => this.selectMerchandise(session.session_id, merch.merchandise_id));
      const offsetMin = Math.round((merch.launch_ts - session.start_ts) / 60);
      box.append("div").attr("class", "merch-launch").text(`+${offsetMin} min`);
      const info = box.append("div").attr("class", "merch-info");
      info.append("div").attr("class", "merch-title").text(`${merch.title} ($${merch.price})`);
      info.append("div").attr("class", "merch-sales")
        .style("background", d3.interpolateBlues(0.25 + 0.7 * (merch.sales / maxSales)))
        .text(`sales ${merch.sales.toFixed(0)} / vol ${merch.volume}`);
      this.renderBeeswarms(box, session, merch.exposure_click_ratio, merch.click_turnover_ratio);
    }
  }

  /** Two opposing dot strips: exposure-click above, click-turnover below. */
  private renderBeeswarms(
    box: d3.Selection<HTMLDivElement, unknown, null, undefined>,
    session: SessionSummary,
    exposureValue: number,
    turnoverValue: number,
  ): void {
    const width = 180;
    const svg = box.append("svg")
      .attr("class", "beeswarm")
      .attr("width", width)
      .attr("height", 44);
    const x = d3.scaleLinear().domain([0, 1]).range([4, width - 4]);
    const strips: [number[], number, number, string][] = [
      [session.ratio_distributions.exposure_click_ratio, 12, -1, "exposure"],
      [session.ratio_distributions.click_turnover_ratio, 32, 1, "turnover"],
    ];
    for (const [values, baseline, direction, name] of strips) {
      const bins = new Map<number, number>();
      svg.selectAll(null)
        .data(values)
        .join("circle")
        .attr("class", `bee bee-${name}`)
        .attr("r", 2)
        .attr("cx", (v) => x(v))
        .attr("cy", (v) => {
          const bin = Math.round(x(v) / 4);
          const stack = bins.get(bin) ?? 0;
          bins.set(bin, stack + 1);
          return baseline + direction * Math.min(stack, 3) * 3;
        })
        .attr("fill", "#b9c0cc");
    }
    svg.append("circle").attr("class", "bee-highlight bee-exposure-value")
      .attr("cx", x(exposureValue)).attr("cy", 12).attr("r", 3.4).attr("fill", "#e0762e");
    svg.append("circle").attr("class", "bee-highlight bee-turnover-value")
      .attr("cx", x(turnoverValue)).attr("cy", 32).attr("r", 3.4).attr("fill", "#2e7de0");
  }
}
