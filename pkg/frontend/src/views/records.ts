// Record View: saved selections with glyph thumbnails, save buttons for
// the current selection (Highlight or Drawback), delete, and export.

import * as d3 from "d3";

import { ApiClient } from "../api";
import { renderGlyph } from "../glyph";
import { SelectionStore } from "../state";
import type { RecordPayload } from "../types";

export class RecordsView {
  private records: RecordPayload[] = [];

  constructor(
    private root: HTMLElement,
    private store: SelectionStore,
    private api: ApiClient,
    private granularity: () => 1 | 5,
    private resolveSpans: (segments: number[], granularity: number) => [number, number][] = () => [],
  ) {
    this.render();
  }

  async refresh(): Promise<void> {
    this.records = await this.api.records();
    this.render();
  }

  async saveSelection(category: "Highlight" | "Drawback"): Promise<RecordPayload | null> {
    const selection = this.store.get();
    if (!selection.clipId || selection.segments.length === 0) {
      return null;
    }
    const record = await this.api.createRecord({
      category,
      target: selection.target,
      clip_id: selection.clipId,
      granularity: this.granularity(),
      segments: selection.segments,
    });
    await this.refresh();
    return record;
  }

  async deleteRecord(recordId: string): Promise<void> {
    await this.api.deleteRecord(recordId);
    await this.refresh();
  }

  render(): void {
    const host = d3.select(this.root);
    host.selectAll("*").remove();

    const toolbar = host.append("div").attr("class", "records-toolbar");
    toolbar.append("button").attr("class", "save-highlight").text("save as Highlight")
      .on("click", () => void this.saveSelection("Highlight"));
    toolbar.append("button").attr("class", "save-drawback").text("save as Drawback")
      .on("click", () => void this.saveSelection("Drawback"));
    toolbar.append("a").attr("class", "export-link")
      .attr("href", this.api.exportUrl())
      .attr("download", "records.json")
      .text("export all");

    const table = host.append("table").attr("class", "records-table");
    const head = table.append("thead").append("tr");
    for (const label of ["", "category", "target", "segments", "saved", ""]) {
      head.append("th").text(label);
    }
    const body = table.append("tbody");
    for (const record of this.records) {
      const row = body.append("tr").attr("class", "record-row").attr("data-record-id", record.record_id);
      const glyphCell = row.append("td");
      const svg = glyphCell.append("svg").attr("width", 44).attr("height", 44);
      const g = svg.append("g").attr("transform", "translate(22,22)");
      renderGlyph(g as d3.Selection<SVGGElement, unknown, null, undefined>, { blocks: record.glyph, gpmShare: 0.5 }, 20);
      row.append("td")
        .append("span")
        .attr("class", `category-badge badge-${record.category.toLowerCase()}`)
        .text(record.category);
      row.append("td").text(record.target);
      row.append("td").attr("class", "record-segments")
        .text(`${record.granularity} min × [${record.segments.join(", ")}]`)
        .on("click", () => this.store.set({
          clipId: record.clip_id,
          segments: [...record.segments],
          spans: this.resolveSpans(record.segments, record.granularity),
          origin: "records",
        }));
      row.append("td").text(new Date(record.created_ts * 1000).toISOString().slice(0, 10));
      row.append("td").append("button").attr("class", "delete-record").text("✕")
        .on("click", () => void this.deleteRecord(record.record_id));
    }
  }
}
