// The segment glyph: a central pie showing relative GPM, with the ring
// split into three sectors — audio rose (top-left), sales-pitch pie
// (top-right), expression donut (bottom). All views reuse this renderer
// so glyphs look identical wherever they appear.

import * as d3 from "d3";

import { CATEGORY_COLORS, CHANNEL_COLORS, EXPRESSION_COLORS } from "./encoding";
import type { RecordGlyph } from "./types";

const TAU = Math.PI * 2;
// d3 angles start at 12 o'clock; sectors: audio [-120°, 0°), text [0°, 120°), face [120°, 240°)
const SECTOR = TAU / 3;
const AUDIO_START = -SECTOR;
const TEXT_START = 0;
const FACE_START = SECTOR;

export interface GlyphDatum {
  blocks: RecordGlyph;
  /** Relative GPM in [0, 1] for the central pie. */
  gpmShare: number;
}

export function renderGlyph(
  group: d3.Selection<SVGGElement, unknown, null, undefined>,
  datum: GlyphDatum,
  radius: number,
): void {
  group.selectAll("*").remove();
  const inner = radius * 0.42;
  const arc = d3.arc<{ startAngle: number; endAngle: number; innerRadius: number; outerRadius: number }>()
    .startAngle((d) => d.startAngle)
    .endAngle((d) => d.endAngle)
    .innerRadius((d) => d.innerRadius)
    .outerRadius((d) => d.outerRadius);

  // central pie: filled angle encodes the segment's relative GPM
  group.append("circle").attr("r", inner).attr("fill", "#f2f3f5").attr("stroke", "#d7dae0");
  group.append("path")
    .attr("class", "glyph-gpm")
    .attr("fill", "#5a6acf")
    .attr("d", arc({ startAngle: 0, endAngle: Math.max(0.001, datum.gpmShare) * TAU, innerRadius: 0, outerRadius: inner }));

  // audio rose: four petals, length = normalized triple median
  const audio = datum.blocks.audio;
  if (audio) {
    const petals: number[] = [
      normalize(audio.volume[1], -80, 0),
      normalize(audio.pitch[1], 0, 500),
      normalize(audio.speech_rate[1], 0, 8),
      normalize(audio.pause[1], 0, 1),
    ];
    const petalAngle = SECTOR / petals.length;
    petals.forEach((value, i) => {
      group.append("path")
        .attr("class", "glyph-audio-petal")
        .attr("fill", CHANNEL_COLORS.audio)
        .attr("fill-opacity", 0.35 + 0.6 * (i % 2 ? 0.4 : 1))
        .attr("d", arc({
          startAngle: AUDIO_START + i * petalAngle,
          endAngle: AUDIO_START + (i + 1) * petalAngle,
          innerRadius: inner,
          outerRadius: inner + Math.max(0.04, value) * (radius - inner),
        }));
    });
  }

  // text pie: slice angles proportional to pitch-category word counts
  const text = datum.blocks.text;
  if (text) {
    const entries = Object.entries(text);
    const total = entries.reduce((acc, [, count]) => acc + count, 0);
    let angle = TEXT_START;
    for (const [category, count] of entries) {
      const share = total > 0 ? count / total : 1 / entries.length;
      const end = angle + share * SECTOR;
      group.append("path")
        .attr("class", "glyph-text-slice")
        .attr("data-category", category)
        .attr("fill", CATEGORY_COLORS[category] ?? CHANNEL_COLORS.text)
        .attr("d", arc({ startAngle: angle, endAngle: end, innerRadius: inner, outerRadius: radius * 0.92 }));
      angle = end;
    }
  }

  // face donut: arcs per expression, angle = share of segment seconds
  const face = datum.blocks.face;
  if (face) {
    let angle = FACE_START;
    for (const [expression, fraction] of Object.entries(face)) {
      if (fraction <= 0) continue;
      const end = angle + fraction * SECTOR;
      group.append("path")
        .attr("class", "glyph-face-arc")
        .attr("data-expression", expression)
        .attr("fill", EXPRESSION_COLORS[expression] ?? CHANNEL_COLORS.frame)
        .attr("d", arc({ startAngle: angle, endAngle: end, innerRadius: inner + (radius - inner) * 0.35, outerRadius: radius * 0.92 }));
      angle = end;
    }
    // frame-channel baseline ring so an expressionless segment still reads
    group.append("path")
      .attr("fill", CHANNEL_COLORS.frame)
      .attr("fill-opacity", 0.18)
      .attr("d", arc({ startAngle: FACE_START, endAngle: FACE_START + SECTOR, innerRadius: inner, outerRadius: inner + (radius - inner) * 0.3 }));
  }
}

function normalize(value: number, lo: number, hi: number): number {
  if (hi === lo) return 0;
  return Math.max(0, Math.min(1, (value - lo) / (hi - lo)));
}
