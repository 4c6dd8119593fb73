// SVG chart rendering. Counts come straight from server payloads; this
// module only scales them to pixels.

import type { Breakdown, HistogramData, Series } from "./api";
import { BAR_COLORS, SERIES_COLORS } from "./colors";
import { el, svgEl } from "./dom";
import type { LineKey } from "./state";

const CHART_W = 280;
const CHART_H = 64;
const PAD = 4;

function polylinePoints(counts: number[], max: number): string {
  const n = counts.length;
  const stepX = (CHART_W - 2 * PAD) / Math.max(1, n - 1);
  return counts
    .map((count, i) => {
      const x = PAD + i * stepX;
      const y = CHART_H - PAD - (max > 0 ? (count / max) * (CHART_H - 2 * PAD) : 0);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

/** Temporal activity chart: one polyline per toggled series line. */
export function temporalChart(series: Series, lines: Set<LineKey>): HTMLElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${CHART_W} ${CHART_H}`,
    width: CHART_W,
    height: CHART_H,
    class: "temporal-chart",
  });
  svg.appendChild(
    svgEl("line", {
      x1: PAD, y1: CHART_H - PAD, x2: CHART_W - PAD, y2: CHART_H - PAD,
      stroke: "#e2e8f0", "stroke-width": 1,
    }),
  );
  const visible: LineKey[] = (["total", "toxic", "high_score"] as LineKey[]).filter((k) => lines.has(k));
  const max = Math.max(1, ...visible.flatMap((key) => series[key]));
  for (const key of visible) {
    const poly = svgEl("polyline", {
      points: polylinePoints(series[key], max),
      fill: "none",
      stroke: SERIES_COLORS[key],
      "stroke-width": key === "total" ? 1.5 : 2,
      "data-line": key,
    });
    svg.appendChild(poly);
  }
  const wrap = el("div", { class: "chart-wrap" });
  wrap.appendChild(svg);
  return wrap;
}

/**
 * Segmented comment breakdown bar. Segment widths are proportional to the
 * server-reported counts; each segment exposes its count via data-count.
 */
export function breakdownBar(bar: Breakdown): HTMLElement {
  const wrap = el("div", {
    class: "breakdown-bar",
    title:
      `toxic ${bar.toxic_only} / both ${bar.both} / ` +
      `high-score ${bar.high_score_only} / neither ${bar.neither} (total ${bar.total})`,
  });
  const segments: [keyof typeof BAR_COLORS, number][] = [
    ["toxic_only", bar.toxic_only],
    ["both", bar.both],
    ["high_score_only", bar.high_score_only],
    ["neither", bar.neither],
  ];
  for (const [name, count] of segments) {
    const width = bar.total > 0 ? (count / bar.total) * 100 : 0;
    wrap.appendChild(
      el("span", {
        class: `bar-segment seg-${name}`,
        "data-segment": name,
        "data-count": count,
        style: `width:${width}%;background:${BAR_COLORS[name]}`,
      }),
    );
  }
  wrap.appendChild(el("span", { class: "bar-total", "data-total": bar.total }, String(bar.total)));
  return wrap;
}

/** Global distribution histogram with a threshold marker. */
export function histogramChart(hist: HistogramData, threshold: number | null, label: string): HTMLElement {
  const width = 220;
  const height = 72;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
    class: "histogram",
    "data-metric": hist.metric,
  });
  const n = hist.counts.length;
  const max = Math.max(1, ...hist.counts);
  const barW = (width - 2 * PAD) / n;
  hist.counts.forEach((count, i) => {
    const h = (count / max) * (height - 18);
    svg.appendChild(
      svgEl("rect", {
        x: PAD + i * barW,
        y: height - 14 - h,
        width: Math.max(1, barW - 1),
        height: h,
        fill: "#94a3b8",
        "data-bucket": i,
        "data-count": count,
      }),
    );
  });
  if (threshold !== null) {
    const lo = hist.bucket_edges[0];
    const hi = hist.bucket_edges[hist.bucket_edges.length - 1];
    if (hi > lo && threshold >= lo && threshold <= hi) {
      const x = PAD + ((threshold - lo) / (hi - lo)) * (width - 2 * PAD);
      svg.appendChild(
        svgEl("line", { x1: x, y1: 2, x2: x, y2: height - 14, stroke: "#dc2626", "stroke-dasharray": "3,2" }),
      );
    }
  }
  const wrap = el("div", { class: "histogram-wrap" }, el("div", { class: "histogram-label" }, label));
  wrap.appendChild(svg);
  return wrap;
}
