// Highlight styling per comment class. The mapping is total and injective
// over the four classes plus "off": every value below is distinct.

import type { CommentClassName, HighlightMode } from "./state";

export const CLASS_CSS: Record<CommentClassName | "off", string> = {
  toxic_only: "hl-toxic",
  high_score_only: "hl-high-score",
  both: "hl-both",
  none: "hl-none",
  off: "hl-off",
};

export const SERIES_COLORS: Record<"total" | "toxic" | "high_score", string> = {
  total: "#64748b",
  toxic: "#dc2626",
  high_score: "#16a34a",
};

export const BAR_COLORS: Record<"toxic_only" | "both" | "high_score_only" | "neither", string> = {
  toxic_only: "#dc2626",
  both: "#9333ea",
  high_score_only: "#16a34a",
  neither: "#cbd5e1",
};

/** Which CSS class a comment gets under the current highlight mode. */
export function highlightClass(commentClass: string, mode: HighlightMode): string {
  if (mode === "off") return CLASS_CSS.off;
  const cls = commentClass as CommentClassName;
  if (mode === "toxicity") {
    return cls === "toxic_only" || cls === "both" ? CLASS_CSS.toxic_only : CLASS_CSS.none;
  }
  if (mode === "score") {
    return cls === "high_score_only" || cls === "both" ? CLASS_CSS.high_score_only : CLASS_CSS.none;
  }
  return CLASS_CSS[cls] ?? CLASS_CSS.none;
}
