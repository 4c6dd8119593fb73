// View state and its URL (hash) round-trip, so any view is shareable.

export type SortKey = "recency" | "toxicity" | "score" | "activity";
export type HighlightMode = "toxicity" | "score" | "both" | "off";
export type LineKey = "total" | "toxic" | "high_score";
export type CommentClassName = "none" | "toxic_only" | "high_score_only" | "both";

export interface ViewState {
  view: { kind: "feed" } | { kind: "thread"; postId: string };
  toxicityThreshold: number;
  scoreThreshold: number;
  anchor: number | null; // null: server default (corpus fetch time)
  spanSeconds: number;
  sort: SortKey;
  showInactive: boolean;
  lineToggles: Set<LineKey>;
  highlightMode: HighlightMode;
  filterClasses: Set<CommentClassName> | null;
  page: number;
}

export const DEFAULT_SPAN = 86400;

export function defaultState(): ViewState {
  return {
    view: { kind: "feed" },
    toxicityThreshold: 0.2,
    scoreThreshold: 10,
    anchor: null,
    spanSeconds: DEFAULT_SPAN,
    sort: "recency",
    showInactive: true,
    lineToggles: new Set<LineKey>(["total", "toxic", "high_score"]),
    highlightMode: "toxicity",
    filterClasses: null,
    page: 0,
  };
}

export function stateToHash(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("tox", String(state.toxicityThreshold));
  params.set("score", String(state.scoreThreshold));
  if (state.anchor !== null) params.set("anchor", String(state.anchor));
  params.set("span", String(state.spanSeconds));
  params.set("sort", state.sort);
  params.set("inactive", state.showInactive ? "1" : "0");
  params.set("lines", [...state.lineToggles].sort().join(","));
  params.set("hl", state.highlightMode);
  if (state.filterClasses !== null) params.set("filter", [...state.filterClasses].sort().join(","));
  if (state.page > 0) params.set("page", String(state.page));
  const route = state.view.kind === "feed" ? "/feed" : `/thread/${state.view.postId}`;
  return `#${route}?${params.toString()}`;
}

export function stateFromHash(hash: string): ViewState {
  const state = defaultState();
  const stripped = hash.replace(/^#/, "");
  const [route, query = ""] = stripped.split("?", 2);
  const threadMatch = route.match(/^\/thread\/(.+)$/);
  if (threadMatch) {
    state.view = { kind: "thread", postId: decodeURIComponent(threadMatch[1]) };
  }
  const params = new URLSearchParams(query);
  const num = (key: string) => {
    const raw = params.get(key);
    if (raw === null) return null;
    const value = Number(raw);
    return Number.isFinite(value) ? value : null;
  };
  state.toxicityThreshold = num("tox") ?? state.toxicityThreshold;
  state.scoreThreshold = num("score") ?? state.scoreThreshold;
  state.anchor = num("anchor");
  state.spanSeconds = num("span") ?? state.spanSeconds;
  const sort = params.get("sort");
  if (sort === "recency" || sort === "toxicity" || sort === "score" || sort === "activity") {
    state.sort = sort;
  }
  if (params.get("inactive") !== null) state.showInactive = params.get("inactive") === "1";
  const lines = params.get("lines");
  if (lines !== null) {
    state.lineToggles = new Set(
      lines.split(",").filter((l): l is LineKey => l === "total" || l === "toxic" || l === "high_score"),
    );
  }
  const hl = params.get("hl");
  if (hl === "toxicity" || hl === "score" || hl === "both" || hl === "off") {
    state.highlightMode = hl;
  }
  const filter = params.get("filter");
  if (filter !== null) {
    state.filterClasses = new Set(
      filter.split(",").filter(
        (c): c is CommentClassName =>
          c === "none" || c === "toxic_only" || c === "high_score_only" || c === "both",
      ),
    );
  }
  state.page = num("page") ?? 0;
  return state;
}

/** Query params shared by the feed and thread endpoints. */
export function windowParams(state: ViewState) {
  return {
    toxicity_threshold: state.toxicityThreshold,
    score_threshold: state.scoreThreshold,
    anchor: state.anchor ?? undefined,
    span_seconds: state.spanSeconds,
  };
}
