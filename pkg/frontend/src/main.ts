// App shell: hash router, control panel, debounced refetch loop.

import { ApiClient, ApiError } from "./api";
import type { Histograms, PostsPage, ThreadDetail } from "./api";
import { clear, el } from "./dom";
import { renderFeed } from "./feed";
import {
  defaultState,
  stateFromHash,
  stateToHash,
  windowParams,
  type CommentClassName,
  type HighlightMode,
  type LineKey,
  type SortKey,
  type ViewState,
} from "./state";
import { applyModeration, notify, renderThread } from "./thread";

const DEBOUNCE_MS = 150;
const SPAN_CHOICES: [string, number][] = [
  ["8 min", 480], ["30 min", 1800], ["1 h", 3600], ["3 h", 10800],
  ["6 h", 21600], ["12 h", 43200], ["24 h", 86400],
];

export class App {
  state: ViewState = defaultState();
  private debounceTimer: number | undefined;

  constructor(
    private api: ApiClient,
    private controlsRoot: HTMLElement,
    private viewRoot: HTMLElement,
    private bannerRoot: HTMLElement,
  ) {}

  start(): void {
    this.state = stateFromHash(location.hash);
    window.addEventListener("hashchange", () => {
      this.state = stateFromHash(location.hash);
      this.renderControls();
      void this.refresh();
    });
    this.renderControls();
    void this.refresh();
  }

  private pushState(): void {
    const hash = stateToHash(this.state);
    if (location.hash !== hash) {
      history.replaceState(null, "", hash);
    }
  }

  /** Debounced control changes: one refetch per settled burst. */
  private scheduleRefresh(): void {
    this.pushState();
    if (this.debounceTimer !== undefined) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => void this.refresh(), DEBOUNCE_MS) as unknown as number;
  }

  async refresh(): Promise<void> {
    clear(this.bannerRoot);
    try {
      if (this.state.view.kind === "feed") {
        await this.loadFeed();
      } else {
        await this.loadThread(this.state.view.postId);
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 404 && this.state.view.kind === "thread") {
        // unknown post: fall back to the feed
        this.state.view = { kind: "feed" };
        this.pushState();
        this.renderControls();
        void this.refresh();
        return;
      }
      this.showBanner(error);
    }
  }

  private async loadFeed(): Promise<void> {
    const params = {
      ...windowParams(this.state),
      sort: this.state.sort,
      page: this.state.page,
      page_size: 25,
      show_inactive: this.state.showInactive,
    };
    const [postsRes, histRes] = await Promise.all([
      this.api.listPosts(params),
      this.api.getHistograms(),
    ]);
    if (postsRes.stale) return; // a newer request already superseded this one
    this.renderFeedView(postsRes.data, histRes.data);
  }

  renderFeedView(page: PostsPage, histograms: Histograms | null): void {
    renderFeed(this.viewRoot, page, histograms, this.state, {
      onOpenThread: (postId) => {
        this.state.view = { kind: "thread", postId };
        this.pushState();
        this.renderControls();
        void this.refresh();
      },
      onPage: (pageIndex) => {
        this.state.page = pageIndex;
        this.scheduleRefresh();
      },
    });
  }

  private async loadThread(postId: string): Promise<void> {
    const params: Record<string, unknown> = { ...windowParams(this.state) };
    if (this.state.filterClasses !== null) {
      params.filter = [...this.state.filterClasses];
    }
    const res = await this.api.getThread(postId, params as never);
    if (res.stale) return;
    this.renderThreadView(res.data);
  }

  renderThreadView(detail: ThreadDetail): void {
    renderThread(this.viewRoot, detail, this.state, {
      onAction: (kind, commentId) => void this.submitAction(kind, commentId),
      onBack: () => {
        this.state.view = { kind: "feed" };
        this.state.filterClasses = null;
        this.pushState();
        this.renderControls();
        void this.refresh();
      },
    });
  }

  async submitAction(kind: "approve" | "remove" | "report", commentId: string): Promise<void> {
    try {
      const result = await this.api.postAction(kind, commentId, "moderator");
      // trust the server's fold, never the clicked kind
      applyModeration(this.viewRoot, commentId, result.effective_kind);
    } catch (error) {
      notify(this.viewRoot, `Action failed: ${String(error)}`);
    }
  }

  private showBanner(error: unknown): void {
    clear(this.bannerRoot);
    const message = error instanceof ApiError
      ? `Server error ${error.status}: ${error.message}`
      : "Server unreachable.";
    this.bannerRoot.appendChild(
      el(
        "div",
        { class: "error-banner" },
        message + " ",
        el("button", { class: "retry-button", onclick: () => void this.refresh() }, "Retry"),
      ),
    );
  }

  renderControls(): void {
    clear(this.controlsRoot);
    const state = this.state;
    const panel = el("div", { class: "controls" });

    panel.appendChild(
      controlBlock(
        "Toxicity threshold",
        "Comments at or above this toxicity count as toxic.",
        el("input", {
          type: "range", min: 0, max: 1, step: 0.01,
          value: state.toxicityThreshold,
          class: "ctl-toxicity",
          oninput: (event: Event) => {
            state.toxicityThreshold = Number((event.target as HTMLInputElement).value);
            this.scheduleRefresh();
          },
        }),
        el("span", { class: "ctl-value" }, state.toxicityThreshold.toFixed(2)),
      ),
    );
    panel.appendChild(
      controlBlock(
        "Score threshold",
        "Comments at or above this net vote score count as highly scored.",
        el("input", {
          type: "number", value: state.scoreThreshold, class: "ctl-score",
          onchange: (event: Event) => {
            state.scoreThreshold = Number((event.target as HTMLInputElement).value);
            this.scheduleRefresh();
          },
        }),
      ),
    );

    const spanSelect = el("select", {
      class: "ctl-span",
      onchange: (event: Event) => {
        state.spanSeconds = Number((event.target as HTMLSelectElement).value);
        this.scheduleRefresh();
      },
    });
    for (const [label, seconds] of SPAN_CHOICES) {
      const opt = el("option", { value: seconds }, label) as unknown as HTMLOptionElement;
      if (seconds === state.spanSeconds) opt.selected = true;
      spanSelect.appendChild(opt);
    }
    panel.appendChild(controlBlock("Time range", "How far back from the anchor counts as recent.", spanSelect));

    panel.appendChild(
      controlBlock(
        "Anchor",
        "Metrics look back from this instant; empty means the corpus snapshot time.",
        el("input", {
          type: "number", placeholder: "epoch seconds", class: "ctl-anchor",
          value: state.anchor === null ? "" : String(state.anchor),
          onchange: (event: Event) => {
            const raw = (event.target as HTMLInputElement).value.trim();
            state.anchor = raw === "" ? null : Number(raw);
            this.scheduleRefresh();
          },
        }),
      ),
    );

    const lineBlock = el("div", { class: "ctl-lines" });
    for (const key of ["total", "toxic", "high_score"] as LineKey[]) {
      lineBlock.appendChild(toggle(key, state.lineToggles.has(key), (on) => {
        if (on) state.lineToggles.add(key);
        else state.lineToggles.delete(key);
        this.scheduleRefresh();
      }));
    }
    panel.appendChild(controlBlock("Chart lines", "Toggle series lines on the temporal charts.", lineBlock));

    if (state.view.kind === "feed") {
      const sortSelect = el("select", {
        class: "ctl-sort",
        onchange: (event: Event) => {
          state.sort = (event.target as HTMLSelectElement).value as SortKey;
          state.page = 0;
          this.scheduleRefresh();
        },
      });
      for (const key of ["recency", "toxicity", "score", "activity"] as SortKey[]) {
        const opt = el("option", { value: key }, key) as unknown as HTMLOptionElement;
        if (key === state.sort) opt.selected = true;
        sortSelect.appendChild(opt);
      }
      panel.appendChild(controlBlock("Sort posts", "Order posts by the selected signal, highest first.", sortSelect));
      panel.appendChild(
        controlBlock(
          "Inactive posts",
          "Show posts without any comments inside the window.",
          toggle("show inactive", state.showInactive, (on) => {
            state.showInactive = on;
            state.page = 0;
            this.scheduleRefresh();
          }),
        ),
      );
    } else {
      const hlSelect = el("select", {
        class: "ctl-highlight",
        onchange: (event: Event) => {
          state.highlightMode = (event.target as HTMLSelectElement).value as HighlightMode;
          this.scheduleRefresh();
        },
      });
      for (const mode of ["toxicity", "score", "both", "off"] as HighlightMode[]) {
        const opt = el("option", { value: mode }, mode) as unknown as HTMLOptionElement;
        if (mode === state.highlightMode) opt.selected = true;
        hlSelect.appendChild(opt);
      }
      panel.appendChild(controlBlock("Highlight", "Which classes get colored highlights.", hlSelect));

      const filterBlock = el("div", { class: "ctl-filter" });
      const classes: CommentClassName[] = ["toxic_only", "high_score_only", "both", "none"];
      for (const cls of classes) {
        filterBlock.appendChild(toggle(cls, state.filterClasses?.has(cls) ?? false, (on) => {
          if (state.filterClasses === null) state.filterClasses = new Set();
          if (on) state.filterClasses.add(cls);
          else state.filterClasses.delete(cls);
          if (state.filterClasses.size === 0) state.filterClasses = null;
          this.scheduleRefresh();
        }));
      }
      panel.appendChild(
        controlBlock("Filter comments", "Show only comments in the checked classes (with ancestor context).", filterBlock),
      );
    }
    this.controlsRoot.appendChild(panel);
  }
}

function controlBlock(label: string, tip: string, ...children: (Node | string)[]): HTMLElement {
  return el("div", { class: "control-block", title: tip }, el("label", {}, label), ...children);
}

function toggle(label: string, checked: boolean, onChange: (on: boolean) => void): HTMLElement {
  const input = el("input", {
    type: "checkbox",
    "data-toggle": label,
    onchange: (event: Event) => onChange((event.target as HTMLInputElement).checked),
  }) as HTMLInputElement;
  input.checked = checked;
  return el("label", { class: "toggle" }, input, label);
}

export function boot(): void {
  const controls = document.getElementById("controls");
  const view = document.getElementById("view");
  const banner = document.getElementById("banner");
  if (!controls || !view || !banner) throw new Error("missing app mount points");
  new App(new ApiClient(""), controls, view, banner).start();
}

if (typeof document !== "undefined" && document.getElementById("view")) {
  boot();
}
