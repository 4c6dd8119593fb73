// Feed view: global histograms plus one card per post summary.

import type { Histograms, PostsPage } from "./api";
import { breakdownBar, histogramChart, temporalChart } from "./charts";
import { clear, el } from "./dom";
import type { ViewState } from "./state";

export interface FeedHandlers {
  onOpenThread(postId: string): void;
  onPage(page: number): void;
}

const METRIC_TIPS = {
  toxicity: "Toxicity: provider-estimated probability (0..1) that a comment reads as toxic; 1 is most toxic.",
  score: "Score: net upvotes minus downvotes; negative means downvoted overall.",
  activity: "Activity: number of comments created inside the current time window.",
};

export function renderFeed(
  container: HTMLElement,
  page: PostsPage,
  histograms: Histograms | null,
  state: ViewState,
  handlers: FeedHandlers,
): void {
  clear(container);
  const root = el("div", { class: "feed-view" });

  if (histograms) {
    const section = el("div", { class: "histograms", title: METRIC_TIPS.toxicity });
    section.appendChild(
      histogramChart(histograms.toxicity, state.toxicityThreshold, "Toxicity distribution"),
    );
    if (histograms.score) {
      section.appendChild(histogramChart(histograms.score, state.scoreThreshold, "Score distribution"));
    }
    root.appendChild(section);
  }

  const list = el("div", { class: "post-list" });
  if (page.posts.length === 0) {
    list.appendChild(
      el("div", { class: "empty-state" }, "No posts in view. Widen the time window or show inactive posts."),
    );
  }
  for (const post of page.posts) {
    const card = el(
      "article",
      { class: "post-card", "data-post-id": post.id },
      el(
        "header",
        { class: "post-head" },
        el("a", {
          class: "post-title",
          href: `#/thread/${post.id}`,
          onclick: (event: Event) => {
            event.preventDefault();
            handlers.onOpenThread(post.id);
          },
        }, post.title),
        el("span", { class: "post-meta", title: METRIC_TIPS.score },
          `by ${post.author} · score ${post.score} · ${post.comment_count} comments`),
        post.active
          ? el("span", { class: "active-flag", title: METRIC_TIPS.activity }, "active")
          : el("span", { class: "inactive-flag", title: METRIC_TIPS.activity }, "inactive"),
      ),
    );
    card.appendChild(breakdownBar(post.breakdown));
    card.appendChild(temporalChart(post.series, state.lineToggles));
    list.appendChild(card);
  }
  root.appendChild(list);

  const pages = Math.max(1, Math.ceil(page.total / page.page_size));
  root.appendChild(
    el(
      "nav",
      { class: "pager" },
      el("button", {
        class: "pager-prev",
        disabled: page.page <= 0,
        onclick: () => handlers.onPage(page.page - 1),
      }, "Newer"),
      el("span", { class: "pager-status" }, `page ${page.page + 1} of ${pages} · ${page.total} posts`),
      el("button", {
        class: "pager-next",
        disabled: page.page >= pages - 1,
        onclick: () => handlers.onPage(page.page + 1),
      }, "Older"),
    ),
  );
  container.appendChild(root);
}
