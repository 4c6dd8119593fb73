// Thread view: per-TLC temporal charts linked to the full comment
// hierarchy, with class highlights and moderation buttons.

import type { ActionKind, ThreadDetail } from "./api";
import { temporalChart } from "./charts";
import { highlightClass } from "./colors";
import { clear, el } from "./dom";
import type { ViewState } from "./state";

export interface ThreadHandlers {
  onAction(kind: ActionKind, commentId: string): void;
  onBack(): void;
}

const ACTION_KINDS: ActionKind[] = ["approve", "remove", "report"];

export function renderThread(
  container: HTMLElement,
  detail: ThreadDetail,
  state: ViewState,
  handlers: ThreadHandlers,
): void {
  clear(container);
  const root = el("div", { class: "thread-view" });
  root.appendChild(
    el(
      "header",
      { class: "thread-head" },
      el("button", { class: "back-button", onclick: () => handlers.onBack() }, "< feed"),
      el("h2", {}, detail.post.title),
      el("span", { class: "post-meta" }, `by ${detail.post.author} · score ${detail.post.score}`),
    ),
  );

  const columns = el("div", { class: "thread-columns" });
  const chartsCol = el("div", { class: "tlc-charts" });
  const activeSet = new Set(detail.active_tlcs);
  for (const tlcId of Object.keys(detail.tlc_series)) {
    const series = detail.tlc_series[tlcId];
    const card = el(
      "div",
      {
        class: `tlc-card${activeSet.has(tlcId) ? " tlc-active" : ""}`,
        "data-tlc-id": tlcId,
        onmouseenter: () => linkHover(container, tlcId, true),
        onmouseleave: () => linkHover(container, tlcId, false),
      },
      el(
        "div",
        { class: "tlc-card-head" },
        el("span", { class: "tlc-label" }, `TLC ${tlcId}`),
        activeSet.has(tlcId) ? el("span", { class: "active-flag" }, "active") : null,
        el("button", {
          class: "jump-button",
          "data-jump-to": tlcId,
          onclick: () => jumpTo(container, tlcId),
        }, "Jump to Comment"),
      ),
    );
    card.appendChild(temporalChart(series, state.lineToggles));
    chartsCol.appendChild(card);
  }
  columns.appendChild(chartsCol);

  const commentsCol = el("div", { class: "comment-tree" });
  if (detail.matched_ids !== null) {
    commentsCol.appendChild(
      el("div", { class: "filter-note" },
        `${detail.matched_ids.length} comment(s) match the filter; ancestors shown for context.`),
    );
  }
  for (const tlcId of detail.tlc_ids) {
    commentsCol.appendChild(renderSubtree(detail, tlcId, state, handlers, container));
  }
  if (detail.tlc_ids.length === 0) {
    commentsCol.appendChild(el("div", { class: "empty-state" }, "No comments to show."));
  }
  columns.appendChild(commentsCol);
  root.appendChild(columns);
  container.appendChild(root);
}

function renderSubtree(
  detail: ThreadDetail,
  commentId: string,
  state: ViewState,
  handlers: ThreadHandlers,
  container: HTMLElement,
): HTMLElement {
  const comment = detail.comments[commentId];
  const tlcId = rootOf(detail, commentId);
  const classes = [
    "comment",
    highlightClass(comment.comment_class, state.highlightMode),
    comment.context_only ? "context-only" : "",
    comment.tombstone ? "tombstone" : "",
  ].filter(Boolean).join(" ");

  const node = el(
    "div",
    {
      class: classes,
      id: `comment-${comment.id}`,
      "data-comment-id": comment.id,
      "data-class": comment.comment_class,
      onmouseenter: () => linkHover(container, tlcId, true),
      onmouseleave: () => linkHover(container, tlcId, false),
    },
    el(
      "div",
      { class: "comment-head" },
      el("span", { class: "comment-author" }, comment.author + (comment.orphaned ? " (orphaned)" : "")),
      el("span", {
        class: "comment-stats",
        title: "toxicity / score for this comment, as scored by the provider",
      }, `tox ${comment.toxicity === null ? "–" : comment.toxicity.toFixed(2)} · score ${comment.score}`),
      moderationBadge(comment.moderation),
    ),
    el("div", { class: "comment-body" }, comment.tombstone ? "[removed]" : comment.body),
    actionRow(comment.id, handlers),
  );

  const kids = detail.children[commentId] ?? [];
  if (kids.length > 0) {
    const childWrap = el("div", { class: "comment-children" });
    for (const kid of kids) {
      childWrap.appendChild(renderSubtree(detail, kid, state, handlers, container));
    }
    node.appendChild(childWrap);
  }
  return node;
}

function rootOf(detail: ThreadDetail, commentId: string): string {
  let current = commentId;
  while (true) {
    const parent = detail.comments[current]?.parent_id;
    if (parent === null || parent === undefined || !(parent in detail.comments)) return current;
    current = parent;
  }
}

function moderationBadge(moderation: string | null): HTMLElement {
  return el(
    "span",
    { class: `mod-state${moderation ? ` mod-${moderation}` : ""}`, "data-moderation": moderation ?? "" },
    moderation ? `[${moderation}]` : "",
  );
}

function actionRow(commentId: string, handlers: ThreadHandlers): HTMLElement {
  const row = el("div", { class: "action-row" });
  for (const kind of ACTION_KINDS) {
    row.appendChild(
      el("button", {
        class: `action-button action-${kind}`,
        "data-action": kind,
        onclick: () => handlers.onAction(kind, commentId),
      }, kind),
    );
  }
  return row;
}

function attrEscape(value: string): string {
  return value.replace(/["\\]/g, "\\$&");
}

function commentNode(container: HTMLElement, commentId: string): HTMLElement | null {
  return container.querySelector<HTMLElement>(`.comment[data-comment-id="${attrEscape(commentId)}"]`);
}

/** Update one comment's moderation badge from the server's effective state. */
export function applyModeration(container: HTMLElement, commentId: string, effectiveKind: string): void {
  const node = commentNode(container, commentId)?.querySelector(".mod-state");
  if (!node) return;
  node.setAttribute("data-moderation", effectiveKind);
  node.className = `mod-state mod-${effectiveKind}`;
  node.textContent = `[${effectiveKind}]`;
}

/** Scroll to a comment and flash a focus ring; no-op with a notice when absent. */
export function jumpTo(container: HTMLElement, commentId: string): void {
  const target = commentNode(container, commentId);
  if (!target) {
    notify(container, `Comment ${commentId} is not in the current view.`);
    return;
  }
  target.scrollIntoView({ behavior: "smooth", block: "center" });
  target.classList.add("jump-focus");
  setTimeout(() => target.classList.remove("jump-focus"), 1600);
}

function linkHover(container: HTMLElement, tlcId: string, on: boolean): void {
  const chart = container.querySelector(`.tlc-card[data-tlc-id="${attrEscape(tlcId)}"]`);
  const comment = commentNode(container, tlcId);
  for (const node of [chart, comment]) {
    if (node) node.classList.toggle("linked", on);
  }
}

export function notify(container: HTMLElement, message: string): void {
  const note = el("div", { class: "notice" }, message);
  container.appendChild(note);
  setTimeout(() => note.remove(), 2500);
}
