// Typed client for the analytics server. The UI never computes metrics:
// everything rendered comes straight from these response payloads.

export interface Thresholds {
  toxicity_threshold: number;
  score_threshold: number;
}

export interface Window {
  anchor: number;
  span_seconds: number;
}

export interface Breakdown {
  toxic_only: number;
  high_score_only: number;
  both: number;
  neither: number;
  total: number;
}

export interface Series {
  bin_edges: number[];
  total: number[];
  toxic: number[];
  high_score: number[];
}

export interface HistogramData {
  metric: string;
  bucket_edges: number[];
  counts: number[];
}

export interface PostSummary {
  id: string;
  title: string;
  author: string;
  created_at: number;
  score: number;
  comment_count: number;
  active: boolean;
  breakdown: Breakdown;
  series: Series;
}

export interface PostsPage {
  posts: PostSummary[];
  total: number;
  page: number;
  page_size: number;
  sort: string;
  window: Window;
  thresholds: Thresholds;
}

export interface CommentView {
  id: string;
  parent_id: string | null;
  author: string;
  body: string;
  created_at: number;
  score: number;
  toxicity: number | null;
  depth: number;
  orphaned: boolean;
  tombstone: boolean;
  comment_class: string;
  moderation: string | null;
  context_only: boolean;
}

export interface ThreadDetail {
  post: { id: string; title: string; author: string; created_at: number; score: number };
  tlc_ids: string[];
  comments: Record<string, CommentView>;
  children: Record<string, string[]>;
  tlc_series: Record<string, Series>;
  active_tlcs: string[];
  matched_ids: string[] | null;
  window: Window;
  thresholds: Thresholds;
}

export interface Histograms {
  toxicity: HistogramData;
  score: HistogramData | null;
}

export interface ActionResponse {
  action_id: string;
  comment_id: string;
  kind: string;
  actor: string;
  acted_at: number;
  effective_kind: string;
}

export type ActionKind = "approve" | "remove" | "report";

type Query = Record<string, string | number | boolean | string[] | undefined>;

function queryString(params: Query): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value === undefined) continue;
    if (Array.isArray(value)) {
      for (const v of value) parts.push(`${encodeURIComponent(key)}=${encodeURIComponent(v)}`);
    } else {
      parts.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
    }
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/**
 * Thin fetch wrapper. Concurrent GETs for the same URL share one request;
 * responses arriving after a newer request for the same endpoint path are
 * flagged stale so callers can drop them.
 */
export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();
  private sequence = new Map<string, number>();

  constructor(private baseUrl: string = "") {}

  private async getJson<T>(path: string, params: Query = {}): Promise<T> {
    const url = this.baseUrl + path + queryString(params);
    const existing = this.inflight.get(url);
    if (existing) return existing as Promise<T>;
    const promise = (async () => {
      try {
        const resp = await fetch(url);
        if (!resp.ok) {
          let detail = resp.statusText;
          try {
            detail = ((await resp.json()) as { detail?: string }).detail ?? detail;
          } catch {
            /* non-JSON error body */
          }
          throw new ApiError(resp.status, detail);
        }
        return (await resp.json()) as T;
      } finally {
        this.inflight.delete(url);
      }
    })();
    this.inflight.set(url, promise);
    return promise;
  }

  /** GET that tags each call per endpoint; resolves {stale: true} for superseded calls. */
  async getLatest<T>(path: string, params: Query = {}): Promise<{ data: T; stale: boolean }> {
    const seq = (this.sequence.get(path) ?? 0) + 1;
    this.sequence.set(path, seq);
    const data = await this.getJson<T>(path, params);
    return { data, stale: this.sequence.get(path) !== seq };
  }

  listPosts(params: Query): Promise<{ data: PostsPage; stale: boolean }> {
    return this.getLatest<PostsPage>("/posts", params);
  }

  getThread(postId: string, params: Query): Promise<{ data: ThreadDetail; stale: boolean }> {
    return this.getLatest<ThreadDetail>(`/posts/${encodeURIComponent(postId)}`, params);
  }

  getHistograms(): Promise<{ data: Histograms; stale: boolean }> {
    return this.getLatest<Histograms>("/histograms");
  }

  async postAction(kind: ActionKind, commentId: string, actor: string): Promise<ActionResponse> {
    const resp = await fetch(this.baseUrl + "/actions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ kind, comment_id: commentId, actor }),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, `action failed: ${resp.status}`);
    }
    return (await resp.json()) as ActionResponse;
  }
}
