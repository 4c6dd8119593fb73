"""FastAPI application serving corpus snapshots and analytics.

Read endpoints are pure functions of (snapshot, action log, query
params): the window anchor defaults to the corpus fetch time, never the
wall clock, so identical queries over an identical snapshot return
identical responses. Thresholds and window arrive per request; the UI
never re-derives metrics.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import analytics
from ..analytics import CommentClass, MetricThresholds, TimeWindow
from ..errors import (
    CorpusNotLoaded,
    EmptyCorpus,
    StorageFailure,
    ThreadLensError,
    UnknownComment,
    UnknownPost,
    UnscoredComment,
)
from .schemas import (
    ActionModel,
    ActionRequest,
    ActionResponse,
    ActionsListResponse,
    BreakdownModel,
    CommentView,
    HealthResponse,
    HistogramModel,
    HistogramsResponse,
    PostInfo,
    PostsPage,
    PostSummary,
    SeriesModel,
    ThreadDetail,
    ThresholdsModel,
    WindowModel,
)
from .state import AppState, Snapshot

_STATUS_BY_ERROR = (
    (UnknownPost, 404),
    (UnknownComment, 404),
    (CorpusNotLoaded, 503),
    (UnscoredComment, 409),
    (EmptyCorpus, 409),
    (StorageFailure, 500),
)


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="threadlens", version="0.1.0")
    app.state.threadlens = state

    @app.exception_handler(ThreadLensError)
    async def handle_domain_error(request: Request, exc: ThreadLensError):
        for error_type, status in _STATUS_BY_ERROR:
            if isinstance(exc, error_type):
                return JSONResponse(status_code=status, content={"detail": str(exc)})
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.middleware("http")
    async def count_requests(request: Request, call_next):
        state.count_request(request.url.path)
        return await call_next(request)

    def snapshot() -> Snapshot:
        if state.snapshot is None:
            raise CorpusNotLoaded("no corpus loaded")
        return state.snapshot

    def resolve_window(anchor: int | None, span_seconds: int) -> TimeWindow:
        snap = snapshot()
        return TimeWindow(anchor=snap.corpus.fetched_at if anchor is None else anchor, span_seconds=span_seconds)

    @app.get("/health", response_model=HealthResponse)
    def health():
        snap = state.snapshot
        return HealthResponse(
            status="ok",
            corpus_loaded=snap is not None,
            subreddit=snap.corpus.subreddit if snap else None,
            posts=len(snap.corpus.threads) if snap else 0,
            comments=snap.corpus.comment_count() if snap else 0,
            actions=len(state.actions.actions),
        )

    @app.get("/posts", response_model=PostsPage)
    def list_posts(
        sort: str = Query("recency", pattern="^(recency|toxicity|score|activity)$"),
        page: int = Query(0, ge=0),
        page_size: int = Query(25, ge=1),
        toxicity_threshold: float = Query(analytics.DEFAULT_TOXICITY_THRESHOLD, ge=0.0, le=1.0),
        score_threshold: int = Query(analytics.DEFAULT_SCORE_THRESHOLD),
        anchor: int | None = Query(None),
        span_seconds: int = Query(analytics.MAX_SPAN_SECONDS),
        show_inactive: bool = Query(True),
        bins: int = Query(analytics.DEFAULT_BINS, ge=1),
    ):
        snap = snapshot()
        thresholds = MetricThresholds(toxicity_threshold=toxicity_threshold, score_threshold=score_threshold)
        window = resolve_window(anchor, span_seconds)
        ordered = analytics.sort_posts(snap.corpus, sort, thresholds, window)
        actives = analytics.active_posts(snap.corpus, window)
        if not show_inactive:
            ordered = [pid for pid in ordered if pid in actives]
        total = len(ordered)
        page_ids = ordered[page * page_size:(page + 1) * page_size]
        summaries = []
        for pid in page_ids:
            thread = snap.threads_by_post[pid]
            summaries.append(PostSummary(
                id=pid,
                title=thread.post.title,
                author=thread.post.author,
                created_at=thread.post.created_at,
                score=thread.post.score,
                comment_count=len(thread.comments),
                active=pid in actives,
                breakdown=BreakdownModel.from_bar(analytics.breakdown(thread, thresholds, window)),
                series=SeriesModel.from_series(
                    analytics.temporal_series(thread.comments.values(), window, bins, thresholds)
                ),
            ))
        return PostsPage(
            posts=summaries,
            total=total,
            page=page,
            page_size=page_size,
            sort=sort,
            window=WindowModel(anchor=window.anchor, span_seconds=window.span_seconds),
            thresholds=ThresholdsModel(
                toxicity_threshold=thresholds.toxicity_threshold,
                score_threshold=thresholds.score_threshold,
            ),
        )

    @app.get("/posts/{post_id}", response_model=ThreadDetail)
    def get_thread(
        post_id: str,
        toxicity_threshold: float = Query(analytics.DEFAULT_TOXICITY_THRESHOLD, ge=0.0, le=1.0),
        score_threshold: int = Query(analytics.DEFAULT_SCORE_THRESHOLD),
        anchor: int | None = Query(None),
        span_seconds: int = Query(analytics.MAX_SPAN_SECONDS),
        bins: int = Query(analytics.DEFAULT_BINS, ge=1),
        filter: list[CommentClass] | None = Query(None),
    ):
        snap = snapshot()
        thread = snap.threads_by_post.get(post_id)
        if thread is None:
            raise UnknownPost(f"no post {post_id} in the loaded corpus")
        thresholds = MetricThresholds(toxicity_threshold=toxicity_threshold, score_threshold=score_threshold)
        window = resolve_window(anchor, span_seconds)

        tlc_series = {
            tlc_id: SeriesModel.from_series(
                analytics.tlc_series(thread, tlc_id, window, bins, thresholds)
            )
            for tlc_id in thread.post.tlc_ids
        }
        actives = analytics.active_tlcs(thread, window)

        matched_ids: list[str] | None = None
        included: set[str] | None = None  # None means every comment
        context: set[str] = set()
        if filter is not None:
            hits = analytics.filter_comments(thread, set(filter), thresholds)
            matched_ids = [cid for cid, _ in hits]
            included = set(matched_ids)
            for _, chain in hits:
                context.update(chain)
            context -= included
            included |= context

        effective = state.actions.effective_states()
        views: dict[str, CommentView] = {}
        for cid in thread.walk():
            if included is not None and cid not in included:
                continue
            c = thread.comments[cid]
            views[cid] = CommentView(
                id=c.id,
                parent_id=c.parent_id,
                author=c.author,
                body=c.body,
                created_at=c.created_at,
                score=c.score,
                toxicity=c.toxicity,
                depth=c.depth,
                orphaned=c.orphaned,
                tombstone=c.tombstone,
                comment_class=analytics.classify(c, thresholds).value,
                moderation=effective.get(cid),
                context_only=cid in context,
            )
        children = {
            cid: [k for k in thread.child_ids(cid) if k in views]
            for cid in views
        }
        tlc_ids = [tid for tid in thread.post.tlc_ids if tid in views]

        return ThreadDetail(
            post=PostInfo(
                id=thread.post.id,
                title=thread.post.title,
                author=thread.post.author,
                created_at=thread.post.created_at,
                score=thread.post.score,
            ),
            tlc_ids=tlc_ids,
            comments=views,
            children=children,
            tlc_series=tlc_series,
            active_tlcs=sorted(actives),
            matched_ids=matched_ids,
            window=WindowModel(anchor=window.anchor, span_seconds=window.span_seconds),
            thresholds=ThresholdsModel(
                toxicity_threshold=thresholds.toxicity_threshold,
                score_threshold=thresholds.score_threshold,
            ),
        )

    @app.get("/histograms", response_model=HistogramsResponse)
    def get_histograms(buckets: int = Query(analytics.DEFAULT_HISTOGRAM_BUCKETS, ge=1)):
        snap = snapshot()
        toxicity = HistogramModel.from_histogram(analytics.histogram(snap.corpus, "toxicity", buckets))
        score = None
        if snap.corpus.comment_count() > 0:
            score = HistogramModel.from_histogram(analytics.histogram(snap.corpus, "score", buckets))
        return HistogramsResponse(toxicity=toxicity, score=score)

    @app.post("/actions", response_model=ActionResponse)
    def post_action(request: ActionRequest):
        state.require_comment(request.comment_id)
        action = state.actions.append(request.comment_id, request.kind, request.actor)
        return ActionResponse(
            **action.to_dict(),
            effective_kind=state.actions.effective_kind(request.comment_id) or action.kind,
        )

    @app.get("/actions", response_model=ActionsListResponse)
    def list_actions():
        return ActionsListResponse(
            actions=[ActionModel(**a.to_dict()) for a in state.actions.actions],
            effective=state.actions.effective_states(),
        )

    return app


def attach_ui(app: FastAPI, ui_dir: str) -> None:
    """Serve a built frontend bundle under /ui when the directory exists."""
    path = Path(ui_dir)
    if path.is_dir():
        app.mount("/ui", StaticFiles(directory=str(path), html=True), name="ui")
