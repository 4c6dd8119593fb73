"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..analytics import BreakdownBar, Histogram, TemporalSeries


class ThresholdsModel(BaseModel):
    toxicity_threshold: float
    score_threshold: int


class WindowModel(BaseModel):
    anchor: int
    span_seconds: int


class BreakdownModel(BaseModel):
    toxic_only: int
    high_score_only: int
    both: int
    neither: int
    total: int

    @classmethod
    def from_bar(cls, bar: BreakdownBar) -> "BreakdownModel":
        return cls(
            toxic_only=bar.toxic_only,
            high_score_only=bar.high_score_only,
            both=bar.both,
            neither=bar.neither,
            total=bar.total,
        )


class SeriesModel(BaseModel):
    bin_edges: list[float]
    total: list[int]
    toxic: list[int]
    high_score: list[int]

    @classmethod
    def from_series(cls, series: TemporalSeries) -> "SeriesModel":
        return cls(
            bin_edges=series.bin_edges,
            total=series.total,
            toxic=series.toxic,
            high_score=series.high_score,
        )


class HistogramModel(BaseModel):
    metric: str
    bucket_edges: list[float]
    counts: list[int]

    @classmethod
    def from_histogram(cls, hist: Histogram) -> "HistogramModel":
        return cls(metric=hist.metric, bucket_edges=hist.bucket_edges, counts=hist.counts)


class PostSummary(BaseModel):
    id: str
    title: str
    author: str
    created_at: int
    score: int
    comment_count: int
    active: bool
    breakdown: BreakdownModel
    series: SeriesModel


class PostsPage(BaseModel):
    posts: list[PostSummary]
    total: int
    page: int
    page_size: int
    sort: str
    window: WindowModel
    thresholds: ThresholdsModel


class CommentView(BaseModel):
    id: str
    parent_id: str | None
    author: str
    body: str
    created_at: int
    score: int
    toxicity: float | None
    depth: int
    orphaned: bool
    tombstone: bool
    comment_class: str
    moderation: str | None = None
    context_only: bool = False


class PostInfo(BaseModel):
    id: str
    title: str
    author: str
    created_at: int
    score: int


class ThreadDetail(BaseModel):
    post: PostInfo
    tlc_ids: list[str]
    comments: dict[str, CommentView]
    children: dict[str, list[str]]
    tlc_series: dict[str, SeriesModel]
    active_tlcs: list[str]
    matched_ids: list[str] | None = None
    window: WindowModel
    thresholds: ThresholdsModel


class HistogramsResponse(BaseModel):
    toxicity: HistogramModel
    score: HistogramModel | None = None


class ActionRequest(BaseModel):
    kind: Literal["approve", "remove", "report"]
    comment_id: str
    actor: str = Field(min_length=1)


class ActionModel(BaseModel):
    action_id: str
    comment_id: str
    kind: str
    actor: str
    acted_at: int


class ActionResponse(ActionModel):
    effective_kind: str


class ActionsListResponse(BaseModel):
    actions: list[ActionModel]
    effective: dict[str, str]


class HealthResponse(BaseModel):
    status: str
    corpus_loaded: bool
    subreddit: str | None = None
    posts: int = 0
    comments: int = 0
    actions: int = 0
